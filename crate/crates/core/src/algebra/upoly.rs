//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_base::{BitTest, Gcd, UnsignedAbs};
use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use super::numeric::BigComplex;
use super::rational::{fmt as qfmt, int, is_zero, Rational};
use crate::error::{Error, Result};

/// Coefficients lowest degree first; trailing zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rational>,
    var: String,
}

/// `p = scalar * prod(factor^multiplicity)` with monic, squarefree, pairwise coprime factors.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeFactorization {
    pub scalar: Rational,
    pub factors: Vec<(UPoly, u32)>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>, var: &str) -> Self {
        while coeffs.last().is_some_and(is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs, var: var.to_string() }
    }

    pub fn from_ints(coeffs: &[i64], var: &str) -> Self {
        UPoly::new(coeffs.iter().map(|&c| int(c)).collect(), var)
    }

    pub fn zero(var: &str) -> Self {
        UPoly::new(vec![], var)
    }

    pub fn one(var: &str) -> Self {
        UPoly::constant(int(1), var)
    }

    pub fn constant(c: Rational, var: &str) -> Self {
        UPoly::new(vec![c], var)
    }

    /// The variable itself.
    pub fn x(var: &str) -> Self {
        UPoly::new(vec![int(0), int(1)], var)
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: usize, var: &str) -> Self {
        let mut v = vec![Rational::ZERO; k + 1];
        v[k] = c;
        UPoly::new(v, var)
    }

    /// `lc * prod(x - r)`.
    pub fn from_roots(lc: &Rational, roots: &[Rational], var: &str) -> Self {
        let mut p = UPoly::constant(lc.clone(), var);
        for r in roots {
            p = &p * &UPoly::new(vec![-r.clone(), int(1)], var);
        }
        p
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn with_var(&self, var: &str) -> Self {
        UPoly { coeffs: self.coeffs.clone(), var: var.to_string() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or(Rational::ZERO)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &BigComplex) -> BigComplex {
        let bits = z.precision();
        let mut acc = BigComplex::zero(bits);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + &BigComplex::from_rational(c, bits);
        }
        acc
    }

    /// Value and derivative by one Horner pass.
    pub fn eval_complex_with_derivative(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        let bits = z.precision();
        let mut p = BigComplex::zero(bits);
        let mut dp = BigComplex::zero(bits);
        for c in self.coeffs.iter().rev() {
            dp = &(&dp * z) + &p;
            p = &(&p * z) + &BigComplex::from_rational(c, bits);
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect();
        UPoly::new(c, &self.var)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c * s).collect(), &self.var)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::ONE / self.lc();
        self.scale(&inv)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = UPoly::one(&self.var);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        self.compose(&UPoly::new(vec![c.clone(), int(1)], &self.var))
    }

    /// `self(inner)`; result carries the variable of `inner`.
    pub fn compose(&self, inner: &UPoly) -> Self {
        let mut acc = UPoly::zero(&inner.var);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UPoly::constant(c.clone(), &inner.var);
        }
        acc
    }

    /// Homogeneous Möbius action on a form of formal degree `n`:
    /// `sum f_i (a x + b)^i (c x + d)^(n - i)`.
    pub fn mobius(&self, n: usize, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Self {
        let num = UPoly::new(vec![b.clone(), a.clone()], &self.var);
        let den = UPoly::new(vec![d.clone(), c.clone()], &self.var);
        let mut acc = UPoly::zero(&self.var);
        for i in 0..=n {
            let fi = self.coeff(i);
            if is_zero(&fi) {
                continue;
            }
            acc = &acc + &(&num.pow(i as u32) * &den.pow((n - i) as u32)).scale(&fi);
        }
        acc
    }

    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        if d.is_zero() {
            return Err(Error::ZeroInput);
        }
        let dd = d.deg();
        let inv = Rational::ONE / d.lc();
        let mut r = self.coeffs.clone();
        if r.len() < dd + 1 {
            return Ok((UPoly::zero(&self.var), self.clone()));
        }
        let mut q = vec![Rational::ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !is_zero(&c) {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((UPoly::new(q, &self.var), UPoly::new(r, &self.var)))
    }

    pub fn rem(&self, d: &UPoly) -> Result<UPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Largest `k` with `place^k | self`; `self` must be nonzero.
    pub fn valuation(&self, place: &UPoly) -> usize {
        assert!(!self.is_zero(), "valuation of zero");
        let mut k = 0;
        let mut p = self.clone();
        while let Some(q) = p.exact_div(place) {
            p = q;
            k += 1;
        }
        k
    }

    /// Order of vanishing at the rational point `r`.
    pub fn order_at(&self, r: &Rational) -> usize {
        self.valuation(&UPoly::new(vec![-r.clone(), int(1)], &self.var))
    }

    /// Yun's algorithm.
    pub fn squarefree_factor(&self) -> Result<SquarefreeFactorization> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let scalar = self.lc();
        let f = self.monic();
        let mut factors = Vec::new();
        if f.deg() > 0 {
            let df = f.derivative();
            let a0 = f.gcd(&df);
            let mut b = f.exact_div(&a0).expect("gcd divides");
            let mut c = df.exact_div(&a0).expect("gcd divides");
            let mut d = &c - &b.derivative();
            let mut i = 1;
            while b.deg() > 0 {
                let a = b.gcd(&d);
                b = b.exact_div(&a).expect("gcd divides");
                c = d.exact_div(&a).expect("gcd divides");
                d = &c - &b.derivative();
                if a.deg() > 0 {
                    factors.push((a, i));
                }
                i += 1;
            }
        }
        factors.sort_by(|x, y| x.0.deg().cmp(&y.0.deg()).then(y.1.cmp(&x.1)));
        Ok(SquarefreeFactorization { scalar, factors })
    }

    /// Product of the distinct monic irreducible-or-not squarefree factors.
    pub fn squarefree_part(&self) -> Result<UPoly> {
        let sf = self.squarefree_factor()?;
        Ok(sf.factors.iter().fold(UPoly::one(&self.var), |acc, (f, _)| &acc * f))
    }

    /// Sylvester resultant: `lc(p)^deg q * prod q(alpha)` over the roots of `p`.
    pub fn resultant(p: &UPoly, q: &UPoly) -> Result<Rational> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !p.is_constant() && !q.is_constant() && p.var != q.var {
            return Err(Error::VariableMismatch(p.var.clone(), q.var.clone()));
        }
        let mut a = p.clone();
        let mut b = q.clone();
        let mut acc = int(1);
        loop {
            let (m, n) = (a.deg(), b.deg());
            if n == 0 {
                return Ok(acc * b.lc().pow(m as isize));
            }
            if m == 0 {
                return Ok(acc * a.lc().pow(n as isize));
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(Rational::ZERO);
            }
            let k = r.deg();
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            acc *= b.lc().pow((m - k) as isize);
            a = b;
            b = r;
        }
    }

    /// `(-1)^(n(n-1)/2) Res(p, p') / lc(p)`.
    pub fn discriminant(&self) -> Result<Rational> {
        let n = self.deg();
        if self.is_zero() || n < 2 {
            return Err(Error::DegreeTooSmall { needed: 2, got: n });
        }
        let r = UPoly::resultant(self, &self.derivative())? / self.lc();
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
    }

    /// `(content, primitive integer coefficients)` with positive leading coefficient.
    pub fn primitive_integer(&self) -> (Rational, Vec<IBig>) {
        if self.is_zero() {
            return (Rational::ZERO, vec![]);
        }
        let mut l = dashu_int::UBig::ONE;
        for c in &self.coeffs {
            let d = c.denominator();
            let g = (&l).gcd(d);
            l = &l * d / g;
        }
        let li = IBig::from(l.clone());
        let ints: Vec<IBig> =
            self.coeffs.iter().map(|c| (c * Rational::from(li.clone())).numerator().clone()).collect();
        let mut g = dashu_int::UBig::ZERO;
        for c in &ints {
            g = (&g).gcd(c.unsigned_abs());
        }
        let mut gi = IBig::from(g);
        if *ints.last().unwrap() < IBig::ZERO {
            gi = -gi;
        }
        let prim: Vec<IBig> = ints.iter().map(|c| c / &gi).collect();
        (Rational::from(gi) / Rational::from(li), prim)
    }

    /// Distinct rational roots with multiplicity.
    ///
    /// Candidates come from high-precision complex roots of the squarefree part; each is
    /// snapped to the nearest `n / lc` and confirmed by exact evaluation.
    pub fn rational_roots(&self) -> Result<Vec<(Rational, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut out = Vec::new();
        let sf = self.squarefree_factor()?;
        for (factor, mult) in &sf.factors {
            for r in rational_roots_squarefree(factor)? {
                out.push((r, *mult));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(qfmt).collect()
    }
}

fn rational_roots_squarefree(p: &UPoly) -> Result<Vec<Rational>> {
    let mut found = Vec::new();
    let mut rest = p.clone();
    while rest.deg() >= 1 && is_zero(&rest.coeff(0)) {
        found.push(Rational::ZERO);
        rest = rest.exact_div(&UPoly::x(&rest.var)).expect("x divides");
    }
    match rest.deg() {
        0 => return Ok(found),
        1 => {
            found.push(-rest.coeff(0) / rest.coeff(1));
            return Ok(found);
        }
        _ => {}
    }
    let (_, prim) = rest.primitive_integer();
    let lc = Rational::from(prim.last().unwrap().clone());
    let height = prim.iter().map(|c| c.unsigned_abs().bit_len()).max().unwrap_or(1);
    let digits = 20 + (2.0 * height as f64 * std::f64::consts::LOG10_2) as usize + rest.deg();
    let roots = super::roots::complex_roots_squarefree(&rest, digits)?;
    for z in &roots {
        let scaled = z.re.clone() * super::numeric::float_from_rational(&lc, z.precision());
        let n = scaled.to_int().value();
        for k in [IBig::ZERO, IBig::ONE, -IBig::ONE] {
            let cand = Rational::from(&n + k) / &lc;
            if !found.contains(&cand) && is_zero(&rest.eval(&cand)) {
                found.push(cand);
            }
        }
    }
    Ok(found)
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if is_zero(c) {
                continue;
            }
            let neg = *c < Rational::ZERO;
            let a = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = a == Rational::ONE;
            match i {
                0 => write!(f, "{}", qfmt(&a))?,
                1 if unit => write!(f, "{}", self.var)?,
                1 => write!(f, "{}*{}", qfmt(&a), self.var)?,
                _ if unit => write!(f, "{}^{}", self.var, i)?,
                _ => write!(f, "{}*{}^{}", qfmt(&a), self.var, i)?,
            }
        }
        Ok(())
    }
}

fn pick_var<'a>(a: &'a UPoly, b: &'a UPoly) -> &'a str {
    if a.is_constant() {
        return &b.var;
    }
    if !b.is_constant() {
        assert_eq!(a.var, b.var, "variable mismatch in polynomial arithmetic");
    }
    &a.var
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        UPoly::new(c, pick_var(self, o))
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        UPoly::new(c, pick_var(self, o))
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        let var = pick_var(self, o).to_string();
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&var);
        }
        let mut c = vec![Rational::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c, &var)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect(), &self.var)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<UPoly> for UPoly {
            type Output = UPoly;
            fn $m(self, o: UPoly) -> UPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a UPoly> for UPoly {
            type Output = UPoly;
            fn $m(self, o: &UPoly) -> UPoly {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<UPoly> for &'a UPoly {
            type Output = UPoly;
            fn $m(self, o: UPoly) -> UPoly {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct UPolyRepr {
    var: String,
    #[serde(with = "super::rational::serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for UPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UPolyRepr { var: self.var.clone(), coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = UPolyRepr::deserialize(d)?;
        Ok(UPoly::new(r.coeffs, &r.var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::QMatrix;
    use crate::algebra::rational::rat;

    fn t(c: &[i64]) -> UPoly {
        UPoly::from_ints(c, "t")
    }

    fn sylvester(p: &UPoly, q: &UPoly) -> Rational {
        let (m, n) = (p.deg(), q.deg());
        let size = m + n;
        let mut rows = Vec::new();
        for i in 0..n {
            let mut r = vec![Rational::ZERO; size];
            for (j, c) in p.coeffs().iter().rev().enumerate() {
                r[i + j] = c.clone();
            }
            rows.push(r);
        }
        for i in 0..m {
            let mut r = vec![Rational::ZERO; size];
            for (j, c) in q.coeffs().iter().rev().enumerate() {
                r[i + j] = c.clone();
            }
            rows.push(r);
        }
        QMatrix::from_rows(rows).det()
    }

    #[test]
    fn squarefree_examples() {
        let sf = t(&[1, -2, 1]).squarefree_factor().unwrap();
        assert_eq!(sf.scalar, int(1));
        assert_eq!(sf.factors, vec![(t(&[-1, 1]), 2)]);

        let sf = t(&[0, -1, 0, 1]).squarefree_factor().unwrap();
        assert_eq!(sf.factors, vec![(t(&[0, -1, 0, 1]), 1)]);

        let p = t(&[0, 0, -4, 0, 4]);
        let sf = p.squarefree_factor().unwrap();
        assert_eq!(sf.scalar, int(4));
        assert_eq!(sf.factors, vec![(t(&[0, 1]), 2), (t(&[-1, 0, 1]), 1)]);
        // gcd-chain oracle: gcd(p, p') carries exactly the repeated part
        let g = p.gcd(&p.derivative());
        assert_eq!(g, t(&[0, 1]));
        let rebuilt = sf.factors.iter().fold(UPoly::constant(sf.scalar.clone(), "t"), |a, (f, m)| &a * &f.pow(*m));
        assert_eq!(rebuilt, p);

        assert!(matches!(UPoly::zero("t").squarefree_factor(), Err(Error::ZeroInput)));
    }

    #[test]
    fn resultant_examples() {
        let x = |c: &[i64]| UPoly::from_ints(c, "x");
        assert_eq!(UPoly::resultant(&x(&[-2, 1]), &x(&[-3, 1])).unwrap(), int(-1));
        assert_eq!(UPoly::resultant(&x(&[-1, 0, 1]), &x(&[0, 1])).unwrap(), int(-1));
        let p = x(&[1, 1, 0, 1]);
        let q = x(&[1, 0, 3]);
        assert_eq!(UPoly::resultant(&p, &q).unwrap(), int(31));
        assert_eq!(sylvester(&p, &q), int(31));
        assert!(UPoly::resultant(&x(&[1, 1]), &t(&[1, 1])).is_err());
        assert!(UPoly::resultant(&UPoly::zero("x"), &x(&[1, 1])).is_err());
    }

    #[test]
    fn discriminant_examples() {
        let x = |c: &[i64]| UPoly::from_ints(c, "x");
        assert_eq!(x(&[1, 3, 1]).discriminant().unwrap(), int(5));
        assert_eq!(x(&[0, -1, 0, 1]).discriminant().unwrap(), int(4));
        // x^6 - 1 and x^6 + 1 against the Sylvester-determinant oracle
        for c0 in [-1, 1] {
            let p = x(&[c0, 0, 0, 0, 0, 0, 1]);
            let n = 6usize;
            let sign = if (n * (n - 1) / 2) % 2 == 1 { int(-1) } else { int(1) };
            let oracle = sign * sylvester(&p, &p.derivative()) / p.lc();
            assert_eq!(p.discriminant().unwrap(), oracle);
        }
        assert_eq!(x(&[-1, 0, 0, 0, 0, 0, 1]).discriminant().unwrap(), int(46656));
        assert_eq!(x(&[1, 0, 0, 0, 0, 0, 1]).discriminant().unwrap(), int(-46656));
        assert!(x(&[1, 1]).discriminant().is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = t(&[-1, 0, 1]);
        let b = t(&[1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, t(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&t(&[2, 2])), t(&[1, 1]));
        assert_eq!(t(&[0, 0, 0, 5, 5]).valuation(&t(&[0, 1])), 3);
    }

    #[test]
    fn rational_roots_found() {
        let p = UPoly::from_roots(&rat(3, 2), &[rat(1, 3), rat(1, 3), int(-7), rat(22, 5)], "t");
        let p = &p * &t(&[2, 0, 1]);
        let rr = p.rational_roots().unwrap();
        assert_eq!(rr, vec![(int(-7), 1), (rat(1, 3), 2), (rat(22, 5), 1)]);
    }

    #[test]
    fn mobius_translation() {
        let p = t(&[0, -274, 225, -85, 15, -1]);
        let shifted = p.mobius(5, &int(1), &int(1), &int(0), &int(1));
        assert_eq!(shifted, p.shift(&int(1)));
    }

    #[test]
    fn display_and_serde() {
        assert_eq!(t(&[1, 0, -3, 1]).to_string(), "t^3 - 3*t^2 + 1");
        let p = UPoly::new(vec![rat(1, 2), int(-3)], "x");
        let back: UPoly = serde_json_roundtrip(&p);
        assert_eq!(back, p);
    }

    fn serde_json_roundtrip(p: &UPoly) -> UPoly {
        let s = serde_json::to_string(p).unwrap();
        assert!(s.contains("\"1/2\""));
        serde_json::from_str(&s).unwrap()
    }
}
