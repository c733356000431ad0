//! Sparse multivariate polynomials over the rationals, keyed by exponent vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use dashu_base::{Gcd, UnsignedAbs};
use dashu_int::{IBig, UBig};

use super::numeric::BigComplex;
use super::rational::{fmt as qfmt, int, is_zero, Rational};
use super::upoly::UPoly;
use crate::error::{Error, Result};

pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// Terms are ordered lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(vars: &Vars) -> Self {
        MPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, vars: &Vars) -> Self {
        let mut p = MPoly::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Vars) -> Self {
        MPoly::constant(int(1), vars)
    }

    /// The `i`-th variable.
    pub fn gen(i: usize, vars: &Vars) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        MPoly::monomial(int(1), e, vars)
    }

    /// The variable called `name`; panics if absent.
    pub fn var(name: &str, vars: &Vars) -> Self {
        let i = vars.iter().position(|v| v == name).unwrap_or_else(|| panic!("unknown variable {name}"));
        MPoly::gen(i, vars)
    }

    pub fn monomial(c: Rational, exps: Vec<u32>, vars: &Vars) -> Self {
        assert_eq!(exps.len(), vars.len(), "arity mismatch");
        let mut p = MPoly::zero(vars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "arity mismatch");
            p.add_term(e, c);
        }
        p
    }

    /// Embed a univariate polynomial as a polynomial in variable `i`.
    pub fn from_upoly(p: &UPoly, i: usize, vars: &Vars) -> Self {
        MPoly::from_terms(
            vars,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; vars.len()];
                e[i] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Univariate view when only variable `i` occurs.
    pub fn to_upoly(&self, i: usize) -> Option<UPoly> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k != 0) {
                return None;
            }
            let k = e[i] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::ZERO);
            }
            coeffs[k] = c.clone();
        }
        Some(UPoly::new(coeffs, &self.vars[i]))
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::ZERO),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if is_zero(s) {
            return MPoly::zero(&self.vars);
        }
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            p.add_term(f, c * int(e[i] as i64));
        }
        p
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.arity(), "arity mismatch");
        let maxdeg: Vec<u32> = (0..self.arity()).map(|i| self.degree_in(i)).collect();
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = vec![int(1)];
                for k in 1..=d as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Rational::ZERO;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &powers[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[BigComplex]) -> BigComplex {
        assert_eq!(point.len(), self.arity(), "arity mismatch");
        let bits = point.iter().map(|z| z.precision()).max().unwrap_or(64);
        let powers: Vec<Vec<BigComplex>> = point
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let d = self.degree_in(i) as usize;
                let mut v = vec![BigComplex::one(bits)];
                for k in 1..=d {
                    let next = &v[k - 1] * z;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = BigComplex::zero(bits);
        for (e, c) in &self.terms {
            let mut t = BigComplex::from_rational(c, bits);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Partially evaluate variable `i` at a rational value (the variable stays, with degree 0).
    pub fn eval_var(&self, i: usize, value: &Rational) -> Self {
        let mut p = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] = 0;
            p.add_term(f, c * value.pow(e[i] as isize));
        }
        p
    }

    /// Substitute a polynomial for every variable; all bindings share one target ring.
    pub fn substitute(&self, bindings: &[MPoly]) -> Result<MPoly> {
        if bindings.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: bindings.len() });
        }
        let target = match bindings.first() {
            Some(b) => b.vars.clone(),
            None => self.vars.clone(),
        };
        if bindings.iter().any(|b| b.vars != target) {
            return Err(Error::ArityMismatch {
                expected: target.len(),
                got: bindings.iter().map(|b| b.arity()).max().unwrap_or(0),
            });
        }
        let powers = power_table(self, bindings);
        let mut acc = MPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(c.clone(), &target);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitute by variable name into the ring `target`; unbound variables pass through
    /// to the variable of the same name in `target`.
    pub fn substitute_named(&self, bindings: &[(&str, MPoly)], target: &Vars) -> Result<MPoly> {
        let mut full = Vec::with_capacity(self.arity());
        for name in self.vars.iter() {
            match bindings.iter().find(|(n, _)| n == name) {
                Some((_, b)) => {
                    if b.vars != *target {
                        return Err(Error::ArityMismatch { expected: target.len(), got: b.arity() });
                    }
                    full.push(b.clone())
                }
                None => match target.iter().position(|v| v == name) {
                    Some(j) => full.push(MPoly::gen(j, target)),
                    None => return Err(Error::VariableMismatch(name.clone(), "unbound".into())),
                },
            }
        }
        self.substitute(&full)
    }

    /// Substitute rational functions for every variable. The result's denominator is
    /// `prod den_i^(deg_i self)`, with common rational content removed.
    pub fn substitute_rational(&self, bindings: &[RationalFunction]) -> Result<RationalFunction> {
        if bindings.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: bindings.len() });
        }
        let nums: Vec<MPoly> = bindings.iter().map(|b| b.num.clone()).collect();
        let dens: Vec<MPoly> = bindings.iter().map(|b| b.den.clone()).collect();
        let target = nums.first().map_or(self.vars.clone(), |n| n.vars.clone());
        let maxdeg: Vec<u32> = (0..self.arity()).map(|i| self.degree_in(i)).collect();
        let np = power_table(self, &nums);
        let dp = power_table(self, &dens);
        let mut num = MPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(c.clone(), &target);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &np[i][k as usize];
                }
                let rest = maxdeg[i] - k;
                if rest > 0 {
                    t = &t * &dp[i][rest as usize];
                }
            }
            num = &num + &t;
        }
        let mut den = MPoly::one(&target);
        for (i, &d) in maxdeg.iter().enumerate() {
            if d > 0 {
                den = &den * &dp[i][d as usize];
            }
        }
        Ok(RationalFunction::new(num, den))
    }

    /// Coefficients of powers of variable `i` (each coefficient free of that variable).
    pub fn coefficients_in(&self, i: usize) -> Vec<MPoly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![MPoly::zero(&self.vars); d + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[i] as usize;
            f[i] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    /// Rewrite every `v^2` as `replacement`, for the variable `v` at index `i`.
    pub fn reduce_square(&self, i: usize, replacement: &MPoly) -> MPoly {
        let coeffs = self.coefficients_in(i);
        let v = MPoly::gen(i, &self.vars);
        let mut even = MPoly::zero(&self.vars);
        let mut odd = MPoly::zero(&self.vars);
        let mut rpow = MPoly::one(&self.vars);
        for (k, c) in coeffs.iter().enumerate() {
            if k >= 2 && k % 2 == 0 {
                rpow = &rpow * replacement;
            }
            if c.is_zero() {
                continue;
            }
            let term = c * &rpow;
            if k % 2 == 0 {
                even = &even + &term;
            } else {
                odd = &odd + &term;
            }
        }
        &even + &(&odd * &v)
    }

    /// Rename or reorder variables: variable `j` of self becomes variable `map[j]` of `target`.
    pub fn remap(&self, map: &[usize], target: &Vars) -> MPoly {
        MPoly::from_terms(
            target,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; target.len()];
                for (j, &k) in e.iter().enumerate() {
                    f[map[j]] += k;
                }
                (f, c.clone())
            }),
        )
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn content(&self) -> Rational {
        let mut g = UBig::ZERO;
        let mut l = UBig::ONE;
        for c in self.terms.values() {
            g = (&g).gcd(c.numerator().unsigned_abs());
            let d = c.denominator();
            let gg = (&l).gcd(d);
            l = &l * d / gg;
        }
        if g == UBig::ZERO {
            return int(1);
        }
        Rational::from(IBig::from(g)) / Rational::from(IBig::from(l))
    }

    /// `(lc, q)` with `self = lc * q^2`, `q` having leading coefficient 1, if such `q` exists.
    pub fn square_root_up_to_scalar(&self) -> Option<(Rational, MPoly)> {
        let (lead_e, lead_c) = self.leading_term()?;
        if lead_e.iter().any(|k| k % 2 == 1) {
            return None;
        }
        let lc = lead_c.clone();
        let target = self.scale(&(Rational::ONE / &lc));
        let half_deg = self.total_degree() / 2;
        let q0e: Vec<u32> = lead_e.iter().map(|k| k / 2).collect();
        let mut q = MPoly::monomial(int(1), q0e.clone(), &self.vars);
        let mut r = &target - &(&q * &q);
        let mut last = q0e.clone();
        while let Some((re, rc)) = r.leading_term() {
            if re.iter().zip(&q0e).any(|(a, b)| a < b) {
                return None;
            }
            let te: Vec<u32> = re.iter().zip(&q0e).map(|(a, b)| a - b).collect();
            if te.iter().sum::<u32>() > half_deg || te >= last {
                return None;
            }
            let t = MPoly::monomial(rc / int(2), te.clone(), &self.vars);
            r = &(&r - &(&(&q * &t) * &int_poly(2, &self.vars))) - &(&t * &t);
            q = &q + &t;
            last = te;
        }
        Some((lc, q))
    }
}

fn int_poly(c: i64, vars: &Vars) -> MPoly {
    MPoly::constant(int(c), vars)
}

fn power_table(p: &MPoly, bases: &[MPoly]) -> Vec<Vec<MPoly>> {
    bases
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let d = p.degree_in(i) as usize;
            let mut v = vec![MPoly::one(&b.vars)];
            for k in 1..=d {
                let next = &v[k - 1] * b;
                v.push(next);
            }
            v
        })
        .collect()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
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
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], k) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", qfmt(&a))?;
            } else if a == Rational::ONE {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", qfmt(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

fn check_ring(a: &MPoly, b: &MPoly) {
    assert!(Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars, "variable mismatch in polynomial arithmetic");
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        check_ring(self, o);
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut p = big.clone();
        for (e, c) in &small.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        check_ring(self, o);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &MPoly) -> MPoly {
        check_ring(self, o);
        let mut p = MPoly::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&int(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: &MPoly) -> MPoly {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<MPoly> for &'a MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Numerator/denominator pair; no polynomial gcd is taken, only rational content is cleared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: MPoly,
    pub den: MPoly,
}

impl RationalFunction {
    /// Scales so the denominator has coprime integer coefficients and a positive leading term.
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let cd = den.content();
        let lead_neg = den.leading_term().is_some_and(|(_, c)| *c < Rational::ZERO);
        let s = if lead_neg { -(Rational::ONE / cd) } else { Rational::ONE / cd };
        RationalFunction { num: num.scale(&s), den: den.scale(&s) }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let vars = p.vars.clone();
        RationalFunction { num: p, den: MPoly::one(&vars) }
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inverse(&self) -> Self {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalFunction::new(self.num.pow(n), self.den.pow(n))
    }

    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        (!is_zero(&d)).then(|| self.num.eval(point) / d)
    }

    pub fn eval_complex(&self, point: &[BigComplex]) -> BigComplex {
        &self.num.eval_complex(point) / &self.den.eval_complex(point)
    }

    /// Equality as functions: `a/b == c/d` iff `a d == b c`.
    pub fn equals(&self, o: &RationalFunction) -> bool {
        (&self.num * &o.den) == (&self.den * &o.num)
    }

    pub fn substitute(&self, bindings: &[RationalFunction]) -> Result<RationalFunction> {
        let n = self.num.substitute_rational(bindings)?;
        let d = self.den.substitute_rational(bindings)?;
        Ok(&n / &d)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction::new(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction::new(&self.num - &o.num, self.den.clone());
        }
        RationalFunction::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> std::ops::Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
