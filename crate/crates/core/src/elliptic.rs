//! Elliptic surfaces `y^2 = x^3 + a2(t) x^2 + a4(t) x + a6(t)` over the projective line.

use std::fmt;

use dashu_int::UBig;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::numeric::{log10_relative_difference, BigComplex};
use crate::algebra::rational::{int, is_zero, Rational};
use crate::algebra::{vars, MPoly, UPoly};
use crate::error::{Error, Result};

/// Valuation standing in for "identically zero".
pub const INFINITE_VALUATION: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassSurface {
    pub a2: UPoly,
    pub a4: UPoly,
    pub a6: UPoly,
    /// Minimal `n` such that some admissible model has `deg a_i <= n i`.
    pub chi: u32,
}

/// `c4`, `c6` and `Delta = (c4^3 - c6^2) / 1728` of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants {
    pub c4: UPoly,
    pub c6: UPoly,
    pub delta: UPoly,
}

impl Invariants {
    fn from_c(c4: UPoly, c6: UPoly) -> Self {
        let delta = (&c4.pow(3) - &c6.pow(2)).scale(&(Rational::ONE / int(1728)));
        Invariants { c4, c6, delta }
    }
}

fn deg_or_none(p: &UPoly) -> Option<u32> {
    p.degree().map(|d| d as u32)
}

fn chi_of(c4: &UPoly, c6: &UPoly) -> u32 {
    let need = |p: &UPoly, w: u32| deg_or_none(p).map_or(0, |d| d.div_ceil(w));
    need(c4, 4).max(need(c6, 6)).max(1)
}

impl WeierstrassSurface {
    pub fn new(a2: UPoly, a4: UPoly, a6: UPoly) -> Result<Self> {
        let var = [&a2, &a4, &a6].iter().find(|p| !p.is_constant()).map_or("t".to_string(), |p| p.var().to_string());
        let (a2, a4, a6) = (a2.with_var(&var), a4.with_var(&var), a6.with_var(&var));
        let mut s = WeierstrassSurface { a2, a4, a6, chi: 1 };
        if s.discriminant().is_zero() {
            return Err(Error::NonReduced);
        }
        let m = s.minimal_invariants();
        s.chi = chi_of(&m.c4, &m.c6);
        Ok(s)
    }

    pub fn var(&self) -> &str {
        self.a2.var()
    }

    pub fn c4(&self) -> UPoly {
        &self.a2.pow(2).scale(&int(16)) - &self.a4.scale(&int(48))
    }

    pub fn c6(&self) -> UPoly {
        let a2 = &self.a2;
        &(&a2.pow(3).scale(&int(-64)) + &(a2 * &self.a4).scale(&int(288))) - &self.a6.scale(&int(864))
    }

    pub fn discriminant(&self) -> UPoly {
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let terms = [
            (a2.pow(3) * a6).scale(&int(-4)),
            &a2.pow(2) * &a4.pow(2),
            (&(a2 * a4) * a6).scale(&int(18)),
            a4.pow(3).scale(&int(-4)),
            a6.pow(2).scale(&int(-27)),
        ];
        terms.iter().fold(UPoly::zero(self.var()), |acc, t| &acc + t).scale(&int(16))
    }

    /// Compares `Delta` with `16 disc(x^3 + a2 x^2 + a4 x + a6)` at `deg Delta + 1` fibers.
    pub fn discriminant_cross_check(&self) -> bool {
        let delta = self.discriminant();
        let n = delta.deg().max(12 * self.chi as usize) + 1;
        (0..n as i64).all(|k| {
            let t = int(k - (n as i64) / 2);
            let cubic = UPoly::new(vec![self.a6.eval(&t), self.a4.eval(&t), self.a2.eval(&t), int(1)], "x");
            let oracle = int(16) * cubic.discriminant().expect("cubic is nonzero");
            oracle == delta.eval(&t)
        })
    }

    /// `c4`, `c6`, `Delta` after removing every finite place where the model is not minimal.
    pub fn minimal_invariants(&self) -> Invariants {
        let (mut c4, mut c6) = (self.c4(), self.c6());
        let common = match (c4.is_zero(), c6.is_zero()) {
            (true, _) => c6.clone(),
            (_, true) => c4.clone(),
            _ => c4.gcd(&c6),
        };
        if common.deg() > 0 {
            let g = common.squarefree_part().expect("nonzero");
            for (piece4, v4) in split_by_valuation(&g, &c4) {
                for (piece, v6) in split_by_valuation(&piece4, &c6) {
                    let k = (v4 / 4).min(v6 / 6);
                    if k > 0 {
                        if !c4.is_zero() {
                            c4 = c4.exact_div(&piece.pow(4 * k)).expect("valuation");
                        }
                        if !c6.is_zero() {
                            c6 = c6.exact_div(&piece.pow(6 * k)).expect("valuation");
                        }
                    }
                }
            }
        }
        Invariants::from_c(c4, c6)
    }

    /// Short model `y^2 = x^3 - c4/48 x - c6/864` built from the minimal invariants.
    pub fn minimal_model(&self) -> WeierstrassSurface {
        let m = self.minimal_invariants();
        if m.c4 == self.c4() && m.c6 == self.c6() {
            return self.clone();
        }
        let a4 = m.c4.scale(&(-(Rational::ONE / int(48))));
        let a6 = m.c6.scale(&(-(Rational::ONE / int(864))));
        WeierstrassSurface::new(UPoly::zero(self.var()), a4, a6).expect("minimal model is reduced")
    }

    /// The chart at infinity: `a_k(u) = u^(k chi) a_k(1/u)`.
    pub fn at_infinity(&self, var: &str) -> WeierstrassSurface {
        let flip = |p: &UPoly, k: u32| -> UPoly {
            p.mobius((k * self.chi) as usize, &int(0), &int(1), &int(1), &int(0)).with_var(var)
        };
        let a2 = flip(&self.a2, 2);
        let a4 = flip(&self.a4, 4);
        let a6 = flip(&self.a6, 6);
        WeierstrassSurface::new(a2, a4, a6).expect("reduced")
    }

    /// Valuations `(v(c4), v(c6), v(Delta))` of the minimal invariants at a place.
    pub fn valuations_at(&self, place: &Place) -> (u32, u32, u32) {
        let m = self.minimal_invariants();
        let val = |p: &UPoly, w: u32| -> u32 {
            if p.is_zero() {
                return INFINITE_VALUATION;
            }
            match place {
                Place::Finite(q) => p.valuation(q) as u32,
                Place::Infinity => w * self.chi - p.deg() as u32,
            }
        };
        let (mut v4, mut v6, mut vd) = (val(&m.c4, 4), val(&m.c6, 6), val(&m.delta, 12));
        let sub = |v: u32, k: u32| if v == INFINITE_VALUATION { v } else { v - k };
        while v4 >= 4 && v6 >= 6 && vd >= 12 {
            v4 = sub(v4, 4);
            v6 = sub(v6, 6);
            vd -= 12;
        }
        (v4, v6, vd)
    }

    pub fn kodaira_type_at(&self, place: &Place) -> Result<KodairaFiber> {
        let (v4, v6, vd) = self.valuations_at(place);
        let kind = fiber_type(v4, v6, vd)?;
        let degree = match place {
            Place::Finite(q) => q.deg(),
            Place::Infinity => 1,
        };
        Ok(KodairaFiber::new(place.clone(), degree, kind))
    }

    /// Every singular fiber, finite places first, then infinity.
    ///
    /// Places sharing a valuation pattern are split over rational roots; the remaining
    /// factor is reported as a single record covering `degree` fibers.
    pub fn classify_all_fibers(&self) -> Result<Vec<KodairaFiber>> {
        let m = self.minimal_invariants();
        let sf = m.delta.squarefree_factor()?;
        let mut groups = Vec::new();
        for (g, vd) in &sf.factors {
            for (p4, v4) in split_by_valuation(g, &m.c4) {
                for (p6, v6) in split_by_valuation(&p4, &m.c6) {
                    groups.push((p6, v4, v6, *vd));
                }
            }
        }
        let per_group: Vec<Result<Vec<KodairaFiber>>> = groups
            .par_iter()
            .map(|(g, v4, v6, vd)| {
                let kind = fiber_type(*v4, *v6, *vd)?;
                let mut out = Vec::new();
                let mut rest = g.clone();
                for (r, _) in g.rational_roots()? {
                    let lin = UPoly::new(vec![-r, int(1)], g.var());
                    rest = rest.exact_div(&lin).expect("root divides");
                    out.push(KodairaFiber::new(Place::Finite(lin), 1, kind));
                }
                if rest.deg() > 0 {
                    let d = rest.deg();
                    out.push(KodairaFiber::new(Place::Finite(rest), d, kind));
                }
                Ok(out)
            })
            .collect();
        let mut fibers = Vec::new();
        for r in per_group {
            fibers.extend(r?);
        }
        fibers.sort_by_key(|a| a.place.sort_key());
        let inf = self.kodaira_type_at(&Place::Infinity)?;
        if inf.kind != FiberType::I(0) {
            fibers.push(inf);
        }
        Ok(fibers)
    }

    /// Quotient by the 2-torsion point `(0, 0)`.
    pub fn two_isogeny(&self) -> Result<WeierstrassSurface> {
        if !self.a6.is_zero() {
            return Err(Error::NoTwoTorsion);
        }
        let a2 = self.a2.scale(&int(-2));
        let a4 = &self.a2.pow(2) - &self.a4.scale(&int(4));
        WeierstrassSurface::new(a2, a4, UPoly::zero(self.var()))
    }

    /// The cubic `x^3 + a2 x^2 + a4 x + a6` over the fiber at `t`.
    pub fn fiber_coefficients(&self, t: &Rational) -> [Rational; 3] {
        [self.a2.eval(t), self.a4.eval(t), self.a6.eval(t)]
    }

    /// Implicit equation `y^2 - x^3 - a2 x^2 - a4 x - a6` in variables `[x, y, base]`.
    pub fn equation(&self, x: &str, y: &str) -> MPoly {
        let v = vars(&[x, y, self.var()]);
        let xv = MPoly::gen(0, &v);
        let yv = MPoly::gen(1, &v);
        let a = |p: &UPoly| MPoly::from_upoly(p, 2, &v);
        let rhs = &(&(&xv.pow(3) + &(&a(&self.a2) * &xv.pow(2))) + &(&a(&self.a4) * &xv)) + &a(&self.a6);
        &yv.pow(2) - &rhs
    }
}

impl Serialize for WeierstrassSurface {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WeierstrassSurface", 5)?;
        st.serialize_field("var", self.var())?;
        st.serialize_field("a2", &self.a2.to_strings())?;
        st.serialize_field("a4", &self.a4.to_strings())?;
        st.serialize_field("a6", &self.a6.to_strings())?;
        st.serialize_field("chi", &self.chi)?;
        st.end()
    }
}

/// Splits a squarefree `g` by the exact valuation of `h` at its factors.
pub fn split_by_valuation(g: &UPoly, h: &UPoly) -> Vec<(UPoly, u32)> {
    if g.deg() == 0 {
        return Vec::new();
    }
    if h.is_zero() {
        return vec![(g.clone(), INFINITE_VALUATION)];
    }
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut h = h.clone();
    let mut k = 0;
    loop {
        let common = rest.gcd(&h);
        let exact = rest.exact_div(&common).expect("gcd divides");
        if exact.deg() > 0 {
            out.push((exact, k));
        }
        if common.deg() == 0 {
            break;
        }
        h = h.exact_div(&common).expect("gcd divides");
        rest = common;
        k += 1;
    }
    out
}

/// Characteristic-zero Kodaira type from minimal valuations.
pub fn fiber_type(v4: u32, v6: u32, vd: u32) -> Result<FiberType> {
    let kind = match vd {
        0 => FiberType::I(0),
        _ if v4 == 0 => FiberType::I(vd),
        2 => FiberType::II,
        3 => FiberType::III,
        4 => FiberType::IV,
        6 => FiberType::IStar(0),
        _ if v4 == 2 && v6 == 3 => FiberType::IStar(vd - 6),
        8 => FiberType::IVStar,
        9 => FiberType::IIIStar,
        10 => FiberType::IIStar,
        _ => {
            return Err(Error::ShapeMismatch(format!("no fiber type with valuations ({v4}, {v6}, {vd})")));
        }
    };
    Ok(kind)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberType {
    /// `I0` is the smooth fiber.
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl FiberType {
    pub fn euler(&self) -> u32 {
        match *self {
            FiberType::I(n) => n,
            FiberType::IStar(n) => n + 6,
            FiberType::II => 2,
            FiberType::III => 3,
            FiberType::IV => 4,
            FiberType::IVStar => 8,
            FiberType::IIIStar => 9,
            FiberType::IIStar => 10,
        }
    }

    pub fn components(&self) -> u32 {
        match *self {
            FiberType::I(0) => 1,
            FiberType::I(n) => n,
            FiberType::IStar(n) => n + 5,
            FiberType::II => 1,
            FiberType::III => 2,
            FiberType::IV => 3,
            FiberType::IVStar => 7,
            FiberType::IIIStar => 8,
            FiberType::IIStar => 9,
        }
    }

    pub fn simple_components(&self) -> u32 {
        match *self {
            FiberType::I(0) => 1,
            FiberType::I(n) => n,
            FiberType::IStar(_) => 4,
            FiberType::II | FiberType::IIStar => 1,
            FiberType::III | FiberType::IIIStar => 2,
            FiberType::IV | FiberType::IVStar => 3,
        }
    }

    /// Root lattice spanned by the non-identity components.
    pub fn root_lattice(&self) -> Option<String> {
        match *self {
            FiberType::I(n) if n >= 2 => Some(format!("A{}", n - 1)),
            FiberType::IStar(n) => Some(format!("D{}", n + 4)),
            FiberType::III => Some("A1".into()),
            FiberType::IV => Some("A2".into()),
            FiberType::IVStar => Some("E6".into()),
            FiberType::IIIStar => Some("E7".into()),
            FiberType::IIStar => Some("E8".into()),
            _ => None,
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::IStar(n) => write!(f, "I{n}*"),
            FiberType::II => write!(f, "II"),
            FiberType::III => write!(f, "III"),
            FiberType::IV => write!(f, "IV"),
            FiberType::IVStar => write!(f, "IV*"),
            FiberType::IIIStar => write!(f, "III*"),
            FiberType::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for FiberType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    /// Monic polynomial in the base parameter; one record may cover several conjugate points.
    Finite(UPoly),
    Infinity,
}

impl Place {
    pub fn root(r: &Rational, var: &str) -> Place {
        Place::Finite(UPoly::new(vec![-r.clone(), int(1)], var))
    }

    fn sort_key(&self) -> (usize, Option<Rational>) {
        match self {
            Place::Finite(p) if p.deg() == 1 => (1, Some(-p.coeff(0))),
            Place::Finite(p) => (p.deg(), None),
            Place::Infinity => (usize::MAX, None),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KodairaFiber {
    pub place: Place,
    /// Number of geometric fibers this record stands for.
    pub degree: usize,
    #[serde(rename = "type")]
    pub kind: FiberType,
    pub components: u32,
    pub simple_components: u32,
    pub euler: u32,
    pub root_lattice: Option<String>,
}

impl KodairaFiber {
    pub fn new(place: Place, degree: usize, kind: FiberType) -> Self {
        KodairaFiber {
            place,
            degree,
            kind,
            components: kind.components(),
            simple_components: kind.simple_components(),
            euler: kind.euler(),
            root_lattice: kind.root_lattice(),
        }
    }
}

pub fn euler_sum(fibers: &[KodairaFiber]) -> u32 {
    fibers.iter().map(|f| f.degree as u32 * f.euler).sum()
}

/// `(rho, prod m1)` with `rho = r + 2 + sum (m_v - 1)`; torsion is not divided out.
pub fn shioda_tate(fibers: &[KodairaFiber], mw_rank: u32) -> (u32, UBig) {
    let rho = mw_rank + 2 + fibers.iter().map(|f| f.degree as u32 * (f.components - 1)).sum::<u32>();
    let disc = fibers.iter().fold(UBig::ONE, |acc, f| acc * UBig::from(f.simple_components).pow(f.degree));
    (rho, disc)
}

/// Coefficients of `y^2 = x^3 + t^3 (a t + a') x + t^5 (b'' t^2 + b t + b')`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct E8E7Params {
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub a: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub a_prime: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub b: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub b_prime: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub b_double_prime: Rational,
}

impl E8E7Params {
    pub fn surface(&self, var: &str) -> Result<WeierstrassSurface> {
        let z = int(0);
        let a4 = UPoly::new(vec![z.clone(), z.clone(), z.clone(), self.a_prime.clone(), self.a.clone()], var);
        let a6 = UPoly::new(
            vec![
                z.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
                self.b_prime.clone(),
                self.b.clone(),
                self.b_double_prime.clone(),
            ],
            var,
        );
        WeierstrassSurface::new(UPoly::zero(var), a4, a6)
    }

    /// Reads the parameters off a surface of the expected shape.
    pub fn from_surface(s: &WeierstrassSurface) -> Result<Self> {
        let bad = |why: &str| Error::ShapeMismatch(why.to_string());
        if !s.a2.is_zero() {
            return Err(bad("a2 must vanish"));
        }
        if s.a4.degree().is_some_and(|d| d > 4) || (0..3).any(|i| !is_zero(&s.a4.coeff(i))) {
            return Err(bad("a4 must be t^3 (a t + a')"));
        }
        if s.a6.degree().is_some_and(|d| d > 7) || (0..5).any(|i| !is_zero(&s.a6.coeff(i))) {
            return Err(bad("a6 must be t^5 (b'' t^2 + b t + b')"));
        }
        let p = E8E7Params {
            a: s.a4.coeff(4),
            a_prime: s.a4.coeff(3),
            b: s.a6.coeff(6),
            b_prime: s.a6.coeff(5),
            b_double_prime: s.a6.coeff(7),
        };
        if is_zero(&p.b_double_prime) {
            return Err(bad("b'' must be nonzero"));
        }
        Ok(p)
    }
}

/// The same surface fibred over the `x`-line: `y^2 = t^3 + (x^3 + a x + b) t^2 + b'' (a' x + b') t`.
#[derive(Clone, Debug)]
pub struct Refibration {
    pub params: E8E7Params,
    pub surface: WeierstrassSurface,
}

pub fn refiber_e8e7(s: &WeierstrassSurface) -> Result<Refibration> {
    let p = E8E7Params::from_surface(s)?;
    let a2 = UPoly::new(vec![p.b.clone(), p.a.clone(), int(0), int(1)], "x");
    let a4 = UPoly::new(vec![&p.b_double_prime * &p.b_prime, &p.b_double_prime * &p.a_prime], "x");
    let surface = WeierstrassSurface::new(a2, a4, UPoly::zero("x"))?;

    // b''^6 X(x t^2 / b''^2, y t^2 / b''^3, t / b'') = t^4 Y(x, y, t)
    let v = vars(&["x", "y", "t"]);
    let x_eq = s.equation("x", "y").remap(&[0, 1, 2], &v);
    let (x, y, t) = (MPoly::gen(0, &v), MPoly::gen(1, &v), MPoly::gen(2, &v));
    let bpp = &p.b_double_prime;
    let inv = |k: usize| Rational::ONE / crate::algebra::rational::pow(bpp, k);
    let bindings = [(&x * &t.pow(2)).scale(&inv(2)), (&y * &t.pow(2)).scale(&inv(3)), t.scale(&inv(1))];
    let lhs = x_eq.substitute(&bindings)?.scale(&crate::algebra::rational::pow(bpp, 6));
    let y_eq = {
        let cubic = MPoly::from_upoly(&surface.a2, 0, &v);
        let lin = MPoly::from_upoly(&surface.a4, 0, &v);
        &y.pow(2) - &(&(&t.pow(3) + &(&cubic * &t.pow(2))) + &(&lin * &t))
    };
    let rhs = &t.pow(4) * &y_eq;
    if lhs != rhs {
        return Err(Error::IdentityMismatch {
            what: "re-fibration substitution".into(),
            difference: format!("{}", &lhs - &rhs),
        });
    }
    Ok(Refibration { params: p, surface })
}

/// `phi(x, y) = (y^2/x^2, y (b - x^2)/x^2)` on `y^2 = x^3 + a x^2 + b x`.
pub fn isogeny_phi(b: &BigComplex, p: &[BigComplex; 2]) -> [BigComplex; 2] {
    let x2 = &p[0] * &p[0];
    let xn = &(&p[1] * &p[1]) / &x2;
    let yn = &(&p[1] * &(b - &x2)) / &x2;
    [xn, yn]
}

/// `phi_hat(X, Y) = (Y^2/(4X^2), Y (a^2 - 4b - X^2)/(8X^2))` on the isogenous curve.
pub fn isogeny_phi_hat(a: &BigComplex, b: &BigComplex, p: &[BigComplex; 2]) -> [BigComplex; 2] {
    let bits = a.precision();
    let x2 = &p[0] * &p[0];
    let four = BigComplex::from_rational(&int(4), bits);
    let eight = BigComplex::from_rational(&int(8), bits);
    let xn = &(&p[1] * &p[1]) / &(&four * &x2);
    let c = &(&(a * a) - &(&four * b)) - &x2;
    let yn = &(&p[1] * &c) / &(&eight * &x2);
    [xn, yn]
}

/// Tangent-line doubling on `y^2 = x^3 + a x^2 + b x`.
pub fn double_point(a: &BigComplex, b: &BigComplex, p: &[BigComplex; 2]) -> [BigComplex; 2] {
    let bits = a.precision();
    let k = |n: i64| BigComplex::from_rational(&int(n), bits);
    let (x, y) = (&p[0], &p[1]);
    let num = &(&(&k(3) * &(x * x)) + &(&k(2) * &(a * x))) + b;
    let lam = &num / &(&k(2) * y);
    let x3 = &(&(&lam * &lam) - a) - &(&k(2) * x);
    let y3 = -&(y + &(&lam * &(&x3 - x)));
    [x3, y3]
}

/// `log10` of the relative gap between `phi_hat(phi(P))` and `2P` on the fiber at `t`,
/// for the point with abscissa `x0` (worst coordinate).
pub fn isogeny_round_trip(s: &WeierstrassSurface, t: &Rational, x0: &Rational, bits: usize) -> Result<f64> {
    if !s.a6.is_zero() {
        return Err(Error::NoTwoTorsion);
    }
    let [a, b, _] = s.fiber_coefficients(t);
    let ac = BigComplex::from_rational(&a, bits);
    let bc = BigComplex::from_rational(&b, bits);
    let rhs = x0 * x0 * x0 + &a * x0 * x0 + &b * x0;
    let p = [BigComplex::from_rational(x0, bits), BigComplex::from_rational(&rhs, bits).sqrt()];
    let img = isogeny_phi_hat(&ac, &bc, &isogeny_phi(&bc, &p));
    let dbl = double_point(&ac, &bc, &p);
    Ok(log10_relative_difference(&img[0], &dbl[0]).max(log10_relative_difference(&img[1], &dbl[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn t_poly(c: &[i64]) -> UPoly {
        UPoly::from_ints(c, "t")
    }

    #[test]
    fn discriminant_of_cusp_family() {
        let s = WeierstrassSurface::new(UPoly::zero("t"), UPoly::zero("t"), t_poly(&[0, 1])).unwrap();
        assert_eq!(s.discriminant(), t_poly(&[0, 0, -432]));
        assert!(s.discriminant_cross_check());
    }

    #[test]
    fn discriminant_with_two_torsion() {
        // a2 = -2q, a4 = p gives 64 p^2 (q^2 - p)
        let q = t_poly(&[1, 2, 0, 1]);
        let p = t_poly(&[3, -1]);
        let s = WeierstrassSurface::new(q.scale(&int(-2)), p.clone(), UPoly::zero("t")).unwrap();
        let expect = (&p.pow(2) * &(&q.pow(2) - &p)).scale(&int(64));
        assert_eq!(s.discriminant(), expect);
    }

    #[test]
    fn non_reduced_rejected() {
        // y^2 = x^2 (x + t)
        let r = WeierstrassSurface::new(t_poly(&[0, 1]), UPoly::zero("t"), UPoly::zero("t"));
        assert!(matches!(r, Err(Error::NonReduced)));
    }

    #[test]
    fn cusp_at_zero() {
        let s = WeierstrassSurface::new(UPoly::zero("t"), UPoly::zero("t"), t_poly(&[0, 1])).unwrap();
        let f = s.kodaira_type_at(&Place::root(&int(0), "t")).unwrap();
        assert_eq!(f.kind, FiberType::II);
        let smooth = s.kodaira_type_at(&Place::root(&int(1), "t")).unwrap();
        assert_eq!(smooth.kind, FiberType::I(0));
    }

    #[test]
    fn constant_curve_is_smooth_everywhere() {
        let s = WeierstrassSurface::new(UPoly::zero("t"), UPoly::zero("t"), UPoly::one("t")).unwrap();
        assert_eq!(s.chi, 1);
        assert_eq!(s.kodaira_type_at(&Place::Infinity).unwrap().kind, FiberType::I(0));
        assert!(s.classify_all_fibers().unwrap().is_empty());
    }

    #[test]
    fn non_minimal_place_is_reduced() {
        // y^2 = x^3 + t^4 x + t^6 (1 + t): v(a4) = 4, v(a6) = 6 at t = 0
        let s = WeierstrassSurface::new(UPoly::zero("t"), t_poly(&[0, 0, 0, 0, 1]), t_poly(&[0, 0, 0, 0, 0, 0, 1, 1]))
            .unwrap();
        let m = s.minimal_model();
        assert_eq!(m.a4, t_poly(&[1]));
        assert_eq!(m.a6, t_poly(&[1, 1]));
        assert_eq!(s.kodaira_type_at(&Place::root(&int(0), "t")).unwrap().kind, FiberType::I(0));
        assert_eq!(s.chi, 1);
    }

    #[test]
    fn infinity_chart_agrees() {
        let p = E8E7Params { a: int(2), a_prime: int(-1), b: int(3), b_prime: int(5), b_double_prime: int(7) };
        let s = p.surface("t").unwrap();
        let inf = s.kodaira_type_at(&Place::Infinity).unwrap();
        let chart = s.at_infinity("u");
        let at_zero = chart.kodaira_type_at(&Place::root(&int(0), "u")).unwrap();
        assert_eq!(inf.kind, at_zero.kind);
        assert_eq!(inf.kind, FiberType::IIStar);
    }

    #[test]
    fn e8e7_fibration() {
        let p = E8E7Params { a: rat(1, 2), a_prime: int(-1), b: int(3), b_prime: int(5), b_double_prime: int(7) };
        let s = p.surface("t").unwrap();
        assert_eq!(s.chi, 2);
        let fs = s.classify_all_fibers().unwrap();
        assert_eq!(euler_sum(&fs), 24);
        let at0 = fs.iter().find(|f| f.place == Place::root(&int(0), "t")).unwrap();
        assert_eq!(at0.kind, FiberType::IIIStar);
        assert_eq!(fs.last().unwrap().kind, FiberType::IIStar);
        let i1: usize = fs.iter().filter(|f| f.kind == FiberType::I(1)).map(|f| f.degree).sum();
        assert_eq!(i1, 5);
        assert_eq!(shioda_tate(&fs, 0), (17, UBig::from(2u8)));
    }

    #[test]
    fn refibration_and_isogeny() {
        let p = E8E7Params { a: rat(-3, 4), a_prime: int(-1), b: rat(2, 3), b_prime: int(5), b_double_prime: int(7) };
        let r = refiber_e8e7(&p.surface("t").unwrap()).unwrap();
        let fs = r.surface.classify_all_fibers().unwrap();
        let xi2 = fs.iter().find(|f| f.place == Place::root(&int(5), "x")).unwrap();
        assert_eq!(xi2.kind, FiberType::I(2));
        assert_eq!(fs.last().unwrap().kind, FiberType::IStar(10));
        let y = r.surface.two_isogeny().unwrap();
        let gs = y.classify_all_fibers().unwrap();
        assert_eq!(gs.last().unwrap().kind, FiberType::IStar(5));
        let i2: usize = gs.iter().filter(|f| f.kind == FiberType::I(2)).map(|f| f.degree).sum();
        assert_eq!(i2, 6);
        let i1 = gs.iter().find(|f| f.kind == FiberType::I(1)).unwrap();
        assert_eq!(i1.place, Place::root(&int(5), "x"));
        assert_eq!(shioda_tate(&gs, 0), (17, UBig::from(4u32 * 64)));
        // finite singular places agree
        let sx = r.surface.discriminant().squarefree_part().unwrap();
        let sy = y.discriminant().squarefree_part().unwrap();
        assert_eq!(sx.monic(), sy.monic());
    }

    #[test]
    fn refibration_rejects_wrong_shape() {
        let s = WeierstrassSurface::new(UPoly::zero("t"), t_poly(&[1, 0, 0, 1]), t_poly(&[0, 0, 0, 0, 0, 1, 0, 1]))
            .unwrap();
        assert!(matches!(refiber_e8e7(&s), Err(Error::ShapeMismatch(_))));
        let p = E8E7Params { a: int(1), a_prime: int(1), b: int(1), b_prime: int(1), b_double_prime: int(0) };
        let s = p.surface("t").unwrap();
        assert!(matches!(refiber_e8e7(&s), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn isogeny_of_x3_plus_x() {
        let s = WeierstrassSurface::new(UPoly::zero("t"), UPoly::one("t"), UPoly::zero("t")).unwrap();
        let e = s.two_isogeny().unwrap();
        assert!(e.a2.is_zero());
        assert_eq!(e.a4, UPoly::constant(int(-4), "t"));
        assert!(matches!(
            WeierstrassSurface::new(UPoly::zero("t"), UPoly::one("t"), UPoly::one("t")).unwrap().two_isogeny(),
            Err(Error::NoTwoTorsion)
        ));
    }

    #[test]
    fn double_isogeny_scales() {
        let a2 = t_poly(&[1, -2, 3]);
        let a4 = t_poly(&[0, 5, 0, 1]);
        let s = WeierstrassSurface::new(a2.clone(), a4.clone(), UPoly::zero("t")).unwrap();
        let ss = s.two_isogeny().unwrap().two_isogeny().unwrap();
        assert_eq!(ss.a2, a2.scale(&int(4)));
        assert_eq!(ss.a4, a4.scale(&int(16)));
    }

    #[test]
    fn dual_isogeny_composes_to_doubling() {
        let s = WeierstrassSurface::new(t_poly(&[1, -2, 3]), t_poly(&[2, 5, 0, 1]), UPoly::zero("t")).unwrap();
        let bits = crate::algebra::numeric::digits_to_bits(60);
        let err = isogeny_round_trip(&s, &rat(3, 5), &rat(-7, 3), bits).unwrap();
        assert!(err < -50.0, "{err}");
    }

    #[test]
    fn split_valuations() {
        let g = t_poly(&[0, 1]).pow(1);
        let g = &g * &t_poly(&[-1, 1]);
        let h = &t_poly(&[0, 1]).pow(3) * &t_poly(&[2, 1]);
        let parts = split_by_valuation(&g, &h);
        assert_eq!(parts, vec![(t_poly(&[-1, 1]), 0), (t_poly(&[0, 1]), 3)]);
    }

    #[test]
    fn fiber_table() {
        let all = [
            (FiberType::I(3), 3, 3, 3),
            (FiberType::IStar(2), 8, 7, 4),
            (FiberType::II, 2, 1, 1),
            (FiberType::III, 3, 2, 2),
            (FiberType::IV, 4, 3, 3),
            (FiberType::IVStar, 8, 7, 3),
            (FiberType::IIIStar, 9, 8, 2),
            (FiberType::IIStar, 10, 9, 1),
        ];
        for (k, e, m, m1) in all {
            assert_eq!((k.euler(), k.components(), k.simple_components()), (e, m, m1), "{k}");
        }
    }
}
