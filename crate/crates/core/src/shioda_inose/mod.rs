//! The K3 surfaces attached to a genus-2 curve through its Igusa-Clebsch invariants.

mod kummer_side;

use dashu_int::UBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::numeric::BigComplex;
use crate::algebra::rational::{fmt as qfmt, int, is_zero, rat, Rational};
use crate::algebra::{vars, MPoly, RationalFunction, UPoly, Vars};
use crate::elliptic::{refiber_e8e7, shioda_tate, E8E7Params, FiberType, Place, WeierstrassSurface};
use crate::error::{Error, Result};
use crate::invariants::{GenusTwoCurve, IgusaClebsch};
use crate::report::CheckItem;

pub use kummer_side::{kummer_side_verification, KummerSideOptions, KummerSideReport, PlaneCurve};

/// `X` with `II*` and `III*` fibers and its 2-isogenous partner `Y` with an `I5*` fiber.
#[derive(Clone, Debug, Serialize)]
pub struct SurfacePair {
    pub source: IgusaClebsch,
    pub params: E8E7Params,
    pub x: WeierstrassSurface,
    pub y: WeierstrassSurface,
}

/// Trivial-lattice data of one surface, Mordell-Weil rank taken as zero.
#[derive(Clone, Debug, Serialize)]
pub struct TrivialLattice {
    pub fibers: Vec<String>,
    pub rho: u32,
    pub reducible_rank: u32,
    pub naive_discriminant: String,
    /// Order of the torsion section group used to correct the discriminant.
    pub torsion: u32,
    pub discriminant: String,
}

fn trivial_lattice(s: &WeierstrassSurface, torsion: u32) -> Result<TrivialLattice> {
    let fibers = s.classify_all_fibers()?;
    let (rho, naive) = shioda_tate(&fibers, 0);
    let t = UBig::from(torsion);
    let corrected = &naive / (&t * &t);
    Ok(TrivialLattice {
        fibers: fibers
            .iter()
            .filter(|f| f.kind != FiberType::I(0))
            .map(|f| format!("{} at {}", f.kind, f.place))
            .collect(),
        rho,
        reducible_rank: rho - 2,
        naive_discriminant: naive.to_string(),
        torsion,
        discriminant: corrected.to_string(),
    })
}

/// Shioda-Tate data for `X` (no torsion) and `Y` (divided by its 2-torsion section).
pub fn trivial_lattices(pair: &SurfacePair) -> Result<(TrivialLattice, TrivialLattice)> {
    Ok((trivial_lattice(&pair.x, 1)?, trivial_lattice(&pair.y, 2)?))
}

/// `x^3 - I4/12 x + (I2 I4 - 3 I6)/108` in the given variable.
pub fn cubic_a(ic: &IgusaClebsch, var: &str) -> UPoly {
    UPoly::new(vec![(&ic.i2 * &ic.i4 - int(3) * &ic.i6) / int(108), -&ic.i4 / int(12), int(0), int(1)], var)
}

pub fn params_from_ic(ic: &IgusaClebsch) -> E8E7Params {
    E8E7Params {
        a: -&ic.i4 / int(12),
        a_prime: int(-1),
        b: (&ic.i2 * &ic.i4 - int(3) * &ic.i6) / int(108),
        b_prime: &ic.i2 / int(24),
        b_double_prime: &ic.i10 / int(4),
    }
}

/// `Y: y^2 = x^3 - 2 A(t) x^2 + (A(t)^2 + I10 (t - I2/24)) x`.
pub fn y_surface(ic: &IgusaClebsch, var: &str) -> Result<WeierstrassSurface> {
    let a = cubic_a(ic, var);
    let lin = UPoly::new(vec![-&ic.i10 * &ic.i2 / int(24), ic.i10.clone()], var);
    WeierstrassSurface::new(a.scale(&int(-2)), &a.pow(2) + &lin, UPoly::zero(var))
}

pub fn surfaces_from_ic(ic: &IgusaClebsch) -> Result<SurfacePair> {
    if is_zero(&ic.i10) {
        return Err(Error::SingularCurve);
    }
    let params = params_from_ic(ic);
    let x = params.surface("t")?;
    let y = y_surface(ic, "t")?;
    Ok(SurfacePair { source: ic.clone(), params, x, y })
}

/// Result of re-fibering `X` over the `x`-line and dividing by the 2-torsion section.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientIdentity {
    pub refibered: WeierstrassSurface,
    pub quotient: WeierstrassSurface,
}

/// Checks that `X`, fibred over the `x`-line and divided by its 2-torsion section, is `Y`
/// with the base renamed.
pub fn verify_quotient_identity(pair: &SurfacePair) -> Result<QuotientIdentity> {
    let r = refiber_e8e7(&pair.x)?;
    let q = r.surface.two_isogeny()?;
    let target = y_surface(&pair.source, "x")?;
    let d2 = &q.a2 - &target.a2;
    let d4 = &q.a4 - &target.a4;
    if !d2.is_zero() || !d4.is_zero() || !q.a6.is_zero() {
        return Err(Error::IdentityMismatch {
            what: "quotient of X against Y".into(),
            difference: format!("a2: {d2}; a4: {d4}"),
        });
    }
    Ok(QuotientIdentity { refibered: r.surface, quotient: q })
}

fn symbolic_vars() -> Vars {
    vars(&["x", "y", "t", "I2", "I4", "I6", "I10"])
}

/// `X` and `Y` with indeterminate invariants, as polynomials in `x, y, t, I2, I4, I6, I10`.
struct Symbolic {
    v: Vars,
    x: MPoly,
    y: MPoly,
    t: MPoly,
    i2: MPoly,
    i4: MPoly,
    i6: MPoly,
    i10: MPoly,
}

impl Symbolic {
    fn new() -> Self {
        let v = symbolic_vars();
        let g = |i| MPoly::gen(i, &v);
        Symbolic { x: g(0), y: g(1), t: g(2), i2: g(3), i4: g(4), i6: g(5), i10: g(6), v }
    }

    fn c(&self, q: Rational) -> MPoly {
        MPoly::constant(q, &self.v)
    }

    fn params(&self) -> [MPoly; 5] {
        let a = self.i4.scale(&rat(-1, 12));
        let ap = self.c(int(-1));
        let b = (&(&self.i2 * &self.i4) - &self.i6.scale(&int(3))).scale(&rat(1, 108));
        let bp = self.i2.scale(&rat(1, 24));
        let bpp = self.i10.scale(&rat(1, 4));
        [a, ap, b, bp, bpp]
    }

    /// `y^2 - x^3 - t^3 (a t + a') x - t^5 (b'' t^2 + b t + b')`.
    fn x_equation(&self) -> MPoly {
        let [a, ap, b, bp, bpp] = self.params();
        let t = &self.t;
        let lin = &(&a * t) + &ap;
        let quad = &(&(&bpp * &t.pow(2)) + &(&b * t)) + &bp;
        let rhs = &(&self.x.pow(3) + &(&(&t.pow(3) * &lin) * &self.x)) + &(&t.pow(5) * &quad);
        &self.y.pow(2) - &rhs
    }

    fn x_rhs(&self) -> MPoly {
        &self.y.pow(2) - &self.x_equation()
    }

    /// `A(s)` for `s` one of the generators.
    fn cubic(&self, s: &MPoly) -> MPoly {
        let [a, _, b, _, _] = self.params();
        &(&s.pow(3) + &(&a * s)) + &b
    }
}

/// The quotient identity with the invariants kept as indeterminates.
pub fn symbolic_quotient_identity() -> Result<()> {
    let s = Symbolic::new();
    let [a, ap, b, bp, bpp] = s.params();
    // re-fibration: bpp^6 X(x t^2/bpp^2, y t^2/bpp^3, t/bpp) = t^4 Y'(x, y, t)
    let one = MPoly::one(&s.v);
    let rf = |num: MPoly, den: MPoly| RationalFunction::new(num, den);
    let bindings = [
        rf(&s.x * &s.t.pow(2), bpp.pow(2)),
        rf(&s.y * &s.t.pow(2), bpp.pow(3)),
        rf(s.t.clone(), bpp.clone()),
        RationalFunction::from_poly(s.i2.clone()),
        RationalFunction::from_poly(s.i4.clone()),
        RationalFunction::from_poly(s.i6.clone()),
        RationalFunction::from_poly(s.i10.clone()),
    ];
    let lhs = s.x_equation().substitute_rational(&bindings)?;
    let lhs = &lhs * &RationalFunction::from_poly(bpp.pow(6));
    let cubic = &(&s.x.pow(3) + &(&a * &s.x)) + &b;
    let lin = &bpp * &(&(&ap * &s.x) + &bp);
    let y_prime = &s.y.pow(2) - &(&(&s.t.pow(3) + &(&cubic * &s.t.pow(2))) + &(&lin * &s.t));
    let rhs = RationalFunction::new(&s.t.pow(4) * &y_prime, one.clone());
    if !lhs.equals(&rhs) {
        return Err(Error::IdentityMismatch {
            what: "symbolic re-fibration".into(),
            difference: format!("{}", &lhs - &rhs),
        });
    }
    // isogeny: (a2, a4) -> (-2 a2, a2^2 - 4 a4) against Y's displayed coefficients
    let a_of_x = s.cubic(&s.x);
    let q2 = cubic.scale(&int(-2));
    let q4 = &cubic.pow(2) - &lin.scale(&int(4));
    let y4 = &a_of_x.pow(2) + &(&s.i10 * &(&s.x - &s.i2.scale(&rat(1, 24))));
    let d2 = &q2 - &a_of_x.scale(&int(-2));
    let d4 = &q4 - &y4;
    if !d2.is_zero() || !d4.is_zero() {
        return Err(Error::IdentityMismatch {
            what: "symbolic isogeny".into(),
            difference: format!("a2: {d2}; a4: {d4}"),
        });
    }
    Ok(())
}

/// The involution `(x, y, t) -> (x', y', t')` on `X`, as rational functions.
#[derive(Clone, Debug)]
pub struct InvolutionMap {
    pub x: RationalFunction,
    pub y: RationalFunction,
    pub t: RationalFunction,
}

impl InvolutionMap {
    /// Built over the variables `x, y, t, I2, I4, I6, I10` with `i2`, `i10` given as polynomials there.
    fn build(v: &Vars, i2: &MPoly, i10: &MPoly) -> Self {
        let g = |i| MPoly::gen(i, v);
        let (x, y, t) = (g(0), g(1), g(2));
        let w = &(-&x) + &(i2 * &t.pow(2)).scale(&rat(1, 24));
        let xn = (&x * &w.pow(2)).scale(&int(16));
        let xd = &i10.pow(2) * &t.pow(8);
        let yn = (&y * &w.pow(3)).scale(&int(-64));
        let yd = &i10.pow(3) * &t.pow(12);
        let tn = w.scale(&int(4));
        let td = i10 * &t.pow(3);
        InvolutionMap {
            x: RationalFunction::new(xn, xd),
            y: RationalFunction::new(yn, yd),
            t: RationalFunction::new(tn, td),
        }
    }

    pub fn symbolic() -> Self {
        let s = Symbolic::new();
        Self::build(&s.v, &s.i2, &s.i10)
    }

    pub fn for_invariants(ic: &IgusaClebsch) -> Self {
        let v = symbolic_vars();
        Self::build(&v, &MPoly::constant(ic.i2.clone(), &v), &MPoly::constant(ic.i10.clone(), &v))
    }

    fn bindings(&self) -> Vec<RationalFunction> {
        let v = self.x.vars().clone();
        let mut out = vec![self.x.clone(), self.y.clone(), self.t.clone()];
        out.extend((3..7).map(|i| RationalFunction::from_poly(MPoly::gen(i, &v))));
        out
    }

    pub fn apply_numeric(&self, p: &[BigComplex; 3], bits: usize) -> [BigComplex; 3] {
        let mut pt = p.to_vec();
        pt.extend((0..4).map(|_| BigComplex::zero(bits)));
        [self.x.eval_complex(&pt), self.y.eval_complex(&pt), self.t.eval_complex(&pt)]
    }
}

/// Exact and sampled checks that the involution preserves `X` and squares to the identity.
#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub checks: Vec<CheckItem>,
    pub samples: usize,
    pub digits: usize,
    pub max_log10_residual: f64,
    pub max_log10_return: f64,
}

impl InvolutionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn x_equation_for(ic: &IgusaClebsch) -> (MPoly, MPoly) {
    let s = Symbolic::new();
    let fix = |p: MPoly| {
        let vals = [&ic.i2, &ic.i4, &ic.i6, &ic.i10];
        let mut out = p;
        for (k, val) in vals.iter().enumerate() {
            out = out.eval_var(3 + k, val);
        }
        out
    };
    (fix(s.x_equation()), fix(s.x_rhs()))
}

/// `(preserves, squares to identity)` for an involution and equation over the 7 symbolic variables.
fn exact_involution_checks(map: &InvolutionMap, eq: &MPoly, rhs: &MPoly) -> Result<(bool, bool)> {
    let b = map.bindings();
    let image = eq.substitute_rational(&b)?;
    let preserves = image.num.reduce_square(1, rhs).is_zero();
    let comps = [map.x.substitute(&b)?, map.y.substitute(&b)?, map.t.substitute(&b)?];
    let idents = [0, 1, 2].map(|i| RationalFunction::from_poly(MPoly::gen(i, eq.vars())));
    let squares = comps.iter().zip(&idents).all(|(c, id)| {
        let diff = c - id;
        diff.num.reduce_square(1, rhs).is_zero()
    });
    Ok((preserves, squares))
}

/// Exact checks with `I2, I4, I6, I10` kept as indeterminates.
pub fn symbolic_involution_checks() -> Result<Vec<CheckItem>> {
    let s = Symbolic::new();
    let (preserves, squares) = exact_involution_checks(&InvolutionMap::symbolic(), &s.x_equation(), &s.x_rhs())?;
    Ok(vec![
        CheckItem::new("preserves X (symbolic)", preserves, "generic invariants"),
        CheckItem::new("involution (symbolic)", squares, "generic invariants"),
    ])
}

/// Sample count and precision for the numeric part of the involution check.
#[derive(Clone, Copy, Debug)]
pub struct InvolutionOptions {
    pub samples: usize,
    pub digits: usize,
    pub seed: u64,
}

impl Default for InvolutionOptions {
    fn default() -> Self {
        InvolutionOptions { samples: 100, digits: 60, seed: 0x5eed_0001 }
    }
}

pub fn nikulin_involution_check(pair: &SurfacePair, opts: &InvolutionOptions) -> Result<InvolutionReport> {
    let ic = &pair.source;
    if is_zero(&ic.i10) {
        return Err(Error::SingularCurve);
    }
    let map = InvolutionMap::for_invariants(ic);
    let (eq, rhs) = x_equation_for(ic);
    let (preserves, squares) = exact_involution_checks(&map, &eq, &rhs)?;
    let mut checks = vec![
        CheckItem::new("preserves X (exact)", preserves, "y'^2 - RHS(x', t') vanishes modulo the equation of X"),
        CheckItem::new("involution (exact)", squares, "sigma(sigma(x, y, t)) = (x, y, t)"),
    ];

    let bits = crate::algebra::numeric::digits_to_bits(opts.digits);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pts: Vec<(Rational, Rational)> = (0..opts.samples)
        .map(|_| loop {
            let t = rat(rng.random_range(-30..=30), rng.random_range(1..=17));
            let x = rat(rng.random_range(-30..=30), rng.random_range(1..=17));
            if !is_zero(&t) && !is_zero(&x) {
                break (t, x);
            }
        })
        .collect();
    let results: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|(t, x)| {
            let mut p = vec![x.clone(), int(0), t.clone()];
            p.extend([ic.i2.clone(), ic.i4.clone(), ic.i6.clone(), ic.i10.clone()]);
            let r = rhs.eval(&p);
            let y = BigComplex::from_rational(&r, bits).sqrt();
            let pc = [BigComplex::from_rational(x, bits), y, BigComplex::from_rational(t, bits)];
            let img = map.apply_numeric(&pc, bits);
            let back = map.apply_numeric(&img, bits);
            let residual = x_residual(&eq, &img, bits);
            let ret = (0..3)
                .map(|i| crate::algebra::numeric::log10_relative_difference(&back[i], &pc[i]))
                .fold(f64::NEG_INFINITY, f64::max);
            (residual, ret)
        })
        .collect();
    let max_res = results.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let max_ret = results.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let tol = -40.0;
    checks.push(CheckItem::new(
        "preserves X (sampled)",
        max_res < tol,
        format!("{} points at {} digits, max log10 relative residual {:.1}", opts.samples, opts.digits, max_res),
    ));
    checks.push(CheckItem::new(
        "involution (sampled)",
        max_ret < tol,
        format!("max log10 relative return error {max_ret:.1}"),
    ));
    Ok(InvolutionReport {
        checks,
        samples: opts.samples,
        digits: opts.digits,
        max_log10_residual: max_res,
        max_log10_return: max_ret,
    })
}

/// `log10 |F(p)| / max |term|` for the equation of `X` at a numeric point.
fn x_residual(eq: &MPoly, p: &[BigComplex; 3], bits: usize) -> f64 {
    let mut pt = p.to_vec();
    pt.extend((0..4).map(|_| BigComplex::zero(bits)));
    let mut total = BigComplex::zero(bits);
    let mut scale = f64::NEG_INFINITY;
    for (e, c) in eq.terms() {
        let mut term = BigComplex::from_rational(c, bits);
        for (i, &k) in e.iter().enumerate().take(3) {
            if k > 0 {
                term = &term * &pt[i].powu(k as usize);
            }
        }
        scale = scale.max(term.log10_abs());
        total = &total + &term;
    }
    total.log10_abs() - scale
}

/// `g(x) = A(x)^2 + I10 (x - I2/24)`, the sextic whose roots carry the `I2` fibers of `Y`.
pub fn sextic_correspondence(curve: &GenusTwoCurve) -> Result<UPoly> {
    let ic = curve.invariants();
    sextic_from_ic(&ic)
}

pub fn sextic_from_ic(ic: &IgusaClebsch) -> Result<UPoly> {
    if is_zero(&ic.i10) {
        return Err(Error::SingularCurve);
    }
    let a = cubic_a(ic, "x");
    let lin = UPoly::new(vec![-&ic.i10 * &ic.i2 / int(24), ic.i10.clone()], "x");
    Ok(&a.pow(2) + &lin)
}

/// Checks on the correspondence sextic: no `x^5` term, `g4^2 = 4 g2`, and its roots are the
/// `I2` places of `Y`, a double root giving `I4`.
pub fn sextic_checks(pair: &SurfacePair) -> Result<Vec<CheckItem>> {
    let g = sextic_from_ic(&pair.source)?;
    let mut out = vec![
        CheckItem::new("sigma1 = 0", is_zero(&g.coeff(5)), format!("g5 = {}", qfmt(&g.coeff(5)))),
        CheckItem::new(
            "sigma2^2 = 4 sigma4",
            g.coeff(4).clone() * g.coeff(4) == int(4) * g.coeff(2),
            format!("g4 = {}, g2 = {}", qfmt(&g.coeff(4)), qfmt(&g.coeff(2))),
        ),
    ];
    let fibers = pair.y.classify_all_fibers()?;
    let var = pair.y.var().to_string();
    let i2_locus = fibers
        .iter()
        .filter_map(|f| match (&f.place, f.kind) {
            (Place::Finite(p), FiberType::I(n)) if n % 2 == 0 && n > 0 => Some(p.pow(n / 2)),
            _ => None,
        })
        .fold(UPoly::one(&var), |acc, p| &acc * &p);
    let same = i2_locus.monic() == g.with_var(&var).monic();
    out.push(CheckItem::new("roots are the I2n places of Y", same, format!("I2n locus {i2_locus}")));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> GenusTwoCurve {
        GenusTwoCurve::from_roots(int(1), (0..6).map(int).collect()).unwrap()
    }

    #[test]
    fn surface_shapes() {
        let ic = reference().invariants();
        let pair = surfaces_from_ic(&ic).unwrap();
        assert_eq!(pair.x.chi, 2);
        assert_eq!(pair.y.chi, 2);
        assert!(pair.y.a6.is_zero());
        let a4 = &pair.x.a4;
        assert_eq!(a4.coeff(3), int(-1));
        assert_eq!(a4.coeff(4), -&ic.i4 / int(12));
        let again = pair.params.surface("t").unwrap();
        assert_eq!(again, pair.x);
    }

    #[test]
    fn reference_fibers() {
        let pair = surfaces_from_ic(&reference().invariants()).unwrap();
        let fs = pair.x.classify_all_fibers().unwrap();
        let kinds: Vec<String> = fs.iter().map(|f| format!("{}x{}", f.kind, f.degree)).collect();
        assert_eq!(fs.last().unwrap().kind, FiberType::IIStar);
        assert!(fs.iter().any(|f| f.kind == FiberType::IIIStar && f.place == Place::root(&int(0), "t")), "{kinds:?}");
        assert_eq!(crate::elliptic::euler_sum(&fs), 24);
    }

    #[test]
    fn singular_rejected() {
        let ic = IgusaClebsch::new(int(1), int(2), int(3), int(0));
        assert!(matches!(surfaces_from_ic(&ic), Err(Error::SingularCurve)));
    }

    #[test]
    fn quotient_identity_concrete_and_perturbed() {
        let pair = surfaces_from_ic(&reference().invariants()).unwrap();
        verify_quotient_identity(&pair).unwrap();
        let mut bad = pair.clone();
        bad.params.b_prime += int(1);
        bad.x = bad.params.surface("t").unwrap();
        assert!(matches!(verify_quotient_identity(&bad), Err(Error::IdentityMismatch { .. })));
    }

    #[test]
    fn quotient_identity_symbolic() {
        symbolic_quotient_identity().unwrap();
    }

    #[test]
    fn involution_t_component() {
        let m = InvolutionMap::symbolic();
        let v = m.t.vars().clone();
        let g = |i| MPoly::gen(i, &v);
        let w = &(-&g(0)) + &(&g(3) * &g(2).pow(2)).scale(&rat(1, 24));
        let expect = RationalFunction::new(w.scale(&int(4)), &g(6) * &g(2).pow(3));
        assert!(m.t.equals(&expect));
    }

    #[test]
    fn involution_symbolic() {
        assert!(symbolic_involution_checks().unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn involution_reference() {
        let pair = surfaces_from_ic(&reference().invariants()).unwrap();
        let rep = nikulin_involution_check(&pair, &InvolutionOptions { samples: 12, ..Default::default() }).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn sextic() {
        let c = reference();
        let g = sextic_correspondence(&c).unwrap();
        assert_eq!(g.deg(), 6);
        assert!(is_zero(&g.coeff(5)));
        assert_eq!(g.coeff(4).clone() * g.coeff(4), int(4) * g.coeff(2));
        let pair = surfaces_from_ic(&c.invariants()).unwrap();
        assert!(sextic_checks(&pair).unwrap().iter().all(|c| c.passed));
        let generic = GenusTwoCurve::from_roots(int(2), [0, 1, 3, -2, 7, 11].map(int).to_vec()).unwrap();
        let pair = surfaces_from_ic(&generic.invariants()).unwrap();
        assert!(sextic_checks(&pair).unwrap().iter().all(|c| c.passed));
        let i2 = pair
            .y
            .classify_all_fibers()
            .unwrap()
            .iter()
            .filter(|f| f.kind == FiberType::I(2))
            .map(|f| f.degree)
            .sum::<usize>();
        assert_eq!(i2, 6);
    }

    #[test]
    fn trivial_lattice_reference() {
        let pair = surfaces_from_ic(&generic_ic()).unwrap();
        let (x, y) = trivial_lattices(&pair).unwrap();
        assert_eq!((x.rho, x.discriminant.as_str()), (17, "2"));
        assert_eq!((y.reducible_rank, y.naive_discriminant.as_str(), y.discriminant.as_str()), (15, "256", "64"));
    }

    fn generic_ic() -> IgusaClebsch {
        GenusTwoCurve::from_roots(int(2), [0, 1, 3, -2, 7, 11].map(int).to_vec()).unwrap().invariants()
    }

    #[test]
    fn quotient_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut q = || rat(rng.random_range(-50..=50), rng.random_range(1..=9));
            let i10 = loop {
                let v = q();
                if !is_zero(&v) {
                    break v;
                }
            };
            let ic = IgusaClebsch::new(q(), q(), q(), i10);
            verify_quotient_identity(&surfaces_from_ic(&ic).unwrap()).unwrap();
        }
    }

    #[test]
    fn fixed_locus_is_finite_on_fibers() {
        let ic = generic_ic();
        let map = InvolutionMap::for_invariants(&ic);
        for t0 in [rat(1, 3), int(2), int(-5)] {
            let t_img: Vec<Rational> = (0..4)
                .map(|k| map.t.eval(&[int(k), int(0), t0.clone(), int(0), int(0), int(0), int(0)]).unwrap())
                .collect();
            let fixed = t_img.iter().filter(|v| **v == t0).count();
            assert!(fixed <= 1);
        }
    }
}
