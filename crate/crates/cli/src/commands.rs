use std::time::Instant;

use k3g2_core::algebra::rational::{fmt as qfmt, fmt_list, int, is_zero, parse_list, parse_rational, rat, Rational};
use k3g2_core::algebra::UPoly;
use k3g2_core::elliptic::{euler_sum, FiberType, KodairaFiber, Place, WeierstrassSurface};
use k3g2_core::invariants::{
    ic_from_coeffs, ic_from_roots, ic_weighted_equal, transform_sextic, GenusTwoCurve, IgusaClebsch,
};
use k3g2_core::kummer::{build_kummer, nodes_and_tropes, verify_configuration};
use k3g2_core::lattices::{
    kummer_lattice, lambda_16_6, named_lattice, naruki_classes, scale_and_sum, GramLattice, Signature,
};
use k3g2_core::report::CheckItem;
use k3g2_core::shioda_inose::{
    kummer_side_verification, nikulin_involution_check, sextic_checks, surfaces_from_ic, symbolic_involution_checks,
    symbolic_quotient_identity, trivial_lattices, verify_quotient_identity, InvolutionOptions, KummerSideOptions,
    SurfacePair,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{approx, Report};
use crate::{CurveArgs, Level, SourceArgs};

pub struct Options {
    pub precision: usize,
    pub seed: u64,
}

type Outcome = Result<Report, String>;

fn parse_curve(c: &CurveArgs) -> Result<Option<GenusTwoCurve>, String> {
    if let Some(s) = &c.sextic {
        let coeffs = parse_list(s).map_err(|e| e.to_string())?;
        if coeffs.len() != 7 {
            return Err(format!("--sextic needs 7 coefficients f0..f6, got {}", coeffs.len()));
        }
        return GenusTwoCurve::from_coeffs(coeffs).map(Some).map_err(|e| e.to_string());
    }
    if let Some(r) = &c.roots {
        let roots = parse_list(r).map_err(|e| e.to_string())?;
        let lead = match &c.leading {
            Some(l) => parse_rational(l).map_err(|e| e.to_string())?,
            None => int(1),
        };
        if is_zero(&lead) {
            return Err("--leading must be nonzero".into());
        }
        return GenusTwoCurve::from_roots(lead, roots).map(Some).map_err(|e| e.to_string());
    }
    Ok(None)
}

fn reference_curve() -> GenusTwoCurve {
    GenusTwoCurve::from_roots(int(1), (0..6).map(int).collect()).expect("distinct roots")
}

fn curve_or_reference(c: &CurveArgs) -> Result<GenusTwoCurve, String> {
    Ok(parse_curve(c)?.unwrap_or_else(reference_curve))
}

fn require_curve(c: &CurveArgs) -> Result<GenusTwoCurve, String> {
    parse_curve(c)?.ok_or_else(|| "one of --sextic or --roots is required".into())
}

fn parse_ic(s: &str) -> Result<IgusaClebsch, String> {
    let v = parse_list(s).map_err(|e| e.to_string())?;
    if v.len() != 4 {
        return Err(format!("--ic needs 4 values I2,I4,I6,I10, got {}", v.len()));
    }
    Ok(IgusaClebsch::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
}

fn source_ic(s: &SourceArgs) -> Result<(IgusaClebsch, Value), String> {
    if let Some(ic) = &s.ic {
        return Ok((parse_ic(ic)?, json!({ "ic": ic })));
    }
    let c = require_curve(&s.curve)?;
    Ok((c.invariants(), curve_json(&c)))
}

fn curve_json(c: &GenusTwoCurve) -> Value {
    let mut v = json!({ "sextic": fmt_list(&c.coeffs7()) });
    if let Some(r) = c.roots() {
        v["roots"] = json!(fmt_list(r));
    }
    v
}

fn ic_json(ic: &IgusaClebsch) -> Value {
    json!({ "I2": qfmt(&ic.i2), "I4": qfmt(&ic.i4), "I6": qfmt(&ic.i6), "I10": qfmt(&ic.i10) })
}

/// Runs one section, turning an error into a failed check.
fn step<T>(r: &mut Report, section: &str, f: impl FnOnce() -> k3g2_core::Result<T>) -> Option<T> {
    let start = Instant::now();
    let out = f();
    r.time(section, start.elapsed());
    match out {
        Ok(v) => Some(v),
        Err(e) => {
            r.check(section, CheckItem::new("error", false, e.to_string()));
            None
        }
    }
}

pub fn invariants(c: &CurveArgs, _opts: &Options) -> Outcome {
    let curve = require_curve(c)?;
    let mut r = Report::new("invariants", curve_json(&curve));
    let ic = curve.invariants();
    r.section("invariants", ic_json(&ic));
    r.headline(format!("I2 = {}, I4 = {}, I6 = {}, I10 = {}", qfmt(&ic.i2), qfmt(&ic.i4), qfmt(&ic.i6), qfmt(&ic.i10)));
    if curve.degree() == 6 {
        if let Some(d) = step(&mut r, "invariants", || curve.f().discriminant()) {
            r.check("invariants", CheckItem::new("I10 = disc(f)", d == ic.i10, format!("disc = {}", qfmt(&d))));
        }
    }
    if let Some(roots) = curve.roots() {
        if let Some(by_roots) = step(&mut r, "invariants", || ic_from_roots(&curve.coeff(6), roots)) {
            r.check(
                "invariants",
                CheckItem::new("root formulas agree", by_roots == ic, "difference products of roots"),
            );
        }
    }
    Ok(r)
}

fn configuration_checks(r: &mut Report, curve: &GenusTwoCurve) {
    let q = build_kummer(curve);
    r.section(
        "quartic",
        json!({ "K2": q.k2.to_string(), "K1": q.k1.to_string(), "K0": q.k0.to_string(), "variables": ["z1", "z2", "z3", "z4"] }),
    );
    let Some((nodes, tropes)) = step(r, "kummer", || nodes_and_tropes(curve)) else { return };
    let rep = verify_configuration(&q, &nodes, &tropes);
    let bad_nodes = rep.nodes_singular.iter().filter(|c| !c.passed).count();
    let bad_tropes = rep.tropes_tangent.iter().filter(|c| !c.passed).count();
    r.check(
        "kummer",
        CheckItem::new("nodes singular", bad_nodes == 0, format!("{} of {} fail", bad_nodes, nodes.len())),
    );
    r.check(
        "kummer",
        CheckItem::new("tropes tangent", bad_tropes == 0, format!("{} of {} fail", bad_tropes, tropes.len())),
    );
    let sums_ok = rep.row_sums.iter().chain(&rep.column_sums).all(|&s| s == 6);
    r.check("kummer", CheckItem::new("incidence 16_6", sums_ok && rep.incidence_matches_rule, "row and column sums 6"));
    r.check("kummer", CheckItem::new("duality", rep.duality_symmetric, "node and trope labels swap"));
    r.check("kummer", CheckItem::new("completing the square", rep.completing_square, "(K2 z4 + K1/2)^2 - D = K2 K"));
    r.check(
        "kummer",
        CheckItem::new(
            "trope product",
            rep.trope_product_scalar.is_some(),
            format!("K1^2/4 - K0 K2 = c T1...T6 with c = {}", rep.trope_product_scalar.as_deref().unwrap_or("none")),
        ),
    );
    r.section("configuration", serde_json::to_value(&rep).expect("serializable"));
}

pub fn kummer(c: &CurveArgs, _opts: &Options) -> Outcome {
    let curve = require_curve(c)?;
    let mut r = Report::new("kummer", curve_json(&curve));
    configuration_checks(&mut r, &curve);
    Ok(r)
}

fn pair_checks(r: &mut Report, pair: &SurfacePair) {
    r.check(
        "surfaces",
        CheckItem::new("chi", pair.x.chi == 2 && pair.y.chi == 2, format!("X: {}, Y: {}", pair.x.chi, pair.y.chi)),
    );
    if step(r, "surfaces", || verify_quotient_identity(pair)).is_some() {
        r.check("surfaces", CheckItem::new("quotient identity", true, "2-isogenous quotient of refibered X equals Y"));
    }
    if let Some(items) = step(r, "sextic", || sextic_checks(pair)) {
        r.checks("sextic", items);
    }
}

pub fn build(s: &SourceArgs, _opts: &Options) -> Outcome {
    let (ic, input) = source_ic(s)?;
    let mut r = Report::new("build", input);
    r.section("invariants", ic_json(&ic));
    if let Some(pair) = step(&mut r, "surfaces", || surfaces_from_ic(&ic)) {
        r.section("surfaces", serde_json::to_value(&pair).expect("serializable"));
        pair_checks(&mut r, &pair);
    }
    Ok(r)
}

fn fibers_json(fs: &[KodairaFiber]) -> Value {
    Value::Array(
        fs.iter()
            .filter(|f| f.kind != FiberType::I(0))
            .map(|f| {
                json!({
                    "place": f.place.to_string(),
                    "degree": f.degree,
                    "type": f.kind.to_string(),
                    "m": f.components,
                    "m1": f.simple_components,
                    "euler": f.euler,
                })
            })
            .collect(),
    )
}

fn classify_surface(r: &mut Report, name: &str, s: &WeierstrassSurface) -> Option<Vec<KodairaFiber>> {
    let fs = step(r, name, || s.classify_all_fibers())?;
    let e = euler_sum(&fs);
    let kinds: Vec<String> = fs
        .iter()
        .filter(|f| f.kind != FiberType::I(0))
        .map(|f| {
            if f.degree > 1 {
                format!("{} x{} at {}", f.kind, f.degree, f.place)
            } else {
                format!("{} at {}", f.kind, f.place)
            }
        })
        .collect();
    r.headline(format!("{name}: {}", kinds.join(", ")));
    r.check(name, CheckItem::new("euler sum", e == 12 * s.chi, format!("{e} = 12 chi")));
    r.section(name, json!({ "surface": serde_json::to_value(s).expect("serializable"), "fibers": fibers_json(&fs) }));
    Some(fs)
}

pub fn classify(s: &SourceArgs, _opts: &Options) -> Outcome {
    let (ic, input) = source_ic(s)?;
    let mut r = Report::new("classify", input);
    let Some(pair) = step(&mut r, "surfaces", || surfaces_from_ic(&ic)) else { return Ok(r) };
    classify_surface(&mut r, "X", &pair.x);
    classify_surface(&mut r, "Y", &pair.y);
    if let Some((x, y)) = step(&mut r, "shioda-tate", || trivial_lattices(&pair)) {
        r.headline(format!("X: rho {}, trivial discriminant {}", x.rho, x.discriminant));
        r.headline(format!(
            "Y: rank of reducible part {}, naive discriminant {}, corrected by 2-torsion {}",
            y.reducible_rank, y.naive_discriminant, y.discriminant
        ));
        r.section("shioda-tate", json!({ "X": x, "Y": y }));
    }
    Ok(r)
}

fn lattice_json(l: &GramLattice) -> Value {
    json!({
        "rank": l.rank(),
        "discriminant": qfmt(&l.discriminant()),
        "signature": l.signature().to_string(),
        "even": l.is_even(),
        "gram": l.to_gram_strings(),
    })
}

pub fn lattice(name: &str, roots: bool, _opts: &Options) -> Outcome {
    let mut r = Report::new("lattice", json!({ "name": name, "roots": roots }));
    if name.eq_ignore_ascii_case("naruki") {
        if let Some((classes, rep)) = step(&mut r, "naruki", naruki_classes) {
            r.checks("naruki", rep.checks.clone());
            r.section("naruki", json!({ "classes": classes, "gram": rep.gram }));
        }
        return Ok(r);
    }
    let l = named_lattice(name).map_err(|e| e.to_string())?;
    let mut v = lattice_json(&l);
    let mut line =
        format!("{name}: rank {}, discriminant {}, signature {}", l.rank(), qfmt(&l.discriminant()), l.signature());
    if roots {
        if let Some(n) = step(&mut r, "lattice", || l.count_roots()) {
            v["roots"] = json!(n);
            line.push_str(&format!(", roots {n}"));
        }
    }
    r.headline(line);
    r.section("lattice", v);
    Ok(r)
}

fn random_ic(rng: &mut ChaCha8Rng) -> IgusaClebsch {
    let mut q = || rat(rng.random_range(-200..=200), rng.random_range(1..=30));
    let i10 = loop {
        let v = q();
        if !is_zero(&v) {
            break v;
        }
    };
    IgusaClebsch::new(q(), q(), q(), i10)
}

fn lattice_suite(r: &mut Report) {
    let sig = |p, n| Signature { positive: p, negative: n, zero: 0 };
    let mut cases: Vec<(String, u64, Rational)> = vec![
        ("E8".into(), 240, int(1)),
        ("E7".into(), 126, int(2)),
        ("E6".into(), 72, int(3)),
        ("Nikulin".into(), 16, int(64)),
    ];
    cases.extend((4..=10u64).map(|n| (format!("D{n}"), 2 * n * (n - 1), int(4))));
    cases.extend((1..=10u64).map(|n| (format!("A{n}"), n * (n + 1), int(n as i64 + 1))));
    let mut rows = Vec::new();
    for (name, roots, disc) in cases {
        let Some(l) = step(r, "lattices", || named_lattice(&name)) else { continue };
        let Some(n) = step(r, "lattices", || l.count_roots()) else { continue };
        let d = l.discriminant();
        r.check(
            "lattices",
            CheckItem::new(name.clone(), n == roots && d == disc, format!("{n} roots, disc {}", qfmt(&d))),
        );
        rows.push(json!({ "name": name, "roots": n, "discriminant": qfmt(&d) }));
    }
    let mut indefinite = Vec::new();
    if let Some(k) = step(r, "lattices", kummer_lattice) {
        indefinite.push(("Kummer".to_string(), k, int(64), sig(0, 16)));
    }
    if let Some(l) = step(r, "lattices", lambda_16_6) {
        indefinite.push(("Lambda(16,6)".into(), l.lattice, int(64), sig(1, 16)));
    }
    let get = |s: &str| named_lattice(s).expect("known lattice");
    indefinite.push((
        "U+E8(-1)+E7(-1)".into(),
        scale_and_sum(&[(get("U"), int(1)), (get("E8"), int(-1)), (get("E7"), int(-1))]),
        int(2),
        sig(1, 16),
    ));
    indefinite.push((
        "E8(-1)^2+U^3".into(),
        scale_and_sum(&[
            (get("E8"), int(-1)),
            (get("E8"), int(-1)),
            (get("U"), int(1)),
            (get("U"), int(1)),
            (get("U"), int(1)),
        ]),
        int(1),
        sig(3, 19),
    ));
    for (name, l, disc, s) in indefinite {
        let (d, g) = l.disc_and_signature();
        r.check(
            "lattices",
            CheckItem::new(name.clone(), d == disc && g == s, format!("disc {}, signature {g}", qfmt(&d))),
        );
        rows.push(json!({ "name": name, "discriminant": qfmt(&d), "signature": g.to_string() }));
    }
    r.section("lattices", Value::Array(rows));
}

fn invariant_suite(r: &mut Report, curve: &GenusTwoCurve, rng: &mut ChaCha8Rng) {
    let mut agree = 0;
    let mut disc_ok = 0;
    let trials = 100;
    for _ in 0..trials {
        let mut roots: Vec<Rational> = Vec::new();
        while roots.len() < 6 {
            let x = rat(rng.random_range(-10..=10), rng.random_range(1..=10));
            if !roots.contains(&x) {
                roots.push(x);
            }
        }
        let lead = rat(rng.random_range(1..=10), rng.random_range(1..=10));
        let f = UPoly::from_roots(&lead, &roots, "x");
        let (Ok(a), Ok(b), Ok(d)) = (ic_from_coeffs(&f), ic_from_roots(&lead, &roots), f.discriminant()) else {
            continue;
        };
        agree += (a == b) as usize;
        disc_ok += (a.i10 == d) as usize;
    }
    r.check(
        "invariants",
        CheckItem::new("coefficient = root formulas", agree == trials, format!("{agree} of {trials}")),
    );
    r.check("invariants", CheckItem::new("I10 = discriminant", disc_ok == trials, format!("{disc_ok} of {trials}")));
    let ic = curve.invariants();
    let mut moved = 0;
    let mut same = 0;
    while moved < 20 {
        let m: Vec<Rational> = (0..4).map(|_| int(rng.random_range(-5..=5))).collect();
        if &m[0] * &m[3] == &m[1] * &m[2] {
            continue;
        }
        moved += 1;
        let g = transform_sextic(curve.f(), &m[0], &m[1], &m[2], &m[3]);
        if let Ok(ic_g) = ic_from_coeffs(&g) {
            same += ic_weighted_equal(&ic, &ic_g) as usize;
        }
    }
    r.check("invariants", CheckItem::new("Mobius invariance", same == moved, format!("{same} of {moved}")));
    r.section("invariants", ic_json(&ic));
}

fn finite_root(f: &KodairaFiber) -> Option<Rational> {
    match &f.place {
        Place::Finite(p) if p.deg() == 1 => Some(-p.coeff(0) / p.coeff(1)),
        _ => None,
    }
}

/// `X = II* + III* + 5 I1` and `Y = I5* + 6 I2 + I1` for generic invariants.
fn generic_configuration(pair: &SurfacePair) -> k3g2_core::Result<bool> {
    let fx: Vec<_> = pair.x.classify_all_fibers()?.into_iter().filter(|f| f.kind != FiberType::I(0)).collect();
    let fy: Vec<_> = pair.y.classify_all_fibers()?.into_iter().filter(|f| f.kind != FiberType::I(0)).collect();
    let count = |fs: &[KodairaFiber], k: FiberType| fs.iter().filter(|f| f.kind == k).map(|f| f.degree).sum::<usize>();
    let x_ok = fx.iter().any(|f| f.place == Place::Infinity && f.kind == FiberType::IIStar)
        && fx.iter().any(|f| finite_root(f) == Some(int(0)) && f.kind == FiberType::IIIStar)
        && count(&fx, FiberType::I(1)) == 5
        && euler_sum(&fx) == 24;
    let y_ok = fy.iter().any(|f| f.place == Place::Infinity && f.kind == FiberType::IStar(5))
        && count(&fy, FiberType::I(2)) == 6
        && count(&fy, FiberType::I(1)) == 1
        && euler_sum(&fy) == 24;
    Ok(x_ok && y_ok)
}

fn surface_suite(r: &mut Report, curve: &GenusTwoCurve, rng: &mut ChaCha8Rng) -> Option<SurfacePair> {
    if step(r, "surfaces", symbolic_quotient_identity).is_some() {
        r.check("surfaces", CheckItem::new("quotient identity (symbolic)", true, "generic invariants"));
    }
    let mut generic = 0;
    let mut quotient = 0;
    for _ in 0..20 {
        let Some(pair) = step(r, "surfaces", || surfaces_from_ic(&random_ic(rng))) else { continue };
        quotient += verify_quotient_identity(&pair).is_ok() as usize;
        generic += generic_configuration(&pair).unwrap_or(false) as usize;
    }
    r.check("surfaces", CheckItem::new("quotient identity (random)", quotient == 20, format!("{quotient} of 20")));
    r.check("surfaces", CheckItem::new("generic fiber configuration", generic == 20, format!("{generic} of 20")));
    let pair = step(r, "surfaces", || surfaces_from_ic(&curve.invariants()))?;
    pair_checks(r, &pair);
    classify_surface(r, "X", &pair.x);
    classify_surface(r, "Y", &pair.y);
    if let Some((x, y)) = step(r, "shioda-tate", || trivial_lattices(&pair)) {
        r.section("shioda-tate", json!({ "X": x, "Y": y }));
    }
    if let Some(items) = step(r, "involution", symbolic_involution_checks) {
        r.checks("involution", items);
    }
    Some(pair)
}

pub fn verify(level: Level, c: &CurveArgs, opts: &Options) -> Outcome {
    let curve = curve_or_reference(c)?;
    let config = json!({
        "level": format!("{level:?}").to_lowercase(),
        "curve": curve_json(&curve),
        "precision": opts.precision,
        "seed": opts.seed,
    });
    let mut r = Report::new("verify", config);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let start = Instant::now();
    lattice_suite(&mut r);
    r.time("lattices", start.elapsed());
    if let Some((_, rep)) = step(&mut r, "naruki", naruki_classes) {
        r.checks("naruki", rep.checks);
    }
    invariant_suite(&mut r, &curve, &mut rng);
    if curve.roots().is_some() {
        configuration_checks(&mut r, &curve);
    }
    let pair = surface_suite(&mut r, &curve, &mut rng);

    if level != Level::Fast {
        if let Some(pair) = &pair {
            let io = InvolutionOptions { samples: 100, digits: opts.precision, seed: opts.seed };
            if let Some(rep) = step(&mut r, "involution", || nikulin_involution_check(pair, &io)) {
                r.section(
                    "involution",
                    json!({
                        "samples": rep.samples,
                        "max_log10_residual": approx(rep.max_log10_residual, rep.digits),
                        "max_log10_return": approx(rep.max_log10_return, rep.digits),
                    }),
                );
                r.checks("involution", rep.checks);
            }
        }
    }
    if level == Level::Kummer {
        let ko = KummerSideOptions { digits: opts.precision.max(80), seed: opts.seed, ..Default::default() };
        if let Some(rep) = step(&mut r, "kummer-side", || kummer_side_verification(&curve, &ko)) {
            r.checks("kummer-side", rep.checks.clone());
            let mut v = serde_json::to_value(&rep).expect("serializable");
            v["max_log10_held_out_residual"] = approx(rep.max_log10_held_out_residual, rep.digits);
            r.section("kummer-side", v);
        }
    }
    Ok(r)
}
