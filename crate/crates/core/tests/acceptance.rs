use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use k3g2_core::algebra::rational::{int, is_zero, rat, Rational};
use k3g2_core::algebra::UPoly;
use k3g2_core::elliptic::{euler_sum, FiberType, KodairaFiber, Place};
use k3g2_core::invariants::{
    ic_from_coeffs, ic_from_roots, ic_weighted_equal, transform_sextic, GenusTwoCurve, IgusaClebsch,
};
use k3g2_core::kummer::{build_kummer, nodes_and_tropes, verify_configuration};
use k3g2_core::lattices::{kummer_lattice, lambda_16_6, named_lattice, naruki_classes, scale_and_sum, Signature};
use k3g2_core::shioda_inose::{
    kummer_side_verification, nikulin_involution_check, sextic_from_ic, surfaces_from_ic, symbolic_involution_checks,
    symbolic_quotient_identity, trivial_lattices, verify_quotient_identity, InvolutionOptions, KummerSideOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn reference() -> GenusTwoCurve {
    GenusTwoCurve::from_roots(int(1), (0..6).map(int).collect()).unwrap()
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

fn sig(p: usize, n: usize) -> Signature {
    Signature { positive: p, negative: n, zero: 0 }
}

fn lattice_suite() -> Outcome {
    let mut cases: Vec<(String, u64, Rational)> = vec![
        ("E8".into(), 240, int(1)),
        ("E7".into(), 126, int(2)),
        ("E6".into(), 72, int(3)),
        ("Nikulin".into(), 16, int(64)),
    ];
    for n in 4..=10u64 {
        cases.push((format!("D{n}"), 2 * n * (n - 1), int(4)));
    }
    for n in 1..=10u64 {
        cases.push((format!("A{n}"), n * (n + 1), int(n as i64 + 1)));
    }
    for (name, roots, disc) in &cases {
        let l = named_lattice(name).map_err(|e| e.to_string())?;
        let r = l.count_roots().map_err(|e| e.to_string())?;
        ensure(r == *roots && l.discriminant() == *disc, format!("{name}: {r} roots, disc {}", l.discriminant()))?;
    }
    let k = kummer_lattice().map_err(|e| e.to_string())?;
    ensure(k.discriminant() == int(64), format!("Kummer disc {}", k.discriminant()))?;
    let lam = lambda_16_6().map_err(|e| e.to_string())?;
    ensure(
        lam.lattice.discriminant() == int(64) && lam.lattice.signature() == sig(1, 16),
        format!("Lambda(16,6): {} {}", lam.lattice.discriminant(), lam.lattice.signature()),
    )?;
    let get = |s: &str| named_lattice(s).unwrap();
    let ns = scale_and_sum(&[(get("U"), int(1)), (get("E8"), int(-1)), (get("E7"), int(-1))]);
    ensure(
        ns.discriminant() == int(2) && ns.signature() == sig(1, 16),
        format!("U+E8(-1)+E7(-1): {} {}", ns.discriminant(), ns.signature()),
    )?;
    let k3 = scale_and_sum(&[
        (get("E8"), int(-1)),
        (get("E8"), int(-1)),
        (get("U"), int(1)),
        (get("U"), int(1)),
        (get("U"), int(1)),
    ]);
    ensure(
        k3.discriminant() == int(1) && k3.signature() == sig(3, 19),
        format!("K3 lattice: {} {}", k3.discriminant(), k3.signature()),
    )?;
    Ok(format!("{} named lattices, Kummer, Lambda(16,6), U+E8(-1)+E7(-1), II(3,19)", cases.len()))
}

fn naruki() -> Outcome {
    let (classes, report) = naruki_classes().map_err(|e| e.to_string())?;
    let failed: Vec<String> =
        report.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(failed.is_empty(), failed.join("; "))?;
    Ok(format!("{} checks over {} classes", report.checks.len(), classes.classes.len()))
}

fn finite_root(f: &KodairaFiber) -> Option<Rational> {
    match &f.place {
        Place::Finite(p) if p.deg() == 1 => Some(-p.coeff(0) / p.coeff(1)),
        _ => None,
    }
}

fn fiber_configurations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let ic = random_ic(&mut rng);
        let pair = surfaces_from_ic(&ic).map_err(|e| e.to_string())?;
        let fx = pair.x.classify_all_fibers().map_err(|e| e.to_string())?;
        let fx: Vec<_> = fx.into_iter().filter(|f| f.kind != FiberType::I(0)).collect();
        let at_inf = fx.iter().filter(|f| f.place == Place::Infinity).map(|f| f.kind).collect::<Vec<_>>();
        let at_zero = fx.iter().filter(|f| finite_root(f) == Some(int(0))).map(|f| f.kind).collect::<Vec<_>>();
        let i1: usize = fx.iter().filter(|f| f.kind == FiberType::I(1)).map(|f| f.degree).sum();
        ensure(
            at_inf == [FiberType::IIStar]
                && at_zero == [FiberType::IIIStar]
                && i1 == 5
                && fx.len() - 2 == fx.iter().filter(|f| f.kind == FiberType::I(1)).count()
                && euler_sum(&fx) == 24,
            format!(
                "trial {trial}: X fibers {:?}",
                fx.iter().map(|f| format!("{} at {}", f.kind, f.place)).collect::<Vec<_>>()
            ),
        )?;

        let fy = pair.y.classify_all_fibers().map_err(|e| e.to_string())?;
        let fy: Vec<_> = fy.into_iter().filter(|f| f.kind != FiberType::I(0)).collect();
        let g = sextic_from_ic(&ic).map_err(|e| e.to_string())?.with_var(pair.y.var());
        let at_inf = fy.iter().filter(|f| f.place == Place::Infinity).map(|f| f.kind).collect::<Vec<_>>();
        let i2: Vec<&KodairaFiber> = fy.iter().filter(|f| f.kind == FiberType::I(2)).collect();
        let i2_count: usize = i2.iter().map(|f| f.degree).sum();
        let i2_locus = i2.iter().fold(UPoly::one(pair.y.var()), |acc, f| match &f.place {
            Place::Finite(p) => &acc * p,
            Place::Infinity => acc,
        });
        let i1: usize = fy.iter().filter(|f| f.kind == FiberType::I(1)).map(|f| f.degree).sum();
        ensure(
            at_inf == [FiberType::IStar(5)]
                && i2_count == 6
                && i2_locus.monic() == g.monic()
                && i1 == 1
                && euler_sum(&fy) == 24,
            format!(
                "trial {trial}: Y fibers {:?}",
                fy.iter().map(|f| format!("{} at {}", f.kind, f.place)).collect::<Vec<_>>()
            ),
        )?;
    }
    Ok("20 random invariant tuples: X = II* + III* + 5 I1, Y = I5* + 6 I2 + I1".into())
}

fn quotient_identity() -> Outcome {
    symbolic_quotient_identity().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let pair = surfaces_from_ic(&random_ic(&mut rng)).map_err(|e| e.to_string())?;
        verify_quotient_identity(&pair).map_err(|e| e.to_string())?;
    }
    Ok("symbolic identity and 20 rational specialisations".into())
}

fn nikulin() -> Outcome {
    let sym = symbolic_involution_checks().map_err(|e| e.to_string())?;
    ensure(sym.iter().all(|c| c.passed), "symbolic involution check failed")?;
    let pair = surfaces_from_ic(&reference().invariants()).map_err(|e| e.to_string())?;
    let rep = nikulin_involution_check(&pair, &InvolutionOptions { samples: 100, digits: 60, ..Default::default() })
        .map_err(|e| e.to_string())?;
    ensure(rep.samples == 100 && rep.digits == 60, "wrong sampling parameters")?;
    ensure(rep.passed() && rep.max_log10_residual < -40.0, format!("{:?}", rep.checks))?;
    Ok(format!("symbolic square = id; max log10 residual {:.1} at 100 points, 60 digits", rep.max_log10_residual))
}

fn invariant_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 100 {
        let mut roots: Vec<Rational> = Vec::new();
        while roots.len() < 6 {
            let r = rat(rng.random_range(-10..=10), rng.random_range(1..=10));
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let f6 = rat(rng.random_range(1..=10) * if rng.random_bool(0.5) { 1 } else { -1 }, rng.random_range(1..=10));
        let f = UPoly::from_roots(&f6, &roots, "x");
        let a = ic_from_coeffs(&f).map_err(|e| e.to_string())?;
        let b = ic_from_roots(&f6, &roots).map_err(|e| e.to_string())?;
        ensure(a == b, format!("coefficient and root formulas disagree for roots {roots:?}"))?;
        ensure(a.i10 == f.discriminant().map_err(|e| e.to_string())?, "I10 differs from the discriminant")?;
        done += 1;
    }
    let c = reference();
    let ic = c.invariants();
    let mut moved = 0;
    while moved < 20 {
        let m: Vec<Rational> = (0..4).map(|_| int(rng.random_range(-5..=5))).collect();
        if &m[0] * &m[3] == &m[1] * &m[2] {
            continue;
        }
        let g = transform_sextic(c.f(), &m[0], &m[1], &m[2], &m[3]);
        let ic_g = ic_from_coeffs(&g).map_err(|e| e.to_string())?;
        ensure(ic_weighted_equal(&ic, &ic_g), format!("Mobius {m:?} changed the invariants"))?;
        moved += 1;
    }
    Ok("100 sextics agree exactly, I10 = disc, 20 Mobius substitutions".into())
}

fn kummer_configuration() -> Outcome {
    let c = reference();
    let q = build_kummer(&c);
    let (nodes, tropes) = nodes_and_tropes(&c).map_err(|e| e.to_string())?;
    let rep = verify_configuration(&q, &nodes, &tropes);
    ensure(rep.passed(), rep.failures().join("; "))?;
    ensure(rep.row_sums.iter().chain(&rep.column_sums).all(|&s| s == 6), "incidence sums")?;
    ensure(rep.trope_product_scalar.as_deref() == Some("4"), format!("scalar {:?}", rep.trope_product_scalar))?;
    Ok(format!("{} nodes, {} tropes, K1^2/4 - K0 K2 = 4 T1...T6", nodes.len(), tropes.len()))
}

fn igusa_quartic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ics = vec![reference().invariants()];
    ics.extend((0..50).map(|_| random_ic(&mut rng)));
    for ic in &ics {
        let g = sextic_from_ic(ic).map_err(|e| e.to_string())?;
        ensure(is_zero(&g.coeff(5)), "g5 != 0")?;
        ensure(g.coeff(4) * g.coeff(4) == int(4) * g.coeff(2), "g4^2 != 4 g2")?;
    }
    Ok(format!("{} sextics: g5 = 0 and g4^2 = 4 g2", ics.len()))
}

fn heavy_kummer_side() -> Outcome {
    let rep = kummer_side_verification(&reference(), &KummerSideOptions::default()).map_err(|e| e.to_string())?;
    let failed: Vec<String> =
        rep.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(failed.is_empty(), failed.join("; "))?;
    ensure(rep.pencil_dimension == 2, format!("pencil dimension {}", rep.pencil_dimension))?;
    ensure(rep.x_degrees == (16, 16) && rep.y_degrees == (18, 18), "degrees")?;
    ensure(rep.held_out_samples == 50 && rep.digits >= 80, "sampling parameters")?;
    ensure(rep.max_log10_held_out_residual < -30.0, format!("residual {}", rep.max_log10_held_out_residual))?;
    Ok(format!(
        "pencil dim 2, degrees 16/16 and 18/18, 50 held-out points, max log10 residual {:.1}",
        rep.max_log10_held_out_residual
    ))
}

fn shioda_tate_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pair = surfaces_from_ic(&random_ic(&mut rng)).map_err(|e| e.to_string())?;
    let (x, y) = trivial_lattices(&pair).map_err(|e| e.to_string())?;
    ensure(x.rho == 17 && x.discriminant == "2", format!("X: rho {} disc {}", x.rho, x.discriminant))?;
    ensure(
        y.reducible_rank == 15
            && y.rho == 17
            && y.naive_discriminant == "256"
            && y.torsion == 2
            && y.discriminant == "64",
        format!("Y: {:?}", y),
    )?;
    Ok("X: rho 17, disc 2; Y: sum(m-1) 15, naive disc 4*2^6, /2^2 torsion -> 2^6".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("lattice data", 10, lattice_suite),
        ("Naruki classes", 30, naruki),
        ("fiber configurations", 60, fiber_configurations),
        ("quotient identity", 10, quotient_identity),
        ("Nikulin involution", 60, nikulin),
        ("invariant oracles", 60, invariant_oracles),
        ("Kummer configuration", 120, kummer_configuration),
        ("Igusa quartic membership", 1, igusa_quartic),
        ("Kummer-side functions", 3600, heavy_kummer_side),
        ("Shioda-Tate", 60, shioda_tate_counts),
    ];
    let mut failures = Vec::new();
    // direct writes bypass the harness capture so the lines always reach the log
    let mut out = std::io::stdout();
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let n = i + 1;
        match (&outcome, in_time) {
            (Ok(detail), true) => writeln!(out, "[PASS] criterion {n}: {name} ({:.2?}) {detail}", elapsed).unwrap(),
            (Ok(detail), false) => {
                writeln!(out, "[FAIL] criterion {n}: {name} took {:.2?}, limit {limit} s; {detail}", elapsed).unwrap();
                failures.push(n);
            }
            (Err(e), _) => {
                writeln!(out, "[FAIL] criterion {n}: {name} ({:.2?}) {e}", elapsed).unwrap();
                failures.push(n);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
