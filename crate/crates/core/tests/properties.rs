use k3g2_core::algebra::rational::{int, rat, Rational};
use k3g2_core::algebra::{QMatrix, UPoly};
use k3g2_core::elliptic::{euler_sum, KodairaFiber, WeierstrassSurface};
use k3g2_core::invariants::{ic_from_coeffs, ic_weighted_equal, transform_sextic, GenusTwoCurve, IgusaClebsch};
use k3g2_core::lattices::{named_lattice, overlattice, GramLattice};
use k3g2_core::shioda_inose::{sextic_from_ic, surfaces_from_ic, verify_quotient_identity};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, s)| rat(if s { n } else { -n }, d))
}

fn ic_strategy() -> impl Strategy<Value = IgusaClebsch> {
    (small_rational(), small_rational(), small_rational(), nonzero_rational())
        .prop_map(|(a, b, c, d)| IgusaClebsch::new(a, b, c, d))
}

fn kinds(fs: &[KodairaFiber]) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = fs.iter().map(|f| (f.kind.to_string(), f.degree)).collect();
    v.sort();
    v
}

fn distinct_roots() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::btree_set(-10i64..=10, 6).prop_map(|s| s.into_iter().map(int).collect())
}

/// Unimodular matrix from a sequence of row operations `r_i += k r_j`.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> QMatrix {
    let mut p = QMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for c in 0..n {
            let v = &p[(i, c)] + &p[(j, c)] * int(k);
            p[(i, c)] = v;
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tate_invariant_under_weighted_rescaling(ic in ic_strategy(), u in nonzero_rational()) {
        let pair = surfaces_from_ic(&ic).unwrap();
        for s in [&pair.x, &pair.y] {
            let u2 = &u * &u;
            let t = WeierstrassSurface::new(
                s.a2.scale(&u2),
                s.a4.scale(&(&u2 * &u2)),
                s.a6.scale(&(&u2 * &u2 * &u2)),
            ).unwrap();
            prop_assert_eq!(kinds(&s.classify_all_fibers().unwrap()), kinds(&t.classify_all_fibers().unwrap()));
            prop_assert_eq!(s.chi, t.chi);
        }
    }

    #[test]
    fn constructed_surfaces_are_k3(ic in ic_strategy()) {
        let pair = surfaces_from_ic(&ic).unwrap();
        prop_assert_eq!(euler_sum(&pair.x.classify_all_fibers().unwrap()), 24);
        prop_assert_eq!(euler_sum(&pair.y.classify_all_fibers().unwrap()), 24);
        prop_assert!(verify_quotient_identity(&pair).is_ok());
        let g = sextic_from_ic(&ic).unwrap();
        prop_assert_eq!(g.coeff(5), int(0));
        prop_assert_eq!(g.coeff(4) * g.coeff(4), int(4) * g.coeff(2));
    }

    #[test]
    fn twist_keeps_classification(roots in distinct_roots(), c in nonzero_rational()) {
        let f = GenusTwoCurve::from_roots(int(1), roots).unwrap();
        let twisted = GenusTwoCurve::from_coeffs(f.f().scale(&(&c * &c)).coeffs().to_vec()).unwrap();
        let (a, b) = (f.invariants(), twisted.invariants());
        prop_assert!(ic_weighted_equal(&a, &b));
        prop_assert_eq!(b.clone(), a.scaled(&(&c * &c)));
        let (pa, pb) = (surfaces_from_ic(&a).unwrap(), surfaces_from_ic(&b).unwrap());
        prop_assert_eq!(kinds(&pa.x.classify_all_fibers().unwrap()), kinds(&pb.x.classify_all_fibers().unwrap()));
        prop_assert_eq!(kinds(&pa.y.classify_all_fibers().unwrap()), kinds(&pb.y.classify_all_fibers().unwrap()));
    }

    #[test]
    fn ic_weighted_scaling(coeffs in proptest::collection::vec(-6i64..=6, 7), r in nonzero_rational()) {
        prop_assume!(coeffs[6] != 0 || coeffs[5] != 0);
        let f = UPoly::from_ints(&coeffs, "x");
        let a = ic_from_coeffs(&f).unwrap();
        let b = ic_from_coeffs(&f.scale(&r)).unwrap();
        prop_assert_eq!(b.clone(), a.scaled(&r));
        prop_assert!(ic_weighted_equal(&a, &b));
    }

    #[test]
    fn ic_mobius_invariance(roots in distinct_roots(), m in proptest::collection::vec(-4i64..=4, 4)) {
        let (a, b, c, d) = (int(m[0]), int(m[1]), int(m[2]), int(m[3]));
        prop_assume!(&a * &d - &b * &c != int(0));
        let f = GenusTwoCurve::from_roots(int(1), roots).unwrap();
        let g = transform_sextic(f.f(), &a, &b, &c, &d);
        let ic_f = f.invariants();
        let ic_g = ic_from_coeffs(&g).unwrap();
        prop_assert!(ic_weighted_equal(&ic_f, &ic_g));
    }

    #[test]
    fn roots_survive_unimodular_change(
        name in prop::sample::select(vec!["A4", "D5", "E6", "A3", "D4"]),
        ops in proptest::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..10),
    ) {
        let l = named_lattice(name).unwrap();
        let p = unimodular(l.rank(), &ops);
        let g = p.mul(&l.gram).mul(&p.transpose());
        let m = GramLattice::with_default_labels(g, "v").unwrap();
        prop_assert_eq!(l.count_roots().unwrap(), m.count_roots().unwrap());
        prop_assert_eq!(l.discriminant(), m.discriminant());
        prop_assert_eq!(l.signature(), m.signature());
    }

    #[test]
    fn overlattice_index_relation(mask in 1u8..16) {
        // <2>^8 glued by halves of codewords of the extended Hamming code
        let hamming: [[i64; 8]; 4] = [
            [1, 1, 1, 1, 0, 0, 0, 0],
            [1, 1, 0, 0, 1, 1, 0, 0],
            [1, 0, 1, 0, 1, 0, 1, 0],
            [1, 1, 1, 1, 1, 1, 1, 1],
        ];
        let base = GramLattice::with_default_labels(QMatrix::diagonal(&vec![int(2); 8]), "e").unwrap();
        let gens: Vec<(String, Vec<Rational>)> = (0..4)
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| (format!("c{k}"), hamming[k].iter().map(|&b| rat(b, 2)).collect()))
            .collect();
        let ext = overlattice(&base, &gens).unwrap();
        prop_assert_eq!(ext.index.clone(), int(1 << gens.len()));
        prop_assert_eq!(base.discriminant(), &ext.index * &ext.index * ext.lattice.discriminant());
    }
}
