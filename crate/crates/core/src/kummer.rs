//! The singular Kummer quartic of a genus-2 Jacobian with its sixteen nodes and tropes.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::numeric::BigComplex;
use crate::algebra::rational::{fmt as qfmt, int, is_zero, Rational};
use crate::algebra::{vars, MPoly, UPoly, Vars};
use crate::error::{Error, Result};
use crate::invariants::GenusTwoCurve;
pub use crate::report::CheckItem;

/// `K = K2 z4^2 + K1 z4 + K0` in `P^3`, with `K0, K1, K2` free of `z4`.
#[derive(Clone, Debug)]
pub struct KummerQuartic {
    pub curve: GenusTwoCurve,
    pub vars: Vars,
    pub k2: MPoly,
    pub k1: MPoly,
    pub k0: MPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeLabel {
    P0,
    /// 1-based root indices, `i < j`.
    Pair(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TropeLabel {
    Single(usize),
    /// `{1, j, k}`; the complement labels the same plane.
    Triple([usize; 3]),
}

impl NodeLabel {
    /// Even subset of {1..6}.
    pub fn subset(&self) -> u8 {
        match *self {
            NodeLabel::P0 => 0,
            NodeLabel::Pair(i, j) => bit(i) | bit(j),
        }
    }

    pub fn name(&self) -> String {
        match self {
            NodeLabel::P0 => "p0".into(),
            NodeLabel::Pair(i, j) => format!("p{i}{j}"),
        }
    }
}

impl TropeLabel {
    /// Odd subset of {1..6}.
    pub fn subset(&self) -> u8 {
        match self {
            TropeLabel::Single(i) => bit(*i),
            TropeLabel::Triple(s) => s.iter().fold(0, |a, &i| a | bit(i)),
        }
    }

    pub fn complement(&self) -> Option<[usize; 3]> {
        match self {
            TropeLabel::Single(_) => None,
            TropeLabel::Triple(s) => {
                let c: Vec<usize> = (1..=6).filter(|k| !s.contains(k)).collect();
                Some([c[0], c[1], c[2]])
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            TropeLabel::Single(i) => format!("T{i}"),
            TropeLabel::Triple([a, b, c]) => format!("T{a}{b}{c}"),
        }
    }
}

fn bit(i: usize) -> u8 {
    1 << (i - 1)
}

#[derive(Clone, Debug)]
pub struct Node {
    pub label: NodeLabel,
    pub coords: [Rational; 4],
}

#[derive(Clone, Debug)]
pub struct Trope {
    pub label: TropeLabel,
    /// Linear form in `z1..z4`.
    pub form: MPoly,
}

pub fn kummer_vars() -> Vars {
    vars(&["z1", "z2", "z3", "z4"])
}

/// The quartic's three coefficient polynomials in `z1, z2, z3`.
pub fn build_kummer(curve: &GenusTwoCurve) -> KummerQuartic {
    let v = kummer_vars();
    let f: [Rational; 7] = curve.coeffs7();
    let z = |a: u32, b: u32, c: u32| -> Vec<u32> { vec![a, b, c, 0] };
    let term = |c: Rational, e: Vec<u32>| MPoly::monomial(c, e, &v);
    let k2 = &term(int(1), z(0, 2, 0)) - &term(int(4), z(1, 0, 1));
    let k1_terms: [(i64, usize, Vec<u32>); 7] = [
        (-4, 0, z(3, 0, 0)),
        (-2, 1, z(2, 1, 0)),
        (-4, 2, z(2, 0, 1)),
        (-2, 3, z(1, 1, 1)),
        (-4, 4, z(1, 0, 2)),
        (-2, 5, z(0, 1, 2)),
        (-4, 6, z(0, 0, 3)),
    ];
    let mut k1 = MPoly::zero(&v);
    for (c, i, e) in k1_terms {
        k1 = &k1 + &term(int(c) * &f[i], e);
    }
    let k0_terms: [(i64, usize, usize, Vec<u32>); 23] = [
        (-4, 0, 2, z(4, 0, 0)),
        (1, 1, 1, z(4, 0, 0)),
        (-4, 0, 3, z(3, 1, 0)),
        (-2, 1, 3, z(3, 0, 1)),
        (-4, 0, 4, z(2, 2, 0)),
        (4, 0, 5, z(2, 1, 1)),
        (-4, 1, 4, z(2, 1, 1)),
        (-4, 0, 6, z(2, 0, 2)),
        (2, 1, 5, z(2, 0, 2)),
        (-4, 2, 4, z(2, 0, 2)),
        (1, 3, 3, z(2, 0, 2)),
        (-4, 0, 5, z(1, 3, 0)),
        (8, 0, 6, z(1, 2, 1)),
        (-4, 1, 5, z(1, 2, 1)),
        (4, 1, 6, z(1, 1, 2)),
        (-4, 2, 5, z(1, 1, 2)),
        (-2, 3, 5, z(1, 0, 3)),
        (-4, 0, 6, z(0, 4, 0)),
        (-4, 1, 6, z(0, 3, 1)),
        (-4, 2, 6, z(0, 2, 2)),
        (-4, 3, 6, z(0, 1, 3)),
        (-4, 4, 6, z(0, 0, 4)),
        (1, 5, 5, z(0, 0, 4)),
    ];
    let mut k0 = MPoly::zero(&v);
    for (c, i, j, e) in k0_terms {
        k0 = &k0 + &term(int(c) * &f[i] * &f[j], e);
    }
    KummerQuartic { curve: curve.clone(), vars: v, k2, k1, k0 }
}

impl KummerQuartic {
    pub fn z(&self, i: usize) -> MPoly {
        MPoly::gen(i, &self.vars)
    }

    /// The full quartic in `z1..z4`.
    pub fn quartic(&self) -> MPoly {
        let z4 = self.z(3);
        &(&(&self.k2 * &z4.pow(2)) + &(&self.k1 * &z4)) + &self.k0
    }

    /// `K1^2/4 - K0 K2`, the branch quantity of the projection from `p0`.
    pub fn branch_form(&self) -> MPoly {
        &(&self.k1 * &self.k1).scale(&(Rational::ONE / int(4))) - &(&self.k0 * &self.k2)
    }

    /// Exchange of the two sheets over `(z1 : z2 : z3)`.
    pub fn projection_involution(&self, p: &[Rational; 4]) -> Result<[Rational; 4]> {
        if !is_zero(&self.quartic().eval(p)) {
            return Err(Error::NotOnSurface);
        }
        let k2 = self.k2.eval(p);
        if is_zero(&k2) {
            return Err(Error::BranchLocus);
        }
        let k1 = self.k1.eval(p);
        let z4 = -p[3].clone() - k1 / k2;
        Ok([p[0].clone(), p[1].clone(), p[2].clone(), z4])
    }

    /// Numeric version for approximate points.
    pub fn projection_involution_numeric(&self, p: &[BigComplex; 4]) -> Result<[BigComplex; 4]> {
        let k2 = self.k2.eval_complex(p);
        if k2.is_zero() {
            return Err(Error::BranchLocus);
        }
        let k1 = self.k1.eval_complex(p);
        let z4 = &(-&p[3]) - &(&k1 / &k2);
        Ok([p[0].clone(), p[1].clone(), p[2].clone(), z4])
    }

    /// A point over `(z1 : z2 : z3)` with `z4` from the quadratic formula (`sheet` picks the sign).
    pub fn lift_numeric(&self, z: &[Rational; 3], sheet: bool, bits: usize) -> Result<[BigComplex; 4]> {
        let pt = [z[0].clone(), z[1].clone(), z[2].clone(), int(0)];
        let k2 = self.k2.eval(&pt);
        if is_zero(&k2) {
            return Err(Error::BranchLocus);
        }
        let k1 = self.k1.eval(&pt);
        let k0 = self.k0.eval(&pt);
        let disc = BigComplex::from_rational(&(&k1 * &k1 - int(4) * &k0 * &k2), bits).sqrt();
        let disc = if sheet { disc } else { -&disc };
        let num = &BigComplex::from_rational(&-k1, bits) + &disc;
        let z4 = &num / &BigComplex::from_rational(&(int(2) * k2), bits);
        Ok([
            BigComplex::from_rational(&z[0], bits),
            BigComplex::from_rational(&z[1], bits),
            BigComplex::from_rational(&z[2], bits),
            z4,
        ])
    }

    /// `|K(p)|` relative to the size of its largest monomial contribution, as log10.
    pub fn log10_relative_residual(&self, p: &[BigComplex; 4]) -> f64 {
        let z4 = &p[3];
        let a = &self.k2.eval_complex(p) * &(z4 * z4);
        let b = &self.k1.eval_complex(p) * z4;
        let c = self.k0.eval_complex(p);
        let total = &(&a + &b) + &c;
        let scale = a.log10_abs().max(b.log10_abs()).max(c.log10_abs());
        total.log10_abs() - scale
    }
}

/// Nodes and tropes for a curve with six distinct rational roots.
pub fn nodes_and_tropes(curve: &GenusTwoCurve) -> Result<(Vec<Node>, Vec<Trope>)> {
    if curve.degree() != 6 {
        return Err(Error::InvalidDegree(curve.degree()));
    }
    if curve.f().discriminant()? == Rational::ZERO {
        return Err(Error::RepeatedRoots);
    }
    let roots = curve.rational_roots().ok_or_else(|| Error::ShapeMismatch("sextic does not split over Q".into()))?;
    for i in 0..6 {
        for j in i + 1..6 {
            if roots[i] == roots[j] {
                return Err(Error::RepeatedRoots);
            }
        }
    }
    let th = |i: usize| roots[i - 1].clone();
    let f = curve.f();
    let f6 = f.lc();
    let v = kummer_vars();
    let mut nodes = vec![Node { label: NodeLabel::P0, coords: [int(0), int(0), int(0), int(1)] }];
    for i in 1..=6 {
        for j in i + 1..=6 {
            let quad = UPoly::from_roots(&int(1), &[th(i), th(j)], "x");
            let h = f.exact_div(&quad).expect("roots divide f");
            let p = th(i) * th(j);
            let beta0 = -h.coeff(0) - h.coeff(2) * &p - h.coeff(4) * &p * &p;
            nodes.push(Node { label: NodeLabel::Pair(i, j), coords: [int(1), th(i) + th(j), p, beta0] });
        }
    }
    let zi = |k: usize| MPoly::gen(k, &v);
    let mut tropes = Vec::new();
    for i in 1..=6 {
        let t = th(i);
        let form = &(&zi(0).scale(&(&t * &t)) - &zi(1).scale(&t)) + &zi(2);
        tropes.push(Trope { label: TropeLabel::Single(i), form });
    }
    for j in 2..=6 {
        for k in j + 1..=6 {
            let s = [1, j, k];
            let comp: Vec<usize> = (1..=6).filter(|x| !s.contains(x)).collect();
            let g = UPoly::from_roots(&int(1), &s.iter().map(|&a| th(a)).collect::<Vec<_>>(), "x");
            let h = UPoly::from_roots(&int(1), &comp.iter().map(|&a| th(a)).collect::<Vec<_>>(), "x");
            let c1 = &f6 * (g.coeff(2) * h.coeff(0) + g.coeff(0) * h.coeff(2));
            let c2 = &f6 * (g.coeff(0) + h.coeff(0));
            let c3 = &f6 * (g.coeff(1) + h.coeff(1));
            let form = &(&(&zi(0).scale(&c1) + &zi(1).scale(&c2)) + &zi(2).scale(&c3)) + &zi(3);
            tropes.push(Trope { label: TropeLabel::Triple(s), form });
        }
    }
    Ok((nodes, tropes))
}

/// Combinatorial incidence: an even and an odd subset meet iff their symmetric
/// difference has size 1 or 5.
pub fn incidence_rule(node: &NodeLabel, trope: &TropeLabel) -> bool {
    let d = (node.subset() ^ trope.subset()).count_ones();
    d == 1 || d == 5
}

/// The trope dual to a node under `S -> S xor {1}`.
pub fn dual_trope(node: &NodeLabel) -> TropeLabel {
    let s = node.subset() ^ bit(1);
    let members: Vec<usize> = (1..=6).filter(|&i| s & bit(i) != 0).collect();
    match members.len() {
        1 => TropeLabel::Single(members[0]),
        3 => TropeLabel::Triple([members[0], members[1], members[2]]),
        _ => unreachable!("odd subsets here have size 1 or 3"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigurationReport {
    pub nodes_singular: Vec<CheckItem>,
    pub tropes_tangent: Vec<CheckItem>,
    pub incidence: Vec<Vec<u8>>,
    pub node_labels: Vec<String>,
    pub trope_labels: Vec<String>,
    pub row_sums: Vec<usize>,
    pub column_sums: Vec<usize>,
    pub incidence_matches_rule: bool,
    pub duality_symmetric: bool,
    /// `c` with `K1^2/4 - K0 K2 = c * T1...T6`, if such a scalar exists.
    pub trope_product_scalar: Option<String>,
    pub completing_square: bool,
}

impl ConfigurationReport {
    pub fn passed(&self) -> bool {
        self.nodes_singular.iter().all(|c| c.passed)
            && self.tropes_tangent.iter().all(|c| c.passed)
            && self.row_sums.iter().all(|&s| s == 6)
            && self.column_sums.iter().all(|&s| s == 6)
            && self.incidence_matches_rule
            && self.duality_symmetric
            && self.trope_product_scalar.is_some()
            && self.completing_square
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .nodes_singular
            .iter()
            .chain(&self.tropes_tangent)
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        if !self.row_sums.iter().chain(&self.column_sums).all(|&s| s == 6) {
            out.push("incidence sums differ from 6".into());
        }
        if !self.incidence_matches_rule {
            out.push("incidence differs from the subset rule".into());
        }
        if !self.duality_symmetric {
            out.push("incidence not symmetric under duality".into());
        }
        if self.trope_product_scalar.is_none() {
            out.push("branch form is not a multiple of the trope product".into());
        }
        if !self.completing_square {
            out.push("completing-the-square identity failed".into());
        }
        out
    }
}

/// `K` restricted to the plane `form = 0`, eliminating the last variable the form involves.
pub fn restrict_to_plane(k: &MPoly, form: &MPoly) -> MPoly {
    let v = k.vars().clone();
    let idx = (0..4).rev().find(|&i| form.degree_in(i) > 0).expect("nonzero linear form");
    let coeff = form.partial(idx).as_constant().expect("linear form");
    let rest = &form.eval_var(idx, &int(0));
    let solved = rest.scale(&(-(Rational::ONE / coeff)));
    let bindings: Vec<MPoly> = (0..4).map(|i| if i == idx { solved.clone() } else { MPoly::gen(i, &v) }).collect();
    k.substitute(&bindings).expect("same arity")
}

/// Scalar `c` with `p = c q`, if one exists.
pub fn proportionality(p: &MPoly, q: &MPoly) -> Option<Rational> {
    let (e, c) = q.leading_term()?;
    let ratio = p.coeff(e) / c;
    (q.scale(&ratio) == *p).then_some(ratio)
}

pub fn verify_configuration(q: &KummerQuartic, nodes: &[Node], tropes: &[Trope]) -> ConfigurationReport {
    let k = q.quartic();
    let grads: Vec<MPoly> = (0..4).map(|i| k.partial(i)).collect();
    let nodes_singular: Vec<CheckItem> = nodes
        .par_iter()
        .map(|n| {
            let mut bad = Vec::new();
            let kv = k.eval(&n.coords);
            if !is_zero(&kv) {
                bad.push(format!("K = {}", qfmt(&kv)));
            }
            for (i, g) in grads.iter().enumerate() {
                let gv = g.eval(&n.coords);
                if !is_zero(&gv) {
                    bad.push(format!("dK/dz{} = {}", i + 1, qfmt(&gv)));
                }
            }
            CheckItem {
                name: n.label.name(),
                passed: bad.is_empty(),
                detail: if bad.is_empty() { "singular".into() } else { bad.join(", ") },
            }
        })
        .collect();
    let tropes_tangent: Vec<CheckItem> = tropes
        .par_iter()
        .map(|t| {
            let r = restrict_to_plane(&k, &t.form);
            match r.square_root_up_to_scalar() {
                Some((c, s)) => {
                    CheckItem { name: t.label.name(), passed: true, detail: format!("{} * ({})^2", qfmt(&c), s) }
                }
                None => {
                    CheckItem { name: t.label.name(), passed: false, detail: format!("restriction not a square: {r}") }
                }
            }
        })
        .collect();
    let incidence: Vec<Vec<u8>> =
        nodes.iter().map(|n| tropes.iter().map(|t| u8::from(is_zero(&t.form.eval(&n.coords)))).collect()).collect();
    let row_sums = incidence.iter().map(|r| r.iter().map(|&x| x as usize).sum()).collect();
    let column_sums = (0..tropes.len()).map(|j| incidence.iter().map(|r| r[j] as usize).sum()).collect();
    let incidence_matches_rule = nodes.iter().enumerate().all(|(a, n)| {
        tropes.iter().enumerate().all(|(b, t)| (incidence[a][b] == 1) == incidence_rule(&n.label, &t.label))
    });
    let trope_index = |l: &TropeLabel| tropes.iter().position(|t| &t.label == l);
    let duality_symmetric = nodes.iter().enumerate().all(|(a, na)| {
        nodes.iter().enumerate().all(|(b, nb)| {
            match (trope_index(&dual_trope(&nb.label)), trope_index(&dual_trope(&na.label))) {
                (Some(tb), Some(ta)) => incidence[a][tb] == incidence[b][ta],
                _ => false,
            }
        })
    });
    let singles: Vec<&Trope> = tropes.iter().filter(|t| matches!(t.label, TropeLabel::Single(_))).collect();
    let product = singles.iter().fold(MPoly::one(&q.vars), |acc, t| &acc * &t.form);
    let branch = q.branch_form();
    let trope_product_scalar = proportionality(&branch, &product).map(|c| qfmt(&c));
    let z4 = q.z(3);
    let half = Rational::ONE / int(2);
    let completed = &(&q.k2 * &z4) + &q.k1.scale(&half);
    let completing_square = &(&completed * &completed) - &branch == &q.k2 * &k;
    ConfigurationReport {
        nodes_singular,
        tropes_tangent,
        incidence,
        node_labels: nodes.iter().map(|n| n.label.name()).collect(),
        trope_labels: tropes.iter().map(|t| t.label.name()).collect(),
        row_sums,
        column_sums,
        incidence_matches_rule,
        duality_symmetric,
        trope_product_scalar,
        completing_square,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn reference() -> GenusTwoCurve {
        GenusTwoCurve::from_roots(int(1), (0..6).map(int).collect()).unwrap()
    }

    #[test]
    fn x6_plus_1_k1() {
        let c = GenusTwoCurve::from_coeffs(vec![int(1), int(0), int(0), int(0), int(0), int(0), int(1)]).unwrap();
        let k = build_kummer(&c);
        let v = &k.vars;
        let expect = &MPoly::monomial(int(-4), vec![3, 0, 0, 0], v) - &MPoly::monomial(int(4), vec![0, 0, 3, 0], v);
        assert_eq!(k.k1, expect);
    }

    #[test]
    fn k2_pattern() {
        let k = build_kummer(&reference());
        let v = &k.vars;
        let expect = &MPoly::monomial(int(1), vec![0, 2, 0, 0], v) - &MPoly::monomial(int(4), vec![1, 0, 1, 0], v);
        assert_eq!(k.k2, expect);
        assert!(k.quartic().is_homogeneous());
        assert_eq!(k.quartic().total_degree(), 4);
    }

    #[test]
    fn generic_term_counts() {
        // all-nonzero coefficients expose every displayed monomial
        let c = GenusTwoCurve::from_coeffs((1..=7).map(|i| int(i * i + 1)).collect()).unwrap();
        let k = build_kummer(&c);
        assert_eq!(k.k1.nterms(), 7);
        // 23 products collapse onto 15 distinct monomials of degree 4 in z1, z2, z3
        assert_eq!(k.k0.nterms(), 15);
    }

    #[test]
    fn reference_nodes_and_first_trope() {
        let c = reference();
        let (nodes, tropes) = nodes_and_tropes(&c).unwrap();
        assert_eq!(nodes.len(), 16);
        assert_eq!(tropes.len(), 16);
        assert_eq!(nodes[0].coords, [int(0), int(0), int(0), int(1)]);
        // p12 for theta = 0, 1: h = f / (x (x - 1)) = (x-2)(x-3)(x-4)(x-5), beta0 = -h0 = -120
        let p12 = &nodes[1];
        assert_eq!(p12.label, NodeLabel::Pair(1, 2));
        assert_eq!(p12.coords, [int(1), int(1), int(0), int(-120)]);
        let v = kummer_vars();
        assert_eq!(tropes[0].form, MPoly::gen(2, &v));
    }

    #[test]
    fn reference_configuration() {
        let c = reference();
        let q = build_kummer(&c);
        let (nodes, tropes) = nodes_and_tropes(&c).unwrap();
        let rep = verify_configuration(&q, &nodes, &tropes);
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.trope_product_scalar.as_deref(), Some("4"));
    }

    #[test]
    fn non_monic_scalar_is_measured() {
        let f6 = rat(-3, 2);
        let c =
            GenusTwoCurve::from_roots(f6.clone(), vec![int(-2), int(0), rat(1, 3), int(1), int(4), int(7)]).unwrap();
        let q = build_kummer(&c);
        let (nodes, tropes) = nodes_and_tropes(&c).unwrap();
        let rep = verify_configuration(&q, &nodes, &tropes);
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.trope_product_scalar, Some(qfmt(&(int(4) * &f6 * &f6))));
    }

    #[test]
    fn repeated_roots_rejected() {
        let c = GenusTwoCurve::from_roots(int(1), vec![int(0), int(0), int(1), int(2), int(3), int(4)]).unwrap();
        assert!(matches!(nodes_and_tropes(&c), Err(Error::RepeatedRoots)));
    }

    #[test]
    fn involution_on_rational_points() {
        let c = reference();
        let q = build_kummer(&c);
        // nodes other than p0 are rational points of K with K2 possibly nonzero
        let (nodes, _) = nodes_and_tropes(&c).unwrap();
        for n in nodes.iter().skip(1) {
            match q.projection_involution(&n.coords) {
                Ok(img) => {
                    assert!(is_zero(&q.quartic().eval(&img)));
                    assert_eq!(q.projection_involution(&img).unwrap(), n.coords);
                }
                Err(e) => assert!(matches!(e, Error::BranchLocus)),
            }
        }
        assert!(matches!(q.projection_involution(&[int(1), int(2), int(3), int(4)]), Err(Error::NotOnSurface)));
    }

    #[test]
    fn fixed_points_are_branch_points() {
        let c = reference();
        let q = build_kummer(&c);
        let pt = [rat(1, 2), int(3), int(1), int(0)];
        let k1 = q.k1.eval(&pt);
        let k2 = q.k2.eval(&pt);
        // z4 = -K1 / (2 K2) is fixed exactly when the branch form vanishes
        let z4 = -&k1 / (int(2) * &k2);
        let fixed = -z4.clone() - &k1 / &k2 == z4;
        assert!(fixed);
        let on_k = is_zero(&q.quartic().eval(&[pt[0].clone(), pt[1].clone(), pt[2].clone(), z4]));
        assert_eq!(on_k, is_zero(&q.branch_form().eval(&pt)));
    }

    #[test]
    fn numeric_involution_residual() {
        let c = reference();
        let q = build_kummer(&c);
        let bits = crate::algebra::numeric::digits_to_bits(60);
        let p = q.lift_numeric(&[rat(3, 7), rat(-5, 2), int(1)], true, bits).unwrap();
        assert!(q.log10_relative_residual(&p) < -40.0);
        let img = q.projection_involution_numeric(&p).unwrap();
        assert!(q.log10_relative_residual(&img) < -40.0);
        let back = q.projection_involution_numeric(&img).unwrap();
        assert!(crate::algebra::numeric::log10_relative_difference(&back[3], &p[3]) < -40.0);
    }
}
