//! The coordinates `x, y, t` of `Y` as functions on the Kummer quartic.
//!
//! Plane curves through the images `q_ij = (1 : th_i + th_j : th_i th_j)` of the nodes are
//! found as exact nullspaces. Sampled points then fix the remaining scalars.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{surfaces_from_ic, SurfacePair};
use crate::algebra::numeric::{digits_to_bits, BigComplex};
use crate::algebra::rational::{fmt as qfmt, int, is_zero, rat, Rational};
use crate::algebra::{vars, MPoly, QMatrix, UPoly, Vars};
use crate::error::{Error, Result};
use crate::invariants::GenusTwoCurve;
use crate::kummer::{build_kummer, KummerQuartic};
use crate::report::CheckItem;

#[derive(Clone, Copy, Debug)]
pub struct KummerSideOptions {
    /// Total sample points; half fit the scalars, half are held out.
    pub samples: usize,
    pub digits: usize,
    pub seed: u64,
    pub tolerance_log10: f64,
}

impl Default for KummerSideOptions {
    fn default() -> Self {
        KummerSideOptions { samples: 100, digits: 80, seed: 0x0c0f_fee5, tolerance_log10: -30.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneCurve {
    pub name: String,
    pub degree: u32,
    /// `(node, multiplicity)`.
    pub conditions: Vec<(String, u32)>,
    pub equations: usize,
    pub rank: usize,
    pub dimension: usize,
    pub polynomial: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct KummerSideReport {
    pub curves: Vec<PlaneCurve>,
    pub pencil_dimension: usize,
    pub x_degrees: (u32, u32),
    pub y_degrees: (u32, u32),
    /// `kappa` and the coefficients of `A(u)`, `B(u)` in `Y0^2 = kappa X0^3 + A(u) X0^2 + B(u) X0`.
    pub kappa: String,
    pub a_coeffs: Vec<String>,
    pub b_coeffs: Vec<String>,
    pub mu: String,
    pub sigma: String,
    pub lambda_x: String,
    pub lambda_y_squared: String,
    /// `t = (alpha s + beta s1) / (gamma s + delta s1)`.
    pub mobius: [String; 4],
    pub fit_samples: usize,
    pub held_out_samples: usize,
    pub digits: usize,
    pub max_log10_held_out_residual: f64,
    pub checks: Vec<CheckItem>,
}

impl KummerSideReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn plane_vars() -> Vars {
    vars(&["z1", "z2", "z3"])
}

fn monomials(deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in (0..=deg).rev() {
        for b in (0..=deg - a).rev() {
            out.push(vec![a, b, deg - a - b]);
        }
    }
    out
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64)
}

/// Forms of degree `deg` vanishing to the given orders at the given points.
fn plane_system(deg: u32, conds: &[([Rational; 3], u32)]) -> (usize, usize, Vec<MPoly>) {
    let mons = monomials(deg);
    let mut rows = Vec::new();
    for (pt, m) in conds {
        for o in 0..*m {
            for a in 0..=o {
                for b in 0..=o - a {
                    let c = o - a - b;
                    let d = [a, b, c];
                    let row: Vec<Rational> = mons
                        .iter()
                        .map(|e| {
                            if (0..3).any(|i| e[i] < d[i]) {
                                return Rational::ZERO;
                            }
                            let mut v = int((0..3).map(|i| falling(e[i], d[i])).product());
                            for i in 0..3 {
                                v *= crate::algebra::rational::pow(&pt[i], (e[i] - d[i]) as usize);
                            }
                            v
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
    }
    let v = plane_vars();
    let neq = rows.len();
    let m = QMatrix::from_rows(rows);
    let rank = m.rank();
    let ns = m.nullspace();
    let polys = ns
        .into_iter()
        .map(|c| {
            let p = MPoly::from_terms(&v, mons.iter().cloned().zip(c));
            let lc = p.leading_term().map(|(_, c)| c.clone()).unwrap_or(int(1));
            p.scale(&(Rational::ONE / lc))
        })
        .collect();
    (neq, rank, polys)
}

struct Plane {
    q: BTreeMap<(usize, usize), [Rational; 3]>,
}

impl Plane {
    fn node(&self, i: usize, j: usize) -> ([Rational; 3], String) {
        (self.q[&(i.min(j), i.max(j))].clone(), format!("q{}{}", i.min(j), i.max(j)))
    }

    fn curve(
        &self,
        name: &str,
        deg: u32,
        shape: &[(u32, &[(usize, usize)])],
        expect: usize,
    ) -> Result<(PlaneCurve, Vec<MPoly>)> {
        let mut conds = Vec::new();
        let mut labels = Vec::new();
        for (m, nodes) in shape {
            for &(i, j) in nodes.iter() {
                let (p, l) = self.node(i, j);
                conds.push((p, *m));
                labels.push((l, *m));
            }
        }
        let (neq, rank, polys) = plane_system(deg, &conds);
        let dimension = polys.len();
        if dimension != expect {
            return Err(Error::UnexpectedDimension { what: format!("{name} (degree {deg})"), rank, dimension });
        }
        let polynomial = if dimension == 1 { polys[0].to_string() } else { format!("pencil of dimension {dimension}") };
        Ok((
            PlaneCurve {
                name: name.into(),
                degree: deg,
                conditions: labels,
                equations: neq,
                rank,
                dimension,
                polynomial,
            },
            polys,
        ))
    }
}

fn proportional(p: &MPoly, q: &MPoly) -> bool {
    crate::kummer::proportionality(p, q).is_some()
}

/// `Some((a, b))` with `s = a p + b q`.
fn in_span(s: &MPoly, p: &MPoly, q: &MPoly) -> Option<(Rational, Rational)> {
    let mut keys: Vec<&Vec<u32>> =
        s.terms().map(|(e, _)| e).chain(p.terms().map(|(e, _)| e)).chain(q.terms().map(|(e, _)| e)).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rational>> = keys.iter().map(|e| vec![p.coeff(e), q.coeff(e), -s.coeff(e)]).collect();
    let ns = QMatrix::from_rows(rows).nullspace();
    let v = ns.into_iter().find(|v| !is_zero(&v[2]))?;
    Some((&v[0] / &v[2], &v[1] / &v[2]))
}

struct Sample {
    z: [Rational; 3],
    x0: Rational,
    u: Rational,
    y0_sq: Rational,
    /// `E / (T1^5 T2^3 T4^2 T6^4 q1^2)`, multiplied by `K2 z4 + K1/2` to give `Y0`.
    y0_factor: Rational,
}

pub fn kummer_side_verification(curve: &GenusTwoCurve, opts: &KummerSideOptions) -> Result<KummerSideReport> {
    let ic = curve.invariants();
    let pair: SurfacePair = surfaces_from_ic(&ic)?;
    let roots = curve.rational_roots().ok_or_else(|| Error::ShapeMismatch("sextic does not split over Q".into()))?;
    if curve.degree() != 6 || curve.f().discriminant()? == Rational::ZERO {
        return Err(Error::RepeatedRoots);
    }
    let th = |i: usize| roots[i - 1].clone();
    let mut q = BTreeMap::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            q.insert((i, j), [int(1), th(i) + th(j), th(i) * th(j)]);
        }
    }
    let plane = Plane { q };
    let v = plane_vars();
    let z = |i| MPoly::gen(i, &v);
    let trope = |i: usize| {
        let t = th(i);
        &(&z(0).scale(&(&t * &t)) - &z(1).scale(&t)) + &z(2)
    };

    let mut curves = Vec::new();
    let mut single = |name: &str, deg: u32, shape: &[(u32, &[(usize, usize)])]| -> Result<MPoly> {
        let (c, p) = plane.curve(name, deg, shape, 1)?;
        curves.push(c);
        Ok(p[0].clone())
    };
    let e1 = single("e1", 1, &[(1, &[(1, 2), (4, 6)])])?;
    let e2 = single("e2", 2, &[(1, &[(1, 2), (1, 3), (2, 4), (4, 6), (5, 6)])])?;
    let e3 = single("e3", 3, &[(2, &[(1, 2)]), (1, &[(1, 3), (2, 4), (3, 6), (4, 5), (4, 6), (5, 6)])])?;
    let e4 = single("e4", 4, &[(2, &[(1, 2), (1, 3), (4, 6)]), (1, &[(2, 4), (2, 5), (3, 6), (4, 5), (5, 6)])])?;
    let e5 = single(
        "e5",
        5,
        &[(3, &[(1, 2)]), (2, &[(1, 3), (4, 6), (5, 6)]), (1, &[(2, 4), (2, 5), (3, 4), (3, 6), (4, 5)])],
    )?;
    let q1 = single("q1", 2, &[(1, &[(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])])?;
    let (pen_info, pen) = plane.curve(
        "pencil",
        5,
        &[(3, &[(1, 2)]), (2, &[(1, 3), (4, 6), (5, 6)]), (1, &[(2, 4), (2, 5), (3, 6), (4, 5)])],
        2,
    )?;
    let pencil_dimension = pen_info.dimension;
    curves.push(pen_info);

    let mut checks = Vec::new();
    let s1 = &(&(&q1 * &trope(1)) * &trope(2)) * &trope(6);
    let s1_span = in_span(&s1, &pen[0], &pen[1]);
    checks.push(CheckItem::new(
        "s1 = q1 T1 T2 T6 lies in the pencil",
        s1_span.is_some(),
        s1_span.as_ref().map_or("not in span".into(), |(a, b)| format!("s1 = ({}) P0 + ({}) P1", qfmt(a), qfmt(b))),
    ));
    let s = if proportional(&pen[0], &s1) { pen[1].clone() } else { pen[0].clone() };

    let e_all = [&e1, &e2, &e3, &e4, &e5];
    let e_deg: u32 = e_all.iter().map(|p| p.total_degree()).sum();
    let x_degrees = (e_deg + 1, 3 * s1.total_degree() + 1);
    let y_den_parts: [(MPoly, u32); 5] = [(trope(1), 5), (trope(2), 3), (trope(4), 2), (trope(6), 4), (q1.clone(), 2)];
    let y_den_deg: u32 = y_den_parts.iter().map(|(p, k)| p.total_degree() * k).sum();
    let y_degrees = (e_deg + 3, y_den_deg);
    checks.push(CheckItem::new(
        "degrees",
        x_degrees == (16, 16) && y_degrees == (18, 18),
        format!("x: {}/{}, y: {}/{}", x_degrees.0, x_degrees.1, y_degrees.0, y_degrees.1),
    ));

    let k: KummerQuartic = build_kummer(curve);
    let branch = k.branch_form();

    // sampling
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut samples = Vec::with_capacity(opts.samples);
    let mut attempts = 0;
    while samples.len() < opts.samples {
        attempts += 1;
        if attempts > 100 * opts.samples + 1000 {
            return Err(Error::ShapeMismatch("could not find enough admissible sample points".into()));
        }
        let zz = [
            rat(rng.random_range(-20..=20), rng.random_range(1..=20)),
            rat(rng.random_range(-20..=20), rng.random_range(1..=20)),
            int(1),
        ];
        let ev = |p: &MPoly| p.eval(&zz);
        let full = [zz[0].clone(), zz[1].clone(), zz[2].clone(), int(0)];
        let s1v = ev(&s1);
        let t4 = ev(&trope(4));
        let k2 = k.k2.eval(&full);
        let ev_e: Rational = e_all.iter().fold(int(1), |acc, p| acc * ev(p));
        if is_zero(&s1v) || is_zero(&t4) || is_zero(&k2) || is_zero(&ev_e) {
            continue;
        }
        let x0 = &ev_e * ev(&trope(5)) / (s1v.clone() * &s1v * &s1v * &t4);
        if is_zero(&x0) {
            continue;
        }
        let u = ev(&s) / &s1v;
        let den: Rational =
            y_den_parts.iter().fold(int(1), |acc, (p, e)| acc * crate::algebra::rational::pow(&ev(p), *e as usize));
        let y0_factor = &ev_e / &den;
        let y0_sq = &y0_factor * &y0_factor * branch.eval(&full);
        samples.push(Sample { z: zz, x0, u, y0_sq, y0_factor });
    }
    let half = samples.len() / 2;
    let (fit, held) = samples.split_at(half);

    // Y0^2 = kappa X0^3 + A(u) X0^2 + B(u) X0 with deg A <= 4, deg B <= 8
    let rows: Vec<Vec<Rational>> = fit
        .iter()
        .map(|s| {
            let mut r = vec![s.x0.clone() * &s.x0 * &s.x0];
            let x2 = &s.x0 * &s.x0;
            let mut up = int(1);
            for _ in 0..5 {
                r.push(&up * &x2);
                up *= &s.u;
            }
            let mut up = int(1);
            for _ in 0..9 {
                r.push(&up * &s.x0);
                up *= &s.u;
            }
            r.push(-s.y0_sq.clone());
            r
        })
        .collect();
    let m = QMatrix::from_rows(rows);
    let ns = m.nullspace();
    if ns.len() != 1 || is_zero(&ns[0][15]) {
        return Err(Error::UnexpectedDimension { what: "Weierstrass fit".into(), rank: m.rank(), dimension: ns.len() });
    }
    let sol: Vec<Rational> = ns[0].iter().map(|c| c / &ns[0][15]).collect();
    let kappa = sol[0].clone();
    let a_u = UPoly::new(sol[1..6].to_vec(), "u");
    let b_u = UPoly::new(sol[6..15].to_vec(), "u");
    checks.push(CheckItem::new(
        "fit degrees",
        a_u.deg() == 3 && b_u.deg() == 6,
        format!("deg A = {}, deg B = {}", a_u.deg(), b_u.deg()),
    ));
    if a_u.deg() != 3 || b_u.deg() != 6 {
        return Err(Error::ShapeMismatch(format!("fitted A, B have degrees {}, {}", a_u.deg(), b_u.deg())));
    }

    // normalise: u = w + sigma kills the quadratic term; t = mu w
    let a3 = a_u.coeff(3);
    let sigma = -a_u.coeff(2) / (int(3) * &a3);
    let a_w = a_u.shift(&sigma).with_var("w");
    let b_w = b_u.shift(&sigma).with_var("w");
    let b6 = b_w.coeff(6);
    let alpha1 = a_w.coeff(1) / &a3;
    let alpha0 = a_w.coeff(0) / &a3;
    let c1 = -&ic.i4 / int(12);
    let c0 = (&ic.i2 * &ic.i4 - int(3) * &ic.i6) / int(108);
    if is_zero(&alpha1) || is_zero(&alpha0) {
        return Err(Error::ShapeMismatch("cubic normalisation degenerates".into()));
    }
    let mu2 = &c1 / &alpha1;
    let mu3 = &c0 / &alpha0;
    let mu = &mu3 / &mu2;
    checks.push(CheckItem::new("scaling consistent", &mu * &mu == mu2, format!("mu = {}", qfmt(&mu))));
    checks.push(CheckItem::new(
        "A3^2 = 4 kappa B6",
        &a3 * &a3 == int(4) * &kappa * &b6,
        format!("A3 = {}, kappa = {}, B6 = {}", qfmt(&a3), qfmt(&kappa), qfmt(&b6)),
    ));
    let qw = UPoly::new(vec![alpha0.clone(), alpha1.clone(), int(0), int(1)], "w");
    let r = &b_w.scale(&(Rational::ONE / &b6)) - &qw.pow(2);
    let beta1 = &ic.i10 / crate::algebra::rational::pow(&mu, 5);
    let beta0 = -(&ic.i10 * &ic.i2) / (int(24) * crate::algebra::rational::pow(&mu, 6));
    let r_ok = r.deg() <= 1 && r.coeff(1) == beta1 && r.coeff(0) == beta0;
    checks.push(CheckItem::new("linear remainder", r_ok, format!("B/B6 - q^2 = {r}")));

    let lambda_x = -(&a3 * &crate::algebra::rational::pow(&mu, 3)) / (int(2) * &b6);
    let lambda_y_sq = &lambda_x * crate::algebra::rational::pow(&mu, 6) / &b6;
    let t_of = |u: &Rational| &mu * (u - &sigma);

    // exact held-out check: lambda_y^2 Y0^2 = x^3 + a2(t) x^2 + a4(t) x
    let exact_ok = held.iter().all(|s| {
        let t = t_of(&s.u);
        let x = &lambda_x * &s.x0;
        let lhs = &lambda_y_sq * &s.y0_sq;
        let rhs = &x * &x * &x + pair.y.a2.eval(&t) * &x * &x + pair.y.a4.eval(&t) * &x;
        lhs == rhs
    });
    checks.push(CheckItem::new("held-out exact", exact_ok, format!("{} held-out points", held.len())));

    // numeric held-out check with z4 from the quadratic formula
    let bits = digits_to_bits(opts.digits);
    let lambda_y = BigComplex::from_rational(&lambda_y_sq, bits).sqrt();
    let residuals: Vec<Result<f64>> = held
        .par_iter()
        .map(|s| {
            let p = k.lift_numeric(&s.z, true, bits)?;
            let resid_k = k.log10_relative_residual(&p);
            let full: Vec<BigComplex> = p.to_vec();
            let k2 = k.k2.eval_complex(&full);
            let k1 = k.k1.eval_complex(&full);
            let half = BigComplex::from_rational(&rat(1, 2), bits);
            let w = &(&k2 * &p[3]) + &(&k1 * &half);
            let y = &(&lambda_y * &BigComplex::from_rational(&s.y0_factor, bits)) * &w;
            let t = t_of(&s.u);
            let x = &lambda_x * &s.x0;
            let terms = [
                &y * &y,
                BigComplex::from_rational(&(-(&x * &x * &x)), bits),
                BigComplex::from_rational(&(-(pair.y.a2.eval(&t) * &x * &x)), bits),
                BigComplex::from_rational(&(-(pair.y.a4.eval(&t) * &x)), bits),
            ];
            let scale = terms.iter().map(|c| c.log10_abs()).fold(f64::NEG_INFINITY, f64::max);
            let total = terms.iter().fold(BigComplex::zero(bits), |acc, c| &acc + c);
            Ok((total.log10_abs() - scale).max(resid_k))
        })
        .collect();
    let mut max_res = f64::NEG_INFINITY;
    for r in residuals {
        max_res = max_res.max(r?);
    }
    checks.push(CheckItem::new(
        "held-out numeric",
        max_res < opts.tolerance_log10,
        format!("max log10 relative residual {max_res:.1} at {} digits", opts.digits),
    ));

    let neg_mu_sigma = -(&mu * &sigma);
    Ok(KummerSideReport {
        curves,
        pencil_dimension,
        x_degrees,
        y_degrees,
        kappa: qfmt(&kappa),
        a_coeffs: a_u.to_strings(),
        b_coeffs: b_u.to_strings(),
        mu: qfmt(&mu),
        sigma: qfmt(&sigma),
        lambda_x: qfmt(&lambda_x),
        lambda_y_squared: qfmt(&lambda_y_sq),
        mobius: [qfmt(&mu), qfmt(&neg_mu_sigma), "0".into(), "1".into()],
        fit_samples: fit.len(),
        held_out_samples: held.len(),
        digits: opts.digits,
        max_log10_held_out_residual: max_res,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_curve() {
        let c = GenusTwoCurve::from_roots(int(1), (0..6).map(int).collect()).unwrap();
        let rep = kummer_side_verification(&c, &KummerSideOptions { samples: 40, ..Default::default() }).unwrap();
        assert!(rep.passed(), "{:#?}", rep.checks);
        assert_eq!(rep.pencil_dimension, 2);
        assert_eq!(rep.mu, "2400");
    }

    #[test]
    fn non_monic_curve() {
        let c = GenusTwoCurve::from_roots(int(2), [0, 1, 3, -2, 7, 11].map(int).to_vec()).unwrap();
        let rep = kummer_side_verification(&c, &KummerSideOptions { samples: 40, ..Default::default() }).unwrap();
        assert!(rep.passed(), "{:#?}", rep.checks);
    }

    #[test]
    fn line_through_two_nodes() {
        let (_, rank, polys) = plane_system(1, &[([int(1), int(1), int(0)], 1), ([int(1), int(9), int(20)], 1)]);
        assert_eq!(rank, 2);
        assert_eq!(polys.len(), 1);
    }
}
