//! Simultaneous (Aberth) root iteration at fixed working precision.

use super::numeric::{digits_to_bits, float_log10, float_to_f64, BigComplex};
use super::rational::Rational;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Extra decimal digits carried beyond the requested accuracy.
pub const GUARD_DIGITS: usize = 10;
const MAX_ITERATIONS: usize = 200;
const MAX_DOUBLINGS: usize = 3;

/// All complex roots with multiplicity, each accurate to roughly `digits` digits.
pub fn complex_roots(p: &UPoly, digits: usize) -> Result<Vec<BigComplex>> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    if p.deg() < 1 {
        return Err(Error::DegreeTooSmall { needed: 1, got: 0 });
    }
    let sf = p.squarefree_factor()?;
    let mut out = Vec::with_capacity(p.deg());
    for (f, m) in &sf.factors {
        let roots = complex_roots_squarefree(f, digits)?;
        for r in roots {
            for _ in 0..*m {
                out.push(r.clone());
            }
        }
    }
    Ok(out)
}

/// Roots of a polynomial already known to be squarefree.
pub fn complex_roots_squarefree(p: &UPoly, digits: usize) -> Result<Vec<BigComplex>> {
    let n = p.deg();
    let mut bits = digits_to_bits(digits + 2 * GUARD_DIGITS);
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        let r: Rational = -p.coeff(0) / p.coeff(1);
        return Ok(vec![BigComplex::from_rational(&r, bits)]);
    }
    let q = p.monic();
    let mut z = initial_guesses(&q, bits);
    let target = -((digits + GUARD_DIGITS / 2) as f64);
    let mut total = 0;
    for _ in 0..=MAX_DOUBLINGS {
        for _ in 0..MAX_ITERATIONS {
            total += 1;
            if aberth_sweep(&q, &mut z) < target {
                return Ok(z);
            }
        }
        bits *= 2;
        z = z.iter().map(|w| w.with_precision(bits)).collect();
    }
    Err(Error::NonConvergence { iterations: total, bits, partial: z })
}

/// One Gauss-Seidel Aberth pass; returns log10 of the largest relative correction.
fn aberth_sweep(q: &UPoly, z: &mut [BigComplex]) -> f64 {
    let n = z.len();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..n {
        let (pv, dpv) = q.eval_complex_with_derivative(&z[k]);
        if pv.is_zero() {
            continue;
        }
        let newton = &pv / &dpv;
        let bits = z[k].precision();
        let mut s = BigComplex::zero(bits);
        for j in 0..n {
            if j != k {
                s = &s + &(&z[k] - &z[j]).recip();
            }
        }
        let denom = &BigComplex::one(bits) - &(&newton * &s);
        let w = &newton / &denom;
        let scale = z[k].log10_abs().max(0.0);
        worst = worst.max(w.log10_abs() - scale);
        z[k] = &z[k] - &w;
    }
    worst
}

fn initial_guesses(q: &UPoly, bits: usize) -> Vec<BigComplex> {
    let n = q.deg();
    let mut log_r: f64 = f64::NEG_INFINITY;
    for k in 1..=n {
        let c = q.coeff(n - k);
        if c == Rational::ZERO {
            continue;
        }
        let l = float_log10(&super::numeric::float_from_rational(&c, 64)).max(-300.0);
        log_r = log_r.max(l / k as f64);
    }
    let radius = if log_r == f64::NEG_INFINITY { 1.0 } else { 2.0 * 10f64.powf(log_r.min(300.0)) };
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            BigComplex::from_f64(radius * theta.cos(), radius * theta.sin(), bits)
        })
        .collect()
}

/// max over roots of |p(r)| / sum |c_i| |r|^i, as log10.
pub fn log10_relative_residual(p: &UPoly, roots: &[BigComplex]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for r in roots {
        let v = p.eval_complex(r).log10_abs();
        let mut scale = f64::NEG_INFINITY;
        let lr = r.log10_abs();
        for (i, c) in p.coeffs().iter().enumerate() {
            if *c == Rational::ZERO {
                continue;
            }
            let lc = float_log10(&super::numeric::float_from_rational(c, 64));
            let term = lc + if i == 0 { 0.0 } else { i as f64 * lr };
            scale = log_add(scale, term);
        }
        worst = worst.max(v - scale);
    }
    worst
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

/// Real roots among `roots` (imaginary part below `10^-tol_digits` relative).
pub fn real_parts(roots: &[BigComplex], tol_digits: f64) -> Vec<f64> {
    roots
        .iter()
        .filter(|r| float_log10(&r.im) - r.log10_abs().max(0.0) < -tol_digits)
        .map(|r| float_to_f64(&r.re))
        .collect()
}
