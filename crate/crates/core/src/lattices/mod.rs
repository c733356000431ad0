//! Integral lattices given by Gram matrices.

mod naruki;

use std::fmt;

use dashu_int::IBig;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::linalg::hermite_normal_form;
use crate::algebra::rational::{fmt as qfmt, from_ibig, int, is_integer, is_zero, Rational};
use crate::algebra::QMatrix;
use crate::error::{Error, Result};

pub use naruki::{
    ambient_index, glue_vectors, lambda_basis_labels, naruki_classes, DivisorClass, NarukiClasses, NarukiReport,
    E8_COPY, OCTET,
};

#[derive(Clone, Debug, PartialEq)]
pub struct GramLattice {
    pub gram: QMatrix,
    pub labels: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({}, {})", self.positive, self.negative)
        } else {
            write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
        }
    }
}

impl GramLattice {
    pub fn new(gram: QMatrix, labels: Vec<String>) -> Result<Self> {
        if gram.nrows() != gram.ncols() || gram.nrows() != labels.len() {
            return Err(Error::InvalidLattice("Gram matrix must be square with one label per row".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
        }
        Ok(GramLattice { gram, labels })
    }

    pub fn with_default_labels(gram: QMatrix, prefix: &str) -> Result<Self> {
        let labels = (1..=gram.nrows()).map(|i| format!("{prefix}{i}")).collect();
        Self::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn is_integral(&self) -> bool {
        self.gram.is_integral()
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| is_integer(&(&self.gram[(i, i)] / int(2))))
    }

    pub fn pairing(&self, u: &[Rational], v: &[Rational]) -> Rational {
        self.gram.bilinear(u, v)
    }

    pub fn norm(&self, v: &[Rational]) -> Rational {
        self.pairing(v, v)
    }

    pub fn scaled(&self, s: &Rational) -> GramLattice {
        GramLattice { gram: self.gram.scale(s), labels: self.labels.clone() }
    }

    pub fn discriminant(&self) -> Rational {
        let d = self.gram.det();
        if d < Rational::ZERO {
            -d
        } else {
            d
        }
    }

    /// Exact `LDL^T` with symmetric pivoting; a zero diagonal is repaired by `e_i -> e_i + e_j`.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> = self.gram.to_rows();
        let mut active: Vec<usize> = (0..n).collect();
        let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
        while !active.is_empty() {
            let pivot = active.iter().copied().find(|&i| !is_zero(&a[i][i]));
            let p = match pivot {
                Some(p) => p,
                None => {
                    let pair = active
                        .iter()
                        .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                        .find(|&(i, j)| i != j && !is_zero(&a[i][j]));
                    match pair {
                        Some((i, j)) => {
                            for &k in &active {
                                let v = a[j][k].clone();
                                a[i][k] += v;
                            }
                            for &k in &active {
                                let v = a[k][j].clone();
                                a[k][i] += v;
                            }
                            i
                        }
                        None => {
                            sig.zero += active.len();
                            break;
                        }
                    }
                }
            };
            let d = a[p][p].clone();
            if d > Rational::ZERO {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            active.retain(|&k| k != p);
            for &k in &active {
                let f = &a[k][p] / &d;
                for &l in &active {
                    let v = &f * &a[p][l];
                    a[k][l] -= v;
                }
            }
        }
        sig
    }

    pub fn disc_and_signature(&self) -> (Rational, Signature) {
        (self.discriminant(), self.signature())
    }

    /// Number of vectors of norm `2` (positive definite) or `-2` (negative definite).
    pub fn count_roots(&self) -> Result<u64> {
        let sig = self.signature();
        let g = if sig.positive == self.rank() {
            self.gram.clone()
        } else if sig.negative == self.rank() {
            self.gram.scale(&int(-1))
        } else {
            return Err(Error::Indefinite);
        };
        Ok(count_vectors_of_norm(&g, &int(2)))
    }

    pub fn to_gram_strings(&self) -> Vec<Vec<String>> {
        self.gram.to_strings()
    }
}

impl Serialize for GramLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GramLattice", 2)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("gram", &self.gram.to_strings())?;
        st.end()
    }
}

/// Counts `x` in `Z^n` with `x^T G x = target` for positive-definite `G`.
///
/// The decomposition `Q(x) = sum q_ii (x_i + sum_j q_ij x_j)^2` is exact; enumeration
/// bounds use floating point with slack and every candidate is confirmed exactly.
pub fn count_vectors_of_norm(g: &QMatrix, target: &Rational) -> u64 {
    let n = g.nrows();
    if n == 0 {
        return u64::from(is_zero(target));
    }
    let mut q = g.to_rows();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }
    let qf: Vec<Vec<f64>> =
        q.iter().map(|r| r.iter().map(crate::algebra::numeric::rational_to_f64).collect()).collect();
    let bound = crate::algebra::numeric::rational_to_f64(target);
    let ctx = Enum { n, q: &qf, bound, gram: g, target };
    let top = n - 1;
    let range = ctx.range(top, &vec![0; n], bound);
    range
        .into_par_iter()
        .map(|xt| {
            let mut x = vec![0i64; n];
            x[top] = xt;
            let used = qf[top][top] * (xt as f64).powi(2);
            ctx.descend(top, &mut x, bound - used)
        })
        .sum()
}

struct Enum<'a> {
    n: usize,
    q: &'a [Vec<f64>],
    bound: f64,
    gram: &'a QMatrix,
    target: &'a Rational,
}

const SLACK: f64 = 1e-7;

impl Enum<'_> {
    fn center(&self, i: usize, x: &[i64]) -> f64 {
        (i + 1..self.n).map(|j| self.q[i][j] * x[j] as f64).sum()
    }

    fn range(&self, i: usize, x: &[i64], remaining: f64) -> Vec<i64> {
        if remaining < -SLACK {
            return Vec::new();
        }
        let c = self.center(i, x);
        let r = (remaining.max(0.0) / self.q[i][i]).sqrt() + SLACK;
        let lo = (-c - r).ceil() as i64;
        let hi = (-c + r).floor() as i64;
        (lo..=hi).collect()
    }

    /// `x[i..]` is fixed with `remaining` budget; enumerates `x[..i]`.
    fn descend(&self, i: usize, x: &mut Vec<i64>, remaining: f64) -> u64 {
        if remaining < -SLACK * self.bound.max(1.0) {
            return 0;
        }
        if i == 0 {
            return u64::from(self.exact_norm(x) == *self.target);
        }
        let k = i - 1;
        let mut count = 0;
        for v in self.range(k, x, remaining) {
            x[k] = v;
            let c = self.center(k, x);
            let used = self.q[k][k] * (v as f64 + c).powi(2);
            count += self.descend(k, x, remaining - used);
        }
        x[k] = 0;
        count
    }

    fn exact_norm(&self, x: &[i64]) -> Rational {
        let v: Vec<Rational> = x.iter().map(|&a| int(a)).collect();
        self.gram.bilinear(&v, &v)
    }
}

/// Dynkin-type and named lattices, optionally scaled: `E8`, `A4`, `D6(-1)`, `U(2)`, `Nikulin`.
pub fn named_lattice(name_spec: &str) -> Result<GramLattice> {
    let name_spec = name_spec.trim();
    let (name, scale) = match name_spec.find('(') {
        Some(open) if name_spec.ends_with(')') => {
            let s = crate::algebra::rational::parse_rational(&name_spec[open + 1..name_spec.len() - 1])?;
            (&name_spec[..open], Some(s))
        }
        _ => (name_spec, None),
    };
    let bad = || Error::InvalidLattice(format!("unknown or invalid lattice name {name_spec:?}"));
    let rank_of = |rest: &str| rest.parse::<usize>().map_err(|_| bad());
    let lat = match name {
        "U" => GramLattice::new(QMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]), vec!["u1".into(), "u2".into()])?,
        "E6" => dynkin_e(6)?,
        "E7" => dynkin_e(7)?,
        "E8" => dynkin_e(8)?,
        "Nikulin" => nikulin_lattice()?,
        "Kummer" => kummer_lattice()?,
        "Lambda166" => lambda_16_6()?.lattice,
        _ if name.starts_with('A') => {
            let n = rank_of(&name[1..])?;
            if n < 1 {
                return Err(bad());
            }
            dynkin_a(n)?
        }
        _ if name.starts_with('D') => {
            let n = rank_of(&name[1..])?;
            if n < 4 {
                return Err(bad());
            }
            dynkin_d(n)?
        }
        _ if name.starts_with('<') && name.ends_with('>') => {
            let a = crate::algebra::rational::parse_rational(&name[1..name.len() - 1])?;
            GramLattice::new(QMatrix::diagonal(&[a]), vec!["v".into()])?
        }
        _ => return Err(bad()),
    };
    Ok(match scale {
        Some(s) if is_zero(&s) => return Err(bad()),
        Some(s) => lat.scaled(&s),
        None => lat,
    })
}

/// Gram matrix `2 I - adjacency` of a simply-laced Dynkin graph.
pub fn dynkin_gram(n: usize, edges: &[(usize, usize)]) -> QMatrix {
    let mut g = QMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = int(2);
    }
    for &(a, b) in edges {
        g[(a, b)] = int(-1);
        g[(b, a)] = int(-1);
    }
    g
}

fn chain(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

fn dynkin_a(n: usize) -> Result<GramLattice> {
    GramLattice::with_default_labels(dynkin_gram(n, &chain(n)), "a")
}

fn dynkin_d(n: usize) -> Result<GramLattice> {
    let mut e = chain(n - 1);
    e.push((n - 3, n - 1));
    GramLattice::with_default_labels(dynkin_gram(n, &e), "d")
}

/// `E_n`: a chain of `n - 1` nodes with one more attached to the third.
pub fn e_edges(n: usize) -> Vec<(usize, usize)> {
    let mut e = chain(n - 1);
    e.push((2, n - 1));
    e
}

fn dynkin_e(n: usize) -> Result<GramLattice> {
    GramLattice::with_default_labels(dynkin_gram(n, &e_edges(n)), "e")
}

/// Result of adjoining rational vectors to a lattice.
#[derive(Clone, Debug)]
pub struct Extension {
    pub lattice: GramLattice,
    /// New basis, as rows of coordinates in the base basis.
    pub basis: Vec<Vec<Rational>>,
    pub index: Rational,
}

impl Extension {
    /// Coordinates of a base-coordinate vector in the new basis, if it lies in the lattice.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let b = QMatrix::from_rows(self.basis.clone());
        let inv = b.inverse()?;
        let c = inv.vec_mul(v);
        c.iter().all(is_integer).then_some(c)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// The lattice generated by `base` and the given vectors (in base coordinates).
pub fn overlattice(base: &GramLattice, generators: &[(String, Vec<Rational>)]) -> Result<Extension> {
    let n = base.rank();
    let even = base.is_even();
    for (name, w) in generators {
        if w.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: w.len() });
        }
        let wg = base.gram.vec_mul(w);
        for (i, p) in wg.iter().enumerate() {
            if !is_integer(p) {
                return Err(Error::NonIntegralPairing(name.clone(), base.labels[i].clone(), qfmt(p)));
            }
        }
    }
    for (a, (na, wa)) in generators.iter().enumerate() {
        for (nb, wb) in generators.iter().skip(a) {
            let p = base.pairing(wa, wb);
            if !is_integer(&p) {
                return Err(Error::NonIntegralPairing(na.clone(), nb.clone(), qfmt(&p)));
            }
            if na == nb && even && !is_integer(&(&p / int(2))) {
                return Err(Error::NonIntegralPairing(na.clone(), nb.clone(), format!("odd norm {}", qfmt(&p))));
            }
        }
    }
    let mut den = IBig::ONE;
    for (_, w) in generators {
        for c in w {
            den = crate::algebra::rational::lcm(&den, &IBig::from(c.denominator().clone()));
        }
    }
    let dq = from_ibig(den.clone());
    let mut rows: Vec<Vec<IBig>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { den.clone() } else { IBig::ZERO }).collect()).collect();
    for (_, w) in generators {
        rows.push(w.iter().map(|c| (c * &dq).numerator().clone()).collect());
    }
    let hnf = hermite_normal_form(&rows);
    let basis: Vec<Vec<Rational>> =
        hnf.iter().map(|r| r.iter().map(|c| from_ibig(c.clone()) / &dq).collect()).collect();
    let b = QMatrix::from_rows(basis.clone());
    let gram = b.mul(&base.gram).mul(&b.transpose());
    let det = b.det();
    let index = Rational::ONE / if det < Rational::ZERO { -det } else { det };
    let labels = (1..=n).map(|i| format!("b{i}")).collect();
    Ok(Extension { lattice: GramLattice::new(gram, labels)?, basis, index })
}

/// Orthogonal direct sum of scaled lattices.
pub fn scale_and_sum(parts: &[(GramLattice, Rational)]) -> GramLattice {
    let n: usize = parts.iter().map(|(l, _)| l.rank()).sum();
    let mut g = QMatrix::zeros(n, n);
    let mut labels = Vec::with_capacity(n);
    let mut off = 0;
    for (k, (l, s)) in parts.iter().enumerate() {
        for i in 0..l.rank() {
            for j in 0..l.rank() {
                g[(off + i, off + j)] = &l.gram[(i, j)] * s;
            }
            labels.push(if parts.len() > 1 { format!("{}.{}", k + 1, l.labels[i]) } else { l.labels[i].clone() });
        }
        off += l.rank();
    }
    GramLattice { gram: g, labels }
}

fn diagonal_lattice(n: usize, value: i64, prefix: &str) -> Result<GramLattice> {
    GramLattice::with_default_labels(QMatrix::diagonal(&vec![int(value); n]), prefix)
}

/// `<-2>^8` extended by the half-sum of the basis.
pub fn nikulin_lattice() -> Result<GramLattice> {
    let base = diagonal_lattice(8, -2, "v")?;
    let half = vec![Rational::ONE / int(2); 8];
    Ok(overlattice(&base, &[("half-sum".into(), half)])?.lattice)
}

/// Supports of the 32 codewords of the first-order Reed-Muller code of length 16, as bitmasks
/// over the points of `F_2^4` (point `p` is bit `p`).
pub fn reed_muller_codewords() -> Vec<u16> {
    let mut words = Vec::with_capacity(32);
    for a in 0u16..16 {
        for c in 0u16..2 {
            let mut mask = 0u16;
            for p in 0u16..16 {
                if ((a & p).count_ones() as u16 + c) % 2 == 1 {
                    mask |= 1 << p;
                }
            }
            words.push(mask);
        }
    }
    words.sort_unstable();
    words.dedup();
    words
}

/// `<-2>^16` indexed by `F_2^4`, extended by the half-sums over the codeword supports.
pub fn kummer_lattice() -> Result<GramLattice> {
    Ok(kummer_extension()?.lattice)
}

pub fn kummer_extension() -> Result<Extension> {
    let base = diagonal_lattice(16, -2, "E")?;
    let gens: Vec<(String, Vec<Rational>)> = reed_muller_codewords()
        .into_iter()
        .filter(|&m| m != 0)
        .map(|m| {
            let v = (0..16).map(|p| if m >> p & 1 == 1 { Rational::ONE / int(2) } else { Rational::ZERO }).collect();
            (format!("half-sum {m:#06x}"), v)
        })
        .collect();
    overlattice(&base, &gens)
}

/// `Lambda(16, 6)` with its ambient diagonal lattice.
pub struct Lambda166 {
    pub ambient: GramLattice,
    pub extension: Extension,
    pub lattice: GramLattice,
}

pub fn lambda_16_6() -> Result<Lambda166> {
    let labels = lambda_basis_labels();
    let mut diag = vec![int(-2); labels.len()];
    diag[0] = int(4);
    let ambient = GramLattice::new(QMatrix::diagonal(&diag), labels)?;
    let extension = overlattice(&ambient, &glue_vectors())?;
    let lattice = extension.lattice.clone();
    Ok(Lambda166 { ambient, extension, lattice })
}
