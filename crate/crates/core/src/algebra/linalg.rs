//! Exact dense linear algebra over the rationals and the integers, plus a modular solver.

use std::fmt;

use dashu_base::UnsignedAbs;
use dashu_int::{IBig, UBig};

use super::rational::{fmt as qfmt, int, is_zero, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = int(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = QMatrix::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut m = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !is_zero(b) {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.denominator().is_one())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !is_zero(&m[(i, c)])) else { continue };
            m.swap_rows(r, p);
            let inv = Rational::ONE / &m[(r, c)];
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || is_zero(&m[(i, c)]) {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::ZERO; self.cols];
                v[f] = int(1);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return int(1);
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut acc = int(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !is_zero(&m[(i, c)])) else { return Rational::ZERO };
            if p != c {
                m.swap_rows(p, c);
                sign = !sign;
            }
            let piv = m[(c, c)].clone();
            acc *= &piv;
            let inv = Rational::ONE / &piv;
            for i in c + 1..n {
                if is_zero(&m[(i, c)]) {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        if sign {
            -acc
        } else {
            acc
        }
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.rows;
        assert_eq!(n, self.cols, "inverse of non-square matrix");
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = int(1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows, "shape mismatch");
        (0..self.cols)
            .map(|j| v.iter().enumerate().fold(Rational::ZERO, |acc, (i, a)| acc + a * &self[(i, j)]))
            .collect()
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mu = self.vec_mul(u);
        mu.iter().zip(v).fold(Rational::ZERO, |acc, (a, b)| acc + a * b)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(qfmt).collect()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(qfmt).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Row-style Hermite normal form of an integer matrix; zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<IBig>]) -> Vec<Vec<IBig>> {
    let mut m: Vec<Vec<IBig>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // gcd-reduce column c over rows r.. into row r
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if m[i][c] != IBig::ZERO && best.is_none_or(|b| (&m[i][c]).unsigned_abs() < (&m[b][c]).unsigned_abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != IBig::ZERO {
                    let q = &m[i][c] / &m[r][c];
                    let pivot_row = m[r].clone();
                    for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * p;
                    }
                    if m[i][c] != IBig::ZERO {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == IBig::ZERO {
            continue;
        }
        if m[r][c] < IBig::ZERO {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = floor_div(&m[i][c], &m[r][c]);
            if q != IBig::ZERO {
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn floor_div(a: &IBig, b: &IBig) -> IBig {
    let q = a / b;
    if (a - &q * b) != IBig::ZERO && ((*a < IBig::ZERO) != (*b < IBig::ZERO)) {
        q - IBig::ONE
    } else {
        q
    }
}

/// Solve `A x = b` modulo the prime `p`, for a system known to have a unique solution.
/// Entries are already reduced mod `p`. Returns `None` if the system is singular mod `p`.
pub fn solve_mod_p(a: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<u64>> = a.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
    let mut row = 0;
    let mut pivots = Vec::with_capacity(n);
    for c in 0..n {
        let piv = (row..m.len()).find(|&i| m[i][c] != 0)?;
        m.swap(row, piv);
        let inv = pow_mod(m[row][c], p - 2, p);
        for x in m[row].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || r[c] == 0 {
                continue;
            }
            let f = r[c];
            for (x, &pv) in r.iter_mut().zip(&pivot_row).skip(c) {
                *x = (*x + p - mul_mod(f, pv, p)) % p;
            }
        }
        pivots.push(row);
        row += 1;
    }
    // remaining equations must be consistent
    for r in m.iter().skip(n) {
        if r[n] != 0 {
            return None;
        }
    }
    Some((0..n).map(|i| m[pivots[i]][n]).collect())
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn rational_mod_p(q: &Rational, p: u64) -> Option<u64> {
    let pb = UBig::from(p);
    let d = u64::try_from(q.denominator() % &pb).ok()?;
    if d == 0 {
        return None;
    }
    let n_abs = u64::try_from(q.numerator().unsigned_abs() % &pb).ok()?;
    let n = if *q.numerator() < IBig::ZERO { (p - n_abs) % p } else { n_abs };
    Some(mul_mod(n, pow_mod(d, p - 2, p), p))
}

/// Combine residues by the Chinese remainder theorem into the symmetric range.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> IBig {
    let mut x = UBig::ZERO;
    let mut m = UBig::ONE;
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = UBig::from(p);
        let xm = u64::try_from(&x % &pb).unwrap();
        let mm = u64::try_from(&m % &pb).unwrap();
        let diff = (r + p - xm) % p;
        let k = mul_mod(diff, pow_mod(mm, p - 2, p), p);
        x += &m * UBig::from(k);
        m *= pb;
    }
    let half = &m >> 1;
    if x > half {
        IBig::from(x) - IBig::from(m)
    } else {
        IBig::from(x)
    }
}

/// Primes just below 2^61 used for modular reconstruction.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n: u64 = (1u64 << 61) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn determinant_and_inverse() {
        let m = QMatrix::from_int_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.det(), int(4));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
        let s = QMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.det(), int(0));
        assert!(s.inverse().is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let m = QMatrix::from_rows(vec![vec![int(1), int(2), int(3)], vec![rat(1, 2), int(1), rat(3, 2)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..2 {
                let s = (0..3).fold(Rational::ZERO, |a, j| a + &m[(i, j)] * &v[j]);
                assert_eq!(s, Rational::ZERO);
            }
        }
    }

    #[test]
    fn hnf_of_lattice() {
        let rows: Vec<Vec<IBig>> = vec![vec![2, 0], vec![0, 2], vec![1, 1]]
            .into_iter()
            .map(|r: Vec<i64>| r.into_iter().map(IBig::from).collect())
            .collect();
        let h = hermite_normal_form(&rows);
        assert_eq!(h.len(), 2);
        let det = &h[0][0] * &h[1][1] - &h[0][1] * &h[1][0];
        assert_eq!(det, IBig::from(2));
    }

    #[test]
    fn modular_solve_and_crt() {
        let ps = large_primes(3);
        assert!(ps.iter().all(|&p| p > 1 << 60));
        // x = -7/3, y = 5 from 3x + 0y = -7, x + y = 8/3
        let sys = [(vec![int(3), int(0)], int(-7)), (vec![int(1), int(1)], rat(8, 3))];
        let mut xs = Vec::new();
        for &p in &ps {
            let a: Vec<Vec<u64>> =
                sys.iter().map(|(r, _)| r.iter().map(|v| rational_mod_p(v, p).unwrap()).collect()).collect();
            let b: Vec<u64> = sys.iter().map(|(_, v)| rational_mod_p(v, p).unwrap()).collect();
            xs.push(solve_mod_p(&a, &b, p).unwrap());
        }
        let y: Vec<u64> = xs.iter().map(|s| s[1]).collect();
        assert_eq!(crt_symmetric(&y, &ps), IBig::from(5));
        let x3: Vec<u64> = xs.iter().zip(&ps).map(|(s, &p)| mul_mod(s[0], 3, p)).collect();
        assert_eq!(crt_symmetric(&x3, &ps), IBig::from(-7));
    }
}
