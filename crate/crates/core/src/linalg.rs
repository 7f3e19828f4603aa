//! Dense exact linear algebra over the rationals.
//!
//! Everything here is fraction-exact: rank, echelon forms, kernels and
//! characteristic polynomials never round, so every rank decision made by the
//! higher layers is a certificate. Rational eigenvalue extraction works on the
//! primitive integer form of the characteristic polynomial and enumerates
//! divisors by trial division, which is exact but refuses (with an error)
//! inputs whose constant terms are too large to scan.

use crate::error::CoreError;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| s * &self[(i, j)])
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Column action: `(Nx)_i = sum_j N[i][j] x_j`.
    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, x.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x[j].is_zero() {
                        acc += a * &x[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("pivot nonzero");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &(&factor * &m[(r, j)]);
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; no back substitution needed for rank.
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let pivot = m[(rank, c)].clone();
            for i in rank + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] / &pivot;
                m[(i, c)] = Rat::zero();
                for j in c + 1..m.cols {
                    if !m[(rank, j)].is_zero() {
                        let v = &m[(i, j)] - &(&factor * &m[(rank, j)]);
                        m[(i, j)] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Canonical kernel basis derived from the rref: one vector per free
    /// column, with the free coordinate set to 1.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let piv_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if piv_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rat::zero(); self.cols];
            vec[free] = Rat::one();
            for (col, piv) in piv_set.iter().enumerate() {
                if let Some(row) = piv {
                    vec[col] = -&r[(*row, free)];
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Canonical basis (rref rows) of the column space.
    pub fn column_space_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.transpose().rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Monic characteristic polynomial by the Faddeev–LeVerrier recursion,
    /// returned with ascending coefficients: `p[0] + p[1] x + ... + x^n`.
    pub fn char_poly(&self) -> Vec<Rat> {
        assert!(
            self.is_square(),
            "characteristic polynomial of a non-square matrix"
        );
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut b = Mat::identity(n);
        for k in 1..=n {
            let m = self.matmul(&b);
            let c = -&(m.trace() / Rat::from_int(k as i64));
            coeffs[n - k] = c.clone();
            b = m;
            for i in 0..n {
                b[(i, i)] += &c;
            }
        }
        coeffs
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  [{}]",
                self.row(i)
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )?;
        }
        write!(f, "]")
    }
}

/// Formats an ascending coefficient vector as a readable polynomial in `x`.
pub fn poly_to_string(coeffs: &[Rat]) -> String {
    let mut parts = Vec::new();
    for (e, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let term = match e {
            0 => c.to_string(),
            1 if c.is_one() => "x".to_string(),
            1 => format!("{}*x", c),
            _ if c.is_one() => format!("x^{}", e),
            _ => format!("{}*x^{}", c, e),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

const DIVISOR_SCAN_CAP: u64 = 1 << 22;

/// All positive divisors of `n` by trial division. Exact; errors out instead
/// of guessing when `sqrt(|n|)` exceeds the scan cap.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>, CoreError> {
    let n = n.abs();
    assert!(!n.is_zero());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    let mut steps: u64 = 0;
    while &d * &d <= n {
        steps += 1;
        if steps > DIVISOR_SCAN_CAP {
            return Err(CoreError::DivisorSearchExceeded {
                value: n.to_string(),
            });
        }
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

/// Roots with multiplicities, plus the root-free remaining factor (`None`
/// when the polynomial splits over Q).
pub type RootsAndRemainder = (Vec<(Rat, usize)>, Option<Vec<Rat>>);

/// Rational roots of `p` (ascending coefficients) with multiplicities.
///
/// Roots are found by divisor enumeration on the primitive integer form of
/// `p` and verified by repeated exact deflation.
pub fn rational_roots(poly: &[Rat]) -> Result<RootsAndRemainder, CoreError> {
    let mut p: Vec<Rat> = poly.to_vec();
    while p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
    assert!(!p.is_empty(), "zero polynomial has no well-defined roots");
    let mut roots: Vec<(Rat, usize)> = Vec::new();

    // Roots at zero.
    let zero_mult = p.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        p.drain(..zero_mult);
        roots.push((Rat::zero(), zero_mult));
    }
    if p.len() == 1 {
        return Ok((roots, None));
    }

    // Primitive integer form: clear denominators, strip content.
    let mut den_lcm = BigInt::one();
    for c in &p {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| {
            (c * &Rat::from_big(den_lcm.clone(), BigInt::one()))
                .numer()
                .clone()
        })
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();

    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    let ps = divisors(&a0)?;
    let qs = divisors(&an)?;

    let mut candidates: Vec<Rat> = Vec::new();
    for num in &ps {
        for den in &qs {
            let c = Rat::from_big(num.clone(), den.clone());
            if !candidates.contains(&c) {
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }
    candidates.sort();

    for cand in candidates {
        loop {
            if p.len() < 2 {
                break;
            }
            match deflate(&p, &cand) {
                Some(q) => {
                    p = q;
                    match roots.iter_mut().find(|(r, _)| *r == cand) {
                        Some((_, m)) => *m += 1,
                        None => roots.push((cand.clone(), 1)),
                    }
                }
                None => break,
            }
        }
    }

    roots.sort_by(|a, b| a.0.cmp(&b.0));
    let remaining = if p.len() > 1 { Some(p) } else { None };
    Ok((roots, remaining))
}

/// Divides `p` by `(x - r)` exactly; `None` when `r` is not a root.
fn deflate(p: &[Rat], r: &Rat) -> Option<Vec<Rat>> {
    // Horner synthetic division from the top coefficient down.
    let mut q = vec![Rat::zero(); p.len() - 1];
    let mut carry = Rat::zero();
    for i in (0..p.len()).rev() {
        let v = &p[i] + &(&carry * r);
        if i == 0 {
            if v.is_zero() {
                return Some(q);
            }
            return None;
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}
