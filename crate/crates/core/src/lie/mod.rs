//! Finite-dimensional Lie algebras over Q: structure constants, validation,
//! Lie–Poisson matrices, index estimation and subalgebra machinery.

mod coisotropy;
mod semidirect;

pub use coisotropy::{coisotropy_numbers, CoisotropyNumbers};
pub use semidirect::{
    rais_check, semidirect_product, twilled_truncate, validate_representation, RaisReport,
    TwilledTruncation,
};

use crate::error::{CoreError, Result};
use crate::linalg::Mat;
use crate::rat::Rat;
use crate::sample::{sample_vector, PointSamplerConfig};
use rayon::prelude::*;
use serde::Serialize;

/// A Lie algebra presented by its structure constants in a fixed basis:
/// `c[i][j][k]` is the coefficient of `e_k` in `[e_i, e_j]`.
///
/// The tensor is stored densely. Antisymmetry and the Jacobi identity are not
/// enforced by the representation; [`check_jacobi`] validates them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Vec<Vec<Rat>>>,
    labels: Option<Vec<String>>,
}

impl StructureConstants {
    /// The zero (abelian) bracket in dimension `dim`.
    pub fn zero(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![vec![vec![Rat::zero(); dim]; dim]; dim],
            labels: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[i][j][k]
    }

    /// Raw assignment of a single tensor entry. Does not mirror.
    pub fn set_entry(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        self.c[i][j][k] = v;
    }

    /// Sets `[e_i, e_j] = sum coeffs` and mirrors `[e_j, e_i]` antisymmetrically.
    pub fn set_bracket(&mut self, i: usize, j: usize, coeffs: &[(usize, Rat)]) {
        for (k, v) in coeffs {
            self.c[i][j][*k] = v.clone();
            self.c[j][i][*k] = -v;
        }
    }

    /// The vector `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rat] {
        &self.c[i][j]
    }

    /// `[x, y]` by bilinear extension.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
                context: "bracket first argument",
            });
        }
        if y.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                found: y.len(),
                context: "bracket second argument",
            });
        }
        let mut out = vec![Rat::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let scale = xi * yj;
                for (k, ck) in self.c[i][j].iter().enumerate() {
                    if !ck.is_zero() {
                        out[k] += &scale * ck;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `s1 * a + s2 * b` as a bracket tensor.
    pub fn linear_combo(s1: &Rat, a: &Self, s2: &Rat, b: &Self) -> Result<Self> {
        if a.dim != b.dim {
            return Err(CoreError::DimensionMismatch {
                expected: a.dim,
                found: b.dim,
                context: "bracket pencil combination",
            });
        }
        let mut out = StructureConstants::zero(a.dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                for k in 0..a.dim {
                    let v = s1 * &a.c[i][j][k] + s2 * &b.c[i][j][k];
                    out.c[i][j][k] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.c
            .iter()
            .all(|m| m.iter().all(|r| r.iter().all(Rat::is_zero)))
    }

    /// Tensor equality ignoring labels.
    pub fn tensor_eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.c == other.c
    }

    /// Structure constants in the new basis whose vectors are the columns
    /// of the invertible matrix `p`.
    pub fn change_basis(&self, p: &Mat) -> Result<Self> {
        if p.nrows() != self.dim || p.ncols() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                found: p.nrows(),
                context: "basis change matrix",
            });
        }
        let p_inv = p.inverse().ok_or(CoreError::RankDeficientBasis)?;
        let mut out = StructureConstants::zero(self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let w = self.bracket(&p.col(i), &p.col(j))?;
                let coords = p_inv.apply(&w);
                for (k, v) in coords.into_iter().enumerate() {
                    out.c[j][i][k] = -&v;
                    out.c[i][j][k] = v;
                }
            }
        }
        Ok(out)
    }
}

/// Outcome of an exact validation pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckVerdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    Antisymmetry {
        i: usize,
        j: usize,
        k: usize,
        residual: Rat,
    },
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        residual: Rat,
    },
}

/// Report of antisymmetry / Jacobi violations, capped at a fixed count.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationReport {
    pub verdict: CheckVerdict,
    pub violations: Vec<Violation>,
    pub truncated: bool,
}

impl ViolationReport {
    pub fn passed(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }
}

const VIOLATION_CAP: usize = 16;

/// Validates antisymmetry and the Jacobi identity exactly.
///
/// The Jacobi identity is checked on ordered triples `i < j < k`; under
/// antisymmetry the Jacobiator is alternating, so this covers all index
/// quadruples.
pub fn check_jacobi(c: &StructureConstants) -> ViolationReport {
    let n = c.dim;
    let mut violations = Vec::new();
    let mut truncated = false;

    'antisym: for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let residual = &c.c[i][j][k] + &c.c[j][i][k];
                if !residual.is_zero() {
                    if violations.len() == VIOLATION_CAP {
                        truncated = true;
                        break 'antisym;
                    }
                    violations.push(Violation::Antisymmetry { i, j, k, residual });
                }
            }
        }
    }

    'jacobi: for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
                let mut jac = vec![Rat::zero(); n];
                for m in 0..n {
                    for (coef, other) in
                        [(&c.c[i][j][m], k), (&c.c[j][k][m], i), (&c.c[k][i][m], j)]
                    {
                        if coef.is_zero() {
                            continue;
                        }
                        for l in 0..n {
                            let t = &c.c[m][other][l];
                            if !t.is_zero() {
                                jac[l] += coef * t;
                            }
                        }
                    }
                }
                for (l, residual) in jac.into_iter().enumerate() {
                    if !residual.is_zero() {
                        if violations.len() == VIOLATION_CAP {
                            truncated = true;
                            break 'jacobi;
                        }
                        violations.push(Violation::Jacobi {
                            i,
                            j,
                            k,
                            l,
                            residual,
                        });
                    }
                }
            }
        }
    }

    let verdict = if violations.is_empty() {
        CheckVerdict::Pass
    } else {
        CheckVerdict::Fail
    };
    ViolationReport {
        verdict,
        violations,
        truncated,
    }
}

/// The Lie–Poisson matrix at a point of the dual space:
/// `Pi[i][j] = sum_k c[i][j][k] xi_k`.
pub fn lie_poisson_matrix(c: &StructureConstants, xi: &[Rat]) -> Result<Mat> {
    let n = c.dim;
    if xi.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: xi.len(),
            context: "dual-space point",
        });
    }
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let mut acc = Rat::zero();
            for (k, ck) in c.c[i][j].iter().enumerate() {
                if !ck.is_zero() && !xi[k].is_zero() {
                    acc += ck * &xi[k];
                }
            }
            m[(j, i)] = -&acc;
            m[(i, j)] = acc;
        }
    }
    Ok(m)
}

/// Certified index estimate: `index` is an upper bound for `ind g`, exact
/// whenever the sampled maximum rank is the generic rank.
#[derive(Clone, Debug, Serialize)]
pub struct IndexEstimate {
    pub index: usize,
    pub max_rank_found: usize,
    pub witness: Vec<Rat>,
}

/// Samples points of the dual space and returns `dim - max rank` of the
/// Lie–Poisson matrix, with a witness attaining the maximum.
pub fn algebra_index(c: &StructureConstants, cfg: &PointSamplerConfig) -> IndexEstimate {
    let n = c.dim;
    if n == 0 {
        return IndexEstimate {
            index: 0,
            max_rank_found: 0,
            witness: Vec::new(),
        };
    }
    // Antisymmetric matrices have even rank, so the best attainable value
    // is known up front; chunks of samples run in parallel and the scan
    // stops once it is reached.
    let rank_cap = n - (n % 2);
    let mut best_rank = 0;
    let mut witness = vec![Rat::zero(); n];
    const CHUNK: u64 = 8;
    let mut start = 0u64;
    while start < cfg.samples as u64 {
        let end = (start + CHUNK).min(cfg.samples as u64);
        let ranked: Vec<(usize, Vec<Rat>)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let xi = sample_vector(cfg.seed, i, n, cfg.coord_bound);
                let rank = lie_poisson_matrix(c, &xi)
                    .expect("dimension checked")
                    .rank();
                (rank, xi)
            })
            .collect();
        for (rank, xi) in ranked {
            if rank > best_rank {
                best_rank = rank;
                witness = xi;
            }
        }
        if best_rank == rank_cap {
            break;
        }
        start = end;
    }
    IndexEstimate {
        index: n - best_rank,
        max_rank_found: best_rank,
        witness,
    }
}

const INDEX_ROUNDS: usize = 6;

/// Repeats [`algebra_index`] with doubled coordinate bound until two
/// consecutive rounds agree on the maximum rank.
pub fn algebra_index_stable(c: &StructureConstants, cfg: &PointSamplerConfig) -> IndexEstimate {
    let mut best = algebra_index(c, cfg);
    if best.max_rank_found == c.dim() - (c.dim() % 2) {
        return best;
    }
    for round in 1..INDEX_ROUNDS {
        let next_cfg = PointSamplerConfig {
            seed: cfg.seed.wrapping_add(round as u64),
            samples: cfg.samples,
            coord_bound: cfg.coord_bound.saturating_mul(1 << round),
        };
        let next = algebra_index(c, &next_cfg);
        let agreed = next.max_rank_found == best.max_rank_found;
        if next.max_rank_found > best.max_rank_found {
            best = next;
        }
        if agreed {
            break;
        }
    }
    best
}

/// A list of linearly independent vectors spanning a subspace of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SubspaceBasis {
    vectors: Vec<Vec<Rat>>,
    #[serde(skip)]
    ambient: usize,
}

impl SubspaceBasis {
    pub fn new(vectors: Vec<Vec<Rat>>, ambient: usize) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(CoreError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                    context: "subspace basis vector",
                });
            }
        }
        let m = vectors.len();
        if m > 0 && Mat::from_rows(vectors.clone()).rank() != m {
            return Err(CoreError::RankDeficientBasis);
        }
        Ok(SubspaceBasis { vectors, ambient })
    }

    /// Coordinate subspace spanned by the given standard basis vectors.
    pub fn standard(ambient: usize, indices: &[usize]) -> Self {
        let vectors = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        SubspaceBasis { vectors, ambient }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vector(&self, i: usize) -> &[Rat] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    pub fn to_row_matrix(&self) -> Mat {
        if self.vectors.is_empty() {
            Mat::zeros(0, self.ambient)
        } else {
            Mat::from_rows(self.vectors.clone())
        }
    }
}

/// Splits ambient vectors into (subalgebra, quotient) coordinates with
/// respect to a basis and its deterministic complement.
///
/// The complement consists of the standard basis vectors at the non-pivot
/// columns of the basis' reduced echelon form (greedy pivoting), so reports
/// that mention quotient coordinates are reproducible.
pub struct QuotientSplitter {
    sub_dim: usize,
    complement: Vec<usize>,
    k_inv: Mat,
}

impl QuotientSplitter {
    pub fn new(basis: &SubspaceBasis) -> Result<Self> {
        let n = basis.ambient_dim();
        let m = basis.dim();
        let complement: Vec<usize> = if m == 0 {
            (0..n).collect()
        } else {
            let (_, pivots) = basis.to_row_matrix().rref();
            if pivots.len() != m {
                return Err(CoreError::RankDeficientBasis);
            }
            (0..n).filter(|c| !pivots.contains(c)).collect()
        };
        let mut k = Mat::zeros(n, n);
        for (col, v) in basis.vectors().iter().enumerate() {
            for (row, x) in v.iter().enumerate() {
                k[(row, col)] = x.clone();
            }
        }
        for (offset, &idx) in complement.iter().enumerate() {
            k[(idx, m + offset)] = Rat::one();
        }
        let k_inv = k.inverse().ok_or(CoreError::RankDeficientBasis)?;
        Ok(QuotientSplitter {
            sub_dim: m,
            complement,
            k_inv,
        })
    }

    /// Standard-basis indices of the complement (quotient representatives).
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates of `v` over (basis, complement).
    pub fn split(&self, v: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let coords = self.k_inv.apply(v);
        let beta = coords[self.sub_dim..].to_vec();
        let mut alpha = coords;
        alpha.truncate(self.sub_dim);
        (alpha, beta)
    }

    pub fn in_subspace(&self, v: &[Rat]) -> bool {
        self.split(v).1.iter().all(Rat::is_zero)
    }
}

/// Structure constants of the bracket restricted to a subalgebra, expressed
/// in the given basis. Fails with a witness pair if the span is not closed.
pub fn subalgebra_restrict(
    c: &StructureConstants,
    basis: &SubspaceBasis,
) -> Result<StructureConstants> {
    if basis.ambient_dim() != c.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: c.dim(),
            found: basis.ambient_dim(),
            context: "subalgebra basis",
        });
    }
    let m = basis.dim();
    if m == 0 {
        return Ok(StructureConstants::zero(0));
    }
    let splitter = QuotientSplitter::new(basis)?;
    let mut out = StructureConstants::zero(m);
    for i in 0..m {
        for j in i + 1..m {
            let w = c.bracket(basis.vector(i), basis.vector(j))?;
            let (alpha, beta) = splitter.split(&w);
            if beta.iter().any(|b| !b.is_zero()) {
                return Err(CoreError::NotASubalgebra { i, j });
            }
            for (k, v) in alpha.into_iter().enumerate() {
                out.c[j][i][k] = -&v;
                out.c[i][j][k] = v;
            }
        }
    }
    Ok(out)
}

/// Checks that the span of `basis` is closed under the bracket.
pub fn subalgebra_closure_check(c: &StructureConstants, basis: &SubspaceBasis) -> Result<()> {
    subalgebra_restrict(c, basis).map(|_| ())
}

/// A covector on the quotient `g / subalgebra`, expressed in the dual of the
/// deterministic complement basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Covector(pub Vec<Rat>);

impl Covector {
    pub fn zero(q: usize) -> Self {
        Covector(vec![Rat::zero(); q])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn gl2_passes_jacobi() {
        let c = catalog::gl_constants(2);
        assert!(check_jacobi(&c).passed());
    }

    #[test]
    fn abelian_passes_jacobi() {
        for n in [0, 1, 3, 5] {
            assert!(check_jacobi(&StructureConstants::zero(n)).passed());
        }
    }

    #[test]
    fn constructed_antisymmetry_violation_is_reported() {
        let mut c = StructureConstants::zero(2);
        c.set_entry(0, 1, 0, r(1));
        // mirror left at zero: antisymmetry fails at (0,1,0)
        let rep = check_jacobi(&c);
        assert!(!rep.passed());
        assert!(matches!(
            rep.violations[0],
            Violation::Antisymmetry {
                i: 0,
                j: 1,
                k: 0,
                ..
            }
        ));
    }

    #[test]
    fn bracket_is_antisymmetric_and_sl2_relations_hold() {
        let c = catalog::sl_constants(2);
        // basis order (e, h, f)
        let e = vec![r(1), r(0), r(0)];
        let h = vec![r(0), r(1), r(0)];
        let f = vec![r(0), r(0), r(1)];
        assert_eq!(c.bracket(&h, &e).unwrap(), vec![r(2), r(0), r(0)]);
        assert_eq!(c.bracket(&h, &f).unwrap(), vec![r(0), r(0), r(-2)]);
        assert_eq!(c.bracket(&e, &f).unwrap(), vec![r(0), r(1), r(0)]);
        let x = vec![r(3), r(-7), r(2)];
        assert!(c.bracket(&x, &x).unwrap().iter().all(Rat::is_zero));
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let c = StructureConstants::zero(4);
        let x = vec![r(1), r(2), r(3), r(4)];
        let y = vec![r(-1), r(0), r(5), r(7)];
        assert!(c.bracket(&x, &y).unwrap().iter().all(Rat::is_zero));
    }

    #[test]
    fn lie_poisson_matrix_examples() {
        let c = catalog::sl_constants(2);
        let zero = lie_poisson_matrix(&c, &[r(0), r(0), r(0)]).unwrap();
        assert!(zero.is_zero());
        // at xi = h^* the matrix pairs e with f and has rank 2
        let m = lie_poisson_matrix(&c, &[r(0), r(1), r(0)]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m[(0, 2)], r(1));
        let ab = StructureConstants::zero(3);
        assert!(lie_poisson_matrix(&ab, &[r(5), r(1), r(9)])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn index_of_small_algebras() {
        let cfg = PointSamplerConfig::new(7, 16, 50);
        // degenerate dimensions: index = dim
        assert_eq!(algebra_index(&StructureConstants::zero(0), &cfg).index, 0);
        assert_eq!(algebra_index(&StructureConstants::zero(1), &cfg).index, 1);
        assert_eq!(algebra_index(&StructureConstants::zero(4), &cfg).index, 4);
        assert_eq!(algebra_index(&catalog::sl_constants(2), &cfg).index, 1);
        assert_eq!(algebra_index(&catalog::gl_constants(2), &cfg).index, 2);
        // subalgebra of gl_3 with zero first row is Frobenius
        let sub = catalog::zero_row_subalgebra(3, 0);
        let restricted = subalgebra_restrict(&catalog::gl_constants(3), &sub).unwrap();
        assert_eq!(algebra_index(&restricted, &cfg).index, 0);
    }

    #[test]
    fn index_is_basis_invariant() {
        let cfg = PointSamplerConfig::new(3, 16, 50);
        for (c, seed) in [
            (catalog::sl_constants(2), 11u64),
            (catalog::gl_constants(2), 12),
        ] {
            let base = algebra_index_stable(&c, &cfg).index;
            for round in 0..10 {
                let n = c.dim();
                // random invertible matrix: identity plus random strictly
                // triangular parts, built from the sample stream
                let mut p = Mat::identity(n);
                let coords = sample_vector(seed, round, n * n, 3);
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            p[(i, j)] = coords[i * n + j].clone();
                        }
                    }
                }
                if p.inverse().is_none() {
                    continue;
                }
                let conj = c.change_basis(&p).unwrap();
                assert!(check_jacobi(&conj).passed());
                assert_eq!(algebra_index_stable(&conj, &cfg).index, base);
            }
        }
    }

    #[test]
    fn restrict_full_basis_is_identity() {
        let c = catalog::gl_constants(2);
        let b = SubspaceBasis::standard(4, &[0, 1, 2, 3]);
        let restricted = subalgebra_restrict(&c, &b).unwrap();
        assert!(restricted.tensor_eq(&c));
    }

    #[test]
    fn restrict_gl2_upper_corner() {
        // span(E11, E12): [E11, E12] = E12
        let c = catalog::gl_constants(2);
        let b = SubspaceBasis::standard(4, &[0, 1]);
        let restricted = subalgebra_restrict(&c, &b).unwrap();
        assert_eq!(restricted.bracket_basis(0, 1), &[r(0), r(1)]);
        assert!(check_jacobi(&restricted).passed());
    }

    #[test]
    fn restrict_detects_non_subalgebra() {
        // sl_2: span(e, f) fails because [e, f] = h
        let c = catalog::sl_constants(2);
        let b = SubspaceBasis::standard(3, &[0, 2]);
        match subalgebra_restrict(&c, &b) {
            Err(CoreError::NotASubalgebra { i: 0, j: 1 }) => {}
            other => panic!("expected NotASubalgebra, got {other:?}"),
        }
    }

    #[test]
    fn rank_deficient_basis_rejected() {
        let v = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert!(matches!(
            SubspaceBasis::new(v, 2),
            Err(CoreError::RankDeficientBasis)
        ));
    }

    #[test]
    fn splitter_complement_is_greedy() {
        let basis = SubspaceBasis::new(vec![vec![r(1), r(1), r(0)]], 3).unwrap();
        let s = QuotientSplitter::new(&basis).unwrap();
        assert_eq!(s.complement(), &[1, 2]);
        let (alpha, beta) = s.split(&[r(2), r(5), r(7)]);
        assert_eq!(alpha, vec![r(2)]);
        assert_eq!(beta, vec![r(3), r(7)]);
    }
}
