//! Nijenhuis torsion, deformed brackets, bracket pencils, resolvent identity
//! and spectral decompositions of operators on a Lie algebra.

use crate::error::{CoreError, Result};
use crate::lie::{check_jacobi, StructureConstants, SubspaceBasis, ViolationReport};
use crate::linalg::{poly_to_string, rational_roots, Mat};
use crate::rat::Rat;
use serde::Serialize;

/// The torsion tensor of an operator evaluated on basis pairs:
/// `t[i][j] = [Ne_i, Ne_j] - N([Ne_i, e_j] + [e_i, Ne_j]) + N^2 [e_i, e_j]`.
#[derive(Clone, Debug)]
pub struct Torsion {
    dim: usize,
    t: Vec<Vec<Vec<Rat>>>,
}

impl Torsion {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Rat] {
        &self.t[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    /// First basis pair `(i, j)` with nonvanishing torsion, with the index of
    /// the first nonzero component.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if let Some(k) = self.t[i][j].iter().position(|v| !v.is_zero()) {
                    return Some((i, j, k));
                }
            }
        }
        None
    }
}

/// Evaluates the Nijenhuis torsion of `n_op` on all basis pairs.
pub fn torsion(c: &StructureConstants, n_op: &Mat) -> Result<Torsion> {
    let n = c.dim();
    if !n_op.is_square() || n_op.nrows() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: n_op.nrows(),
            context: "operator matrix",
        });
    }
    let cols: Vec<Vec<Rat>> = (0..n).map(|j| n_op.col(j)).collect();
    let n_sq = n_op.matmul(n_op);
    let mut t = vec![vec![vec![Rat::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let a = c.bracket(&cols[i], &cols[j])?;
            let mut b = c.bracket(&cols[i], &e_basis(n, j))?;
            let b2 = c.bracket(&e_basis(n, i), &cols[j])?;
            for (x, y) in b.iter_mut().zip(b2.iter()) {
                *x += y;
            }
            let nb = n_op.apply(&b);
            let n2c = n_sq.apply(c.bracket_basis(i, j));
            let entry: Vec<Rat> = (0..n).map(|k| &(&a[k] - &nb[k]) + &n2c[k]).collect();
            for (k, v) in entry.iter().enumerate() {
                t[j][i][k] = -v;
            }
            t[i][j] = entry;
        }
    }
    Ok(Torsion { dim: n, t })
}

fn e_basis(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

/// `[x, y]_N = [Nx, y] + [x, Ny] - N[x, y]` as a structure-constant tensor.
/// Requires vanishing torsion; see [`deformed_bracket_unchecked`] for the
/// experimental override.
pub fn deformed_bracket(c: &StructureConstants, n_op: &Mat) -> Result<StructureConstants> {
    let t = torsion(c, n_op)?;
    if let Some((i, j, _)) = t.first_nonzero() {
        return Err(CoreError::TorsionNonzero { i, j });
    }
    Ok(deformed_tensor(c, n_op))
}

/// Deformed bracket without the torsion gate. The Jacobi report of the output
/// is returned alongside; the result is experimental whenever it fails.
pub fn deformed_bracket_unchecked(
    c: &StructureConstants,
    n_op: &Mat,
) -> Result<(StructureConstants, ViolationReport)> {
    if !n_op.is_square() || n_op.nrows() != c.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: c.dim(),
            found: n_op.nrows(),
            context: "operator matrix",
        });
    }
    let out = deformed_tensor(c, n_op);
    let report = check_jacobi(&out);
    Ok((out, report))
}

fn deformed_tensor(c: &StructureConstants, n_op: &Mat) -> StructureConstants {
    let n = c.dim();
    let cols: Vec<Vec<Rat>> = (0..n).map(|j| n_op.col(j)).collect();
    let mut out = StructureConstants::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let mut w = c.bracket(&cols[i], &e_basis(n, j)).expect("dims checked");
            let w2 = c.bracket(&e_basis(n, i), &cols[j]).expect("dims checked");
            for (x, y) in w.iter_mut().zip(w2.iter()) {
                *x += y;
            }
            let nw = n_op.apply(c.bracket_basis(i, j));
            for k in 0..n {
                let v = &w[k] - &nw[k];
                out.set_entry(j, i, k, -&v);
                out.set_entry(i, j, k, v);
            }
        }
    }
    out
}

/// How a pencil was produced; recorded in reports and serialized files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilOrigin {
    FromOperator,
    Outer,
    Manual,
}

/// A two-parameter family of Lie brackets `s1 [,] + s2 [,]'` spanned by two
/// compatible structure-constant tensors.
///
/// Compatibility is validated at construction by checking the Jacobi
/// identity at s = (1,0), (0,1), (1,1): the Jacobiator is quadratic in s, so
/// vanishing at these three points forces vanishing identically.
#[derive(Clone, Debug)]
pub struct BracketPencil {
    c1: StructureConstants,
    c2: StructureConstants,
    exceptional: Vec<Rat>,
    origin: PencilOrigin,
    degenerate: bool,
}

impl BracketPencil {
    pub fn new(
        c1: StructureConstants,
        c2: StructureConstants,
        exceptional: Vec<Rat>,
        origin: PencilOrigin,
    ) -> Result<Self> {
        if c1.dim() != c2.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: c1.dim(),
                found: c2.dim(),
                context: "pencil members",
            });
        }
        for (s1, s2) in [(1i64, 0i64), (0, 1), (1, 1)] {
            let member =
                StructureConstants::linear_combo(&Rat::from_int(s1), &c1, &Rat::from_int(s2), &c2)?;
            if !check_jacobi(&member).passed() {
                return Err(CoreError::IncompatiblePencil {
                    s1: Box::new(Rat::from_int(s1)),
                    s2: Box::new(Rat::from_int(s2)),
                });
            }
        }
        let degenerate = proportionality(&c1, &c2).is_some();
        Ok(BracketPencil {
            c1,
            c2,
            exceptional,
            origin,
            degenerate,
        })
    }

    pub fn c1(&self) -> &StructureConstants {
        &self.c1
    }

    pub fn c2(&self) -> &StructureConstants {
        &self.c2
    }

    pub fn dim(&self) -> usize {
        self.c1.dim()
    }

    /// Parameter values at which the member `[,]' - lambda [,]` may fail to
    /// be isomorphic to `[,]` (the operator spectrum for operator pencils).
    pub fn exceptional(&self) -> &[Rat] {
        &self.exceptional
    }

    pub fn origin(&self) -> PencilOrigin {
        self.origin
    }

    /// True when the two tensors are linearly dependent (c2 = t c1, or both
    /// zero), so that all members are proportional.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn member(&self, s1: &Rat, s2: &Rat) -> StructureConstants {
        StructureConstants::linear_combo(s1, &self.c1, s2, &self.c2).expect("dims equal")
    }

    /// The member `[,]' - lambda [,]`, i.e. s = (-lambda, 1).
    pub fn member_for_lambda(&self, lambda: &Rat) -> StructureConstants {
        self.member(&-lambda, &Rat::one())
    }
}

/// `Some(t)` when `c2 = t * c1` (with `c1` nonzero), or `Some(0)` when both
/// tensors vanish.
fn proportionality(c1: &StructureConstants, c2: &StructureConstants) -> Option<Rat> {
    let n = c1.dim();
    let mut ratio: Option<Rat> = None;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = c1.entry(i, j, k);
                let b = c2.entry(i, j, k);
                match (&ratio, a.is_zero()) {
                    (_, true) => {
                        if !b.is_zero() {
                            return None;
                        }
                    }
                    (None, false) => ratio = Some(b / a),
                    (Some(t), false) => {
                        if &(t * a) != b {
                            return None;
                        }
                    }
                }
            }
        }
    }
    Some(ratio.unwrap_or_else(Rat::zero))
}

/// Builds the bracket pencil of a Nijenhuis operator: c1 is the given
/// bracket, c2 its deformation, and the exceptional list is the (rational)
/// spectrum of the operator.
pub fn pencil_of(c: &StructureConstants, n_op: &Mat) -> Result<BracketPencil> {
    let c2 = deformed_bracket(c, n_op)?;
    let spectrum = spectrum_and_eigenspaces(n_op)?;
    let exceptional = spectrum.into_iter().map(|e| e.eigenvalue).collect();
    BracketPencil::new(c.clone(), c2, exceptional, PencilOrigin::FromOperator)
}

/// Checks `(N - lambda)^{-1} [(N - lambda)x, (N - lambda)y] = [x,y]_N - lambda [x,y]`
/// exactly on all basis pairs.
pub fn resolvent_identity_check(c: &StructureConstants, n_op: &Mat, lambda: &Rat) -> Result<bool> {
    let n = c.dim();
    if !n_op.is_square() || n_op.nrows() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: n_op.nrows(),
            context: "operator matrix",
        });
    }
    let mut shift = n_op.clone();
    for i in 0..n {
        shift[(i, i)] = &shift[(i, i)] - lambda;
    }
    let inv = shift.inverse().ok_or_else(|| CoreError::SingularShift {
        lambda: Box::new(lambda.clone()),
    })?;
    let deformed = deformed_tensor(c, n_op);
    for i in 0..n {
        for j in i + 1..n {
            let lhs = inv.apply(&c.bracket(&shift.col(i), &shift.col(j))?);
            let rhs: Vec<Rat> = (0..n)
                .map(|k| deformed.entry(i, j, k) - &(lambda * c.entry(i, j, k)))
                .collect();
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A generalized eigenspace of an operator.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenspace {
    pub eigenvalue: Rat,
    pub basis: SubspaceBasis,
    /// Smallest power at which the image of `N - lambda` stabilizes; 1 for
    /// an honest eigenspace.
    pub riesz_index: usize,
}

/// Eigenvalues, generalized eigenspaces and Riesz indices of an operator
/// whose characteristic polynomial splits over Q.
pub fn spectrum_and_eigenspaces(n_op: &Mat) -> Result<Vec<Eigenspace>> {
    let n = n_op.nrows();
    assert!(n_op.is_square(), "spectrum of a non-square matrix");
    if n == 0 {
        return Ok(Vec::new());
    }
    let poly = n_op.char_poly();
    let (roots, remaining) = rational_roots(&poly)?;
    if let Some(rest) = remaining {
        return Err(CoreError::IrrationalSpectrum {
            factor: poly_to_string(&rest),
        });
    }
    let mut out = Vec::new();
    for (lambda, mult) in roots {
        let mut shift = n_op.clone();
        for i in 0..n {
            shift[(i, i)] = &shift[(i, i)] - &lambda;
        }
        let mut power = shift.clone();
        let mut riesz = 1;
        loop {
            let kernel = power.nullspace();
            if kernel.len() == mult {
                let basis = SubspaceBasis::new(kernel, n)?;
                out.push(Eigenspace {
                    eigenvalue: lambda.clone(),
                    basis,
                    riesz_index: riesz,
                });
                break;
            }
            power = power.matmul(&shift);
            riesz += 1;
        }
    }
    Ok(out)
}

/// Constructs the diagonalizable operator acting as `eigenvalues[i]` on
/// `parts[i]`, after validating that every pairwise sum of parts is a
/// subalgebra; such an operator has vanishing torsion, which is asserted.
pub fn operator_from_decomposition(
    c: &StructureConstants,
    parts: &[SubspaceBasis],
    eigenvalues: &[Rat],
) -> Result<Mat> {
    let n = c.dim();
    if parts.len() != eigenvalues.len() {
        return Err(CoreError::DimensionMismatch {
            expected: parts.len(),
            found: eigenvalues.len(),
            context: "eigenvalue list",
        });
    }
    for (i, a) in eigenvalues.iter().enumerate() {
        for b in eigenvalues.iter().skip(i + 1) {
            if a == b {
                return Err(CoreError::DuplicateEigenvalue {
                    lambda: Box::new(a.clone()),
                });
            }
        }
    }
    let total: usize = parts.iter().map(SubspaceBasis::dim).sum();
    if total != n {
        return Err(CoreError::NotDirectSum);
    }
    let mut all: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for p in parts {
        if p.ambient_dim() != n {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                found: p.ambient_dim(),
                context: "decomposition part",
            });
        }
        all.extend(p.vectors().iter().cloned());
    }
    let combined = SubspaceBasis::new(all, n).map_err(|_| CoreError::NotDirectSum)?;

    for i in 0..parts.len() {
        for j in i..parts.len() {
            let mut span = parts[i].vectors().to_vec();
            if j != i {
                span.extend(parts[j].vectors().iter().cloned());
            }
            let basis = SubspaceBasis::new(span, n).map_err(|_| CoreError::NotDirectSum)?;
            if let Err(CoreError::NotASubalgebra { i: vi, j: vj }) =
                crate::lie::subalgebra_closure_check(c, &basis)
            {
                return Err(CoreError::PairwiseSumNotSubalgebra { i, j, vi, vj });
            }
        }
    }

    let mut k = Mat::zeros(n, n);
    let mut diag = Vec::with_capacity(n);
    let mut col = 0;
    for (p, lambda) in parts.iter().zip(eigenvalues) {
        for v in p.vectors() {
            for (row, x) in v.iter().enumerate() {
                k[(row, col)] = x.clone();
            }
            diag.push(lambda.clone());
            col += 1;
        }
    }
    let _ = combined;
    let k_inv = k.inverse().ok_or(CoreError::NotDirectSum)?;
    let n_op = k.matmul(&Mat::diagonal(&diag)).matmul(&k_inv);

    let t = torsion(c, &n_op)?;
    assert!(
        t.is_zero(),
        "operator from a pairwise-closed decomposition must have zero torsion"
    );
    Ok(n_op)
}

/// Canonical basis of `im(N - lambda)`, verified to be bracket-closed.
pub fn image_subalgebra(c: &StructureConstants, n_op: &Mat, lambda: &Rat) -> Result<SubspaceBasis> {
    let n = c.dim();
    if !n_op.is_square() || n_op.nrows() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: n_op.nrows(),
            context: "operator matrix",
        });
    }
    let mut shift = n_op.clone();
    for i in 0..n {
        shift[(i, i)] = &shift[(i, i)] - lambda;
    }
    let basis = SubspaceBasis::new(shift.column_space_basis(), n)?;
    crate::lie::subalgebra_closure_check(c, &basis)?;
    Ok(basis)
}

/// `(s1 N + s2 Id)(s3 N + s4 Id)^{-1}`. The result is not assumed Nijenhuis;
/// callers re-run [`torsion`] to confirm.
pub fn linear_fractional(n_op: &Mat, s: (&Rat, &Rat, &Rat, &Rat)) -> Result<Mat> {
    let n = n_op.nrows();
    let (s1, s2, s3, s4) = s;
    let numer = n_op.scale(s1).add(&Mat::identity(n).scale(s2));
    let denom = n_op.scale(s3).add(&Mat::identity(n).scale(s4));
    let inv = denom.inverse().ok_or(CoreError::SingularDenominator)?;
    Ok(numer.matmul(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn torsion_vanishes_on_abelian() {
        let c = StructureConstants::zero(3);
        let n_op = Mat::from_rows(vec![
            vec![r(1), r(2), r(0)],
            vec![r(0), r(5), r(7)],
            vec![r(1), r(1), r(1)],
        ]);
        assert!(torsion(&c, &n_op).unwrap().is_zero());
    }

    #[test]
    fn left_multiplication_is_nijenhuis() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        assert!(torsion(&c, &n_op).unwrap().is_zero());
    }

    #[test]
    fn swap_operator_on_sl2_has_torsion() {
        // N(e) = f, N(f) = e, N(h) = 0:
        // T(e, h) = -N[f, h] + N^2[e, h] = -2e - 2e = -4e
        // T(e, f) = [f, e] = -h
        let c = catalog::sl_constants(2);
        let mut n_op = Mat::zeros(3, 3);
        n_op[(2, 0)] = r(1);
        n_op[(0, 2)] = r(1);
        let t = torsion(&c, &n_op).unwrap();
        assert_eq!(t.first_nonzero(), Some((0, 1, 0)));
        assert_eq!(t.entry(0, 1), &[r(-4), r(0), r(0)]);
        assert_eq!(t.entry(0, 2), &[r(0), r(-1), r(0)]);
    }

    #[test]
    fn lowering_operator_on_sl2_is_nijenhuis() {
        // N(e) = f, N(f) = N(h) = 0 has zero torsion: every term either
        // lands in the kernel of N or cancels.
        let c = catalog::sl_constants(2);
        let mut n_op = Mat::zeros(3, 3);
        n_op[(2, 0)] = r(1);
        assert!(torsion(&c, &n_op).unwrap().is_zero());
    }

    #[test]
    fn deformed_bracket_identity_and_zero() {
        let c = catalog::sl_constants(2);
        let id = Mat::identity(3);
        assert!(deformed_bracket(&c, &id).unwrap().tensor_eq(&c));
        let zero = Mat::zeros(3, 3);
        assert!(deformed_bracket(&c, &zero).unwrap().is_zero());
    }

    #[test]
    fn deformed_bracket_of_left_multiplication() {
        // [x, y]_{L_A} = xAy - yAx, checked entrywise on gl_2
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let deformed = deformed_bracket(&c, &n_op).unwrap();
        let direct = catalog::twisted_commutator_constants(
            &catalog::gl_basis_matrices(2),
            &Mat::diagonal(&[r(1), r(2)]),
        )
        .unwrap();
        assert!(deformed.tensor_eq(&direct));
    }

    #[test]
    fn deformed_bracket_rejects_torsion() {
        let c = catalog::sl_constants(2);
        let mut n_op = Mat::zeros(3, 3);
        n_op[(2, 0)] = r(1);
        n_op[(0, 2)] = r(1);
        assert!(matches!(
            deformed_bracket(&c, &n_op),
            Err(CoreError::TorsionNonzero { i: 0, j: 1 })
        ));
        // forcing past the gate: this particular operator is weak Nijenhuis,
        // its deformed bracket still satisfies Jacobi
        let (forced, report) = deformed_bracket_unchecked(&c, &n_op).unwrap();
        assert_eq!(forced.bracket_basis(0, 1), &[r(0), r(0), r(4)]);
        assert_eq!(forced.bracket_basis(1, 2), &[r(4), r(0), r(0)]);
        assert!(report.passed());
    }

    #[test]
    fn pencil_of_borel_projector() {
        let (c, n_op) = catalog::borel_projector(2, &r(1), &r(-1)).unwrap();
        let p = pencil_of(&c, &n_op).unwrap();
        assert_eq!(p.exceptional(), &[r(-1), r(1)]);
        assert!(!p.is_degenerate());
    }

    #[test]
    fn pencil_of_left_mult_and_identity() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let p = pencil_of(&c, &n_op).unwrap();
        assert_eq!(p.exceptional(), &[r(1), r(2)]);

        let degenerate = pencil_of(&c, &Mat::identity(4)).unwrap();
        assert_eq!(degenerate.exceptional(), &[r(1)]);
        assert!(degenerate.is_degenerate());
        assert!(degenerate.c2().tensor_eq(&c));
    }

    #[test]
    fn resolvent_identity_examples() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        assert!(resolvent_identity_check(&c, &n_op, &r(3)).unwrap());
        assert!(matches!(
            resolvent_identity_check(&c, &n_op, &r(1)),
            Err(CoreError::SingularShift { .. })
        ));
        let (c, n_op) = catalog::borel_projector(2, &r(1), &r(-1)).unwrap();
        assert!(resolvent_identity_check(&c, &n_op, &r(0)).unwrap());
    }

    #[test]
    fn spectrum_of_diagonal_and_jordan() {
        let d = Mat::diagonal(&[r(1), r(1), r(2)]);
        let spec = spectrum_and_eigenspaces(&d).unwrap();
        assert_eq!(spec.len(), 2);
        assert_eq!(spec[0].eigenvalue, r(1));
        assert_eq!(spec[0].basis.dim(), 2);
        assert_eq!(spec[0].riesz_index, 1);
        assert_eq!(spec[1].eigenvalue, r(2));
        assert_eq!(spec[1].basis.dim(), 1);

        let mut jordan = Mat::zeros(2, 2);
        jordan[(0, 1)] = r(1);
        let spec = spectrum_and_eigenspaces(&jordan).unwrap();
        assert_eq!(spec.len(), 1);
        assert_eq!(spec[0].eigenvalue, r(0));
        assert_eq!(spec[0].basis.dim(), 2);
        assert_eq!(spec[0].riesz_index, 2);
        // the shift is nilpotent on the eigenspace of order exactly riesz
        let shifted = jordan.clone(); // eigenvalue 0
        for v in spec[0].basis.vectors() {
            assert!(shifted.pow(2).apply(v).iter().all(Rat::is_zero));
        }
        assert!(spec[0]
            .basis
            .vectors()
            .iter()
            .any(|v| !shifted.apply(v).iter().all(Rat::is_zero)));
    }

    #[test]
    fn spectrum_rejects_irrational() {
        let mut rot = Mat::zeros(2, 2);
        rot[(0, 1)] = r(-1);
        rot[(1, 0)] = r(1);
        match spectrum_and_eigenspaces(&rot) {
            Err(CoreError::IrrationalSpectrum { factor }) => {
                assert!(factor.contains("x^2"));
            }
            other => panic!("expected IrrationalSpectrum, got {other:?}"),
        }
    }

    #[test]
    fn left_mult_eigenspaces_are_row_supported() {
        let (_, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let spec = spectrum_and_eigenspaces(&n_op).unwrap();
        assert_eq!(spec.len(), 2);
        // basis order E11, E12, E21, E22: eigenvalue 1 on the first row
        assert_eq!(spec[0].eigenvalue, r(1));
        assert_eq!(
            spec[0].basis.vectors(),
            &[vec![r(1), r(0), r(0), r(0)], vec![r(0), r(1), r(0), r(0)],]
        );
        assert_eq!(spec[1].eigenvalue, r(2));
        assert_eq!(spec[1].basis.dim(), 2);
        assert!(spec.iter().all(|e| e.riesz_index == 1));
    }

    #[test]
    fn operator_from_decomposition_roundtrip() {
        let c = catalog::sl_constants(2);
        // single part: N = lambda Id
        let whole = SubspaceBasis::standard(3, &[0, 1, 2]);
        let n_op = operator_from_decomposition(&c, &[whole], &[r(5)]).unwrap();
        assert_eq!(n_op, Mat::identity(3).scale(&r(5)));

        // Borel split of sl_2
        let lower = SubspaceBasis::standard(3, &[2]);
        let upper = SubspaceBasis::standard(3, &[0, 1]);
        let n_op = operator_from_decomposition(&c, &[lower, upper], &[r(1), r(-1)]).unwrap();
        let (_, expected) = catalog::borel_projector(2, &r(1), &r(-1)).unwrap();
        assert_eq!(n_op, expected);
        let spec = spectrum_and_eigenspaces(&n_op).unwrap();
        assert_eq!(spec.len(), 2);
        assert_eq!(spec[0].basis.dim() + spec[1].basis.dim(), 3);
    }

    #[test]
    fn operator_from_decomposition_rejects_bad_pairs() {
        let c = catalog::sl_constants(2);
        let parts = [
            SubspaceBasis::standard(3, &[0]), // e
            SubspaceBasis::standard(3, &[2]), // f
            SubspaceBasis::standard(3, &[1]), // h
        ];
        match operator_from_decomposition(&c, &parts, &[r(1), r(2), r(3)]) {
            Err(CoreError::PairwiseSumNotSubalgebra { i: 0, j: 1, .. }) => {}
            other => panic!("expected PairwiseSumNotSubalgebra, got {other:?}"),
        }
        assert!(matches!(
            operator_from_decomposition(
                &c,
                &[
                    SubspaceBasis::standard(3, &[0, 1]),
                    SubspaceBasis::standard(3, &[2])
                ],
                &[r(1), r(1)]
            ),
            Err(CoreError::DuplicateEigenvalue { .. })
        ));
    }

    #[test]
    fn image_subalgebra_examples() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        // non-spectral shift: whole algebra
        let whole = image_subalgebra(&c, &n_op, &r(7)).unwrap();
        assert_eq!(whole.dim(), 4);
        // lambda = 1: matrices with zero first row
        let img = image_subalgebra(&c, &n_op, &r(1)).unwrap();
        assert_eq!(img.vectors(), catalog::zero_row_subalgebra(2, 0).vectors());

        let (c, n_op) = catalog::borel_projector(2, &r(1), &r(-1)).unwrap();
        // lambda = 1 kills the lower part, leaving the Borel span(e, h)
        let img = image_subalgebra(&c, &n_op, &r(1)).unwrap();
        assert_eq!(img.vectors(), SubspaceBasis::standard(3, &[0, 1]).vectors());
    }

    #[test]
    fn linear_fractional_edge_cases() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let same = linear_fractional(&n_op, (&r(1), &r(0), &r(0), &r(1))).unwrap();
        assert_eq!(same, n_op);
        let id = linear_fractional(&n_op, (&r(0), &r(1), &r(0), &r(1))).unwrap();
        assert_eq!(id, Mat::identity(4));
        // (N + Id)(N - 3Id)^{-1} is again Nijenhuis here
        let lf = linear_fractional(&n_op, (&r(1), &r(1), &r(1), &r(-3))).unwrap();
        assert!(torsion(&c, &lf).unwrap().is_zero());
        // denominator with eigenvalue hit
        assert!(matches!(
            linear_fractional(&n_op, (&r(1), &r(0), &r(1), &r(-1))),
            Err(CoreError::SingularDenominator)
        ));
    }
}
