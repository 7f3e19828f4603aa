//! Constructors for the stock algebras, operators and pencils used by the
//! CLI and the test suites: gl/sl/so in elementary-matrix bases, left
//! multiplication operators, Borel projectors, and outer pencils on matrix
//! subalgebras cut out by an involution.

use crate::error::{CoreError, Result};
use crate::lie::{check_jacobi, QuotientSplitter, StructureConstants, SubspaceBasis};
use crate::linalg::Mat;
use crate::nijenhuis::{pencil_of, torsion, BracketPencil, PencilOrigin};
use crate::rat::Rat;

/// A named construction together with everything it builds.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub params: String,
    pub algebra: StructureConstants,
    pub operator: Option<Mat>,
    pub pencil: Option<BracketPencil>,
    /// Matrix realization of the basis when the entry is a matrix algebra.
    pub basis_matrices: Option<Vec<Mat>>,
}

/// Optional parameters for [`build`]. Unused fields are ignored by entries
/// that do not consume them.
#[derive(Clone, Debug, Default)]
pub struct CatalogParams {
    pub n: Option<usize>,
    /// Diagonal of the multiplier matrix A.
    pub a_diag: Option<Vec<Rat>>,
    pub lambda1: Option<Rat>,
    pub lambda2: Option<Rat>,
    /// The form I cutting out `g_I` (outer pencil); identity by default.
    pub form: Option<Mat>,
    /// The matrix J of the involution `B -> J B^T J^{-1}`; transpose by default.
    pub involution: Option<Mat>,
}

pub fn list() -> &'static [(&'static str, &'static str)] {
    &[
        ("gl", "gl(n) in the elementary-matrix basis"),
        ("sl", "sl(n): off-diagonal E_ab plus H_i = E_ii - E_{i+1,i+1}"),
        ("so", "so(n): basis E_ij - E_ji, i < j"),
        (
            "left_mult",
            "gl(n) with the left-multiplication operator by diag(a1..an); builds the pencil",
        ),
        (
            "borel_projector",
            "sl(n) with the operator lambda1 on the lower triangle, lambda2 on the Borel; builds the pencil",
        ),
        (
            "sl2_projector",
            "sl(2) with the projector onto the lower triangle along the Borel; builds the pencil",
        ),
        (
            "outer_pencil",
            "g_I = {B : BI + I B* = 0} with the commutator and B A C - C A B brackets; builds the pencil",
        ),
    ]
}

/// Builds a catalog entry by name. Every built object is validated (Jacobi,
/// torsion, pencil compatibility) before being returned.
pub fn build(name: &str, params: &CatalogParams) -> Result<CatalogEntry> {
    let need_n = || {
        params.n.ok_or(CoreError::InvalidParameter {
            message: format!("entry `{name}` requires n"),
        })
    };
    let entry = match name {
        "gl" => {
            let n = need_n()?;
            CatalogEntry {
                name: name.into(),
                params: format!("n={n}"),
                algebra: gl_constants(n),
                operator: None,
                pencil: None,
                basis_matrices: Some(gl_basis_matrices(n)),
            }
        }
        "sl" => {
            let n = need_n()?;
            CatalogEntry {
                name: name.into(),
                params: format!("n={n}"),
                algebra: sl_constants(n),
                operator: None,
                pencil: None,
                basis_matrices: Some(sl_basis_matrices(n)),
            }
        }
        "so" => {
            let n = need_n()?;
            CatalogEntry {
                name: name.into(),
                params: format!("n={n}"),
                algebra: so_constants(n)?,
                operator: None,
                pencil: None,
                basis_matrices: Some(so_basis_matrices(n)),
            }
        }
        "left_mult" => {
            let n = need_n()?;
            let diag = default_diag(params, n);
            let (algebra, op) = left_mult(n, &diag)?;
            let pencil = pencil_of(&algebra, &op)?;
            CatalogEntry {
                name: name.into(),
                params: format!("n={n}, A=diag({})", join(&diag)),
                algebra,
                operator: Some(op),
                pencil: Some(pencil),
                basis_matrices: Some(gl_basis_matrices(n)),
            }
        }
        "borel_projector" => {
            let n = need_n()?;
            let l1 = params.lambda1.clone().unwrap_or_else(Rat::one);
            let l2 = params.lambda2.clone().unwrap_or_else(|| -Rat::one());
            let (algebra, op) = borel_projector(n, &l1, &l2)?;
            let pencil = pencil_of(&algebra, &op)?;
            CatalogEntry {
                name: name.into(),
                params: format!("n={n}, lambda=({l1}, {l2})"),
                algebra,
                operator: Some(op),
                pencil: Some(pencil),
                basis_matrices: Some(sl_basis_matrices(n)),
            }
        }
        "sl2_projector" => {
            let (algebra, op) = borel_projector(2, &Rat::one(), &Rat::zero())?;
            let pencil = pencil_of(&algebra, &op)?;
            CatalogEntry {
                name: name.into(),
                params: "n=2, lambda=(1, 0)".into(),
                algebra,
                operator: Some(op),
                pencil: Some(pencil),
                basis_matrices: Some(sl_basis_matrices(2)),
            }
        }
        "outer_pencil" => {
            let n = need_n()?;
            let diag = default_diag(params, n);
            let form = params.form.clone().unwrap_or_else(|| Mat::identity(n));
            return outer_pencil(n, &diag, &form, params.involution.as_ref());
        }
        _ => {
            return Err(CoreError::UnknownCatalogEntry { name: name.into() });
        }
    };
    validate_entry(&entry)?;
    Ok(entry)
}

fn validate_entry(entry: &CatalogEntry) -> Result<()> {
    if !check_jacobi(&entry.algebra).passed() {
        return Err(CoreError::InvalidParameter {
            message: format!("catalog entry `{}` failed the Jacobi validator", entry.name),
        });
    }
    if let Some(op) = &entry.operator {
        if !torsion(&entry.algebra, op)?.is_zero() {
            return Err(CoreError::InvalidParameter {
                message: format!("catalog entry `{}` has nonzero torsion", entry.name),
            });
        }
    }
    Ok(())
}

fn default_diag(params: &CatalogParams, n: usize) -> Vec<Rat> {
    params
        .a_diag
        .clone()
        .unwrap_or_else(|| (1..=n as i64).map(Rat::from_int).collect())
}

fn join(v: &[Rat]) -> String {
    v.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `vec(M)` in row-major order, matching the gl basis E11, E12, ..., Enn.
fn vectorize(m: &Mat) -> Vec<Rat> {
    let n = m.nrows();
    let mut v = Vec::with_capacity(n * n);
    for i in 0..n {
        v.extend(m.row(i).iter().cloned());
    }
    v
}

fn unvectorize(v: &[Rat], n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| v[i * n + j].clone())
}

/// Structure constants of the commutator on the span of the given matrices.
/// Fails if the span is not bracket-closed.
pub fn commutator_constants_from_matrices(basis: &[Mat]) -> Result<StructureConstants> {
    constants_from_product(basis, |x, y| x.matmul(y).sub(&y.matmul(x)))
}

/// Structure constants of `[B, C]_A = BAC - CAB` on the span of the given
/// matrices. Fails if the span is not closed.
pub fn twisted_commutator_constants(basis: &[Mat], a: &Mat) -> Result<StructureConstants> {
    constants_from_product(basis, |x, y| {
        x.matmul(a).matmul(y).sub(&y.matmul(a).matmul(x))
    })
}

fn constants_from_product(
    basis: &[Mat],
    bracket: impl Fn(&Mat, &Mat) -> Mat,
) -> Result<StructureConstants> {
    let m = basis.len();
    if m == 0 {
        return Ok(StructureConstants::zero(0));
    }
    let n = basis[0].nrows();
    let vectors: Vec<Vec<Rat>> = basis.iter().map(vectorize).collect();
    let sub = SubspaceBasis::new(vectors, n * n)?;
    let splitter = QuotientSplitter::new(&sub)?;
    let mut out = StructureConstants::zero(m);
    for i in 0..m {
        for j in i + 1..m {
            let w = vectorize(&bracket(&basis[i], &basis[j]));
            let (alpha, beta) = splitter.split(&w);
            if beta.iter().any(|b| !b.is_zero()) {
                return Err(CoreError::NotASubalgebra { i, j });
            }
            for (k, v) in alpha.into_iter().enumerate() {
                out.set_entry(j, i, k, -&v);
                out.set_entry(i, j, k, v);
            }
        }
    }
    Ok(out)
}

pub fn gl_basis_matrices(n: usize) -> Vec<Mat> {
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut m = Mat::zeros(n, n);
            m[(a, b)] = Rat::one();
            out.push(m);
        }
    }
    out
}

/// gl(n) commutator constants: `[E_ab, E_cd] = d_bc E_ad - d_da E_cb`.
pub fn gl_constants(n: usize) -> StructureConstants {
    let mut c = StructureConstants::zero(n * n);
    let idx = |a: usize, b: usize| a * n + b;
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    let i = idx(a, b);
                    let j = idx(cc, d);
                    if i >= j {
                        continue;
                    }
                    let mut coeffs: Vec<(usize, Rat)> = Vec::new();
                    if b == cc {
                        coeffs.push((idx(a, d), Rat::one()));
                    }
                    if d == a {
                        let target = idx(cc, b);
                        match coeffs.iter_mut().find(|(k, _)| *k == target) {
                            Some((_, v)) => *v -= Rat::one(),
                            None => coeffs.push((target, -Rat::one())),
                        }
                    }
                    let coeffs: Vec<(usize, Rat)> =
                        coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                    c.set_bracket(i, j, &coeffs);
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            labels.push(format!("E{}{}", a + 1, b + 1));
        }
    }
    c.set_labels(labels);
    c
}

/// sl(n) basis: upper E_ab (a < b, lex), then H_i = E_ii - E_{i+1,i+1},
/// then lower E_ab (a > b, lex). For n = 2 this is the standard (e, h, f).
pub fn sl_basis_matrices(n: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a < b {
                let mut m = Mat::zeros(n, n);
                m[(a, b)] = Rat::one();
                out.push(m);
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        let mut m = Mat::zeros(n, n);
        m[(i, i)] = Rat::one();
        m[(i + 1, i + 1)] = -Rat::one();
        out.push(m);
    }
    for a in 0..n {
        for b in 0..n {
            if a > b {
                let mut m = Mat::zeros(n, n);
                m[(a, b)] = Rat::one();
                out.push(m);
            }
        }
    }
    out
}

fn sl_labels(n: usize) -> Vec<String> {
    let mut labels = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a < b {
                labels.push(format!("E{}{}", a + 1, b + 1));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        labels.push(format!("H{}", i + 1));
    }
    for a in 0..n {
        for b in 0..n {
            if a > b {
                labels.push(format!("E{}{}", a + 1, b + 1));
            }
        }
    }
    labels
}

pub fn sl_constants(n: usize) -> StructureConstants {
    let mut c =
        commutator_constants_from_matrices(&sl_basis_matrices(n)).expect("sl(n) is bracket-closed");
    c.set_labels(sl_labels(n));
    c
}

pub fn so_basis_matrices(n: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = Mat::zeros(n, n);
            m[(i, j)] = Rat::one();
            m[(j, i)] = -Rat::one();
            out.push(m);
        }
    }
    out
}

pub fn so_constants(n: usize) -> Result<StructureConstants> {
    let mut c = commutator_constants_from_matrices(&so_basis_matrices(n))?;
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            labels.push(format!("A{}{}", i + 1, j + 1));
        }
    }
    c.set_labels(labels);
    Ok(c)
}

/// The coordinate subalgebra of gl(n) of matrices whose `row`-th row is zero.
pub fn zero_row_subalgebra(n: usize, row: usize) -> SubspaceBasis {
    let indices: Vec<usize> = (0..n * n).filter(|i| i / n != row).collect();
    SubspaceBasis::standard(n * n, &indices)
}

/// In the sl basis ordering: indices of the Borel part (uppers and Cartan).
pub fn borel_indices(n: usize) -> Vec<usize> {
    (0..(n * (n - 1) / 2 + n - 1)).collect()
}

/// In the sl basis ordering: indices of the strictly lower triangular part.
pub fn lower_indices(n: usize) -> Vec<usize> {
    let dim = n * n - 1;
    ((n * (n - 1) / 2 + n - 1)..dim).collect()
}

pub fn borel_subspace(n: usize) -> SubspaceBasis {
    SubspaceBasis::standard(n * n - 1, &borel_indices(n))
}

pub fn lower_subspace(n: usize) -> SubspaceBasis {
    SubspaceBasis::standard(n * n - 1, &lower_indices(n))
}

/// gl(n) with the operator of left multiplication by `diag(a)`.
pub fn left_mult(n: usize, a_diag: &[Rat]) -> Result<(StructureConstants, Mat)> {
    if a_diag.len() != n {
        return Err(CoreError::InvalidParameter {
            message: format!(
                "left_mult: diagonal has length {}, expected {n}",
                a_diag.len()
            ),
        });
    }
    let c = gl_constants(n);
    // L_A E_ab = a_a E_ab: diagonal in the elementary basis
    let entries: Vec<Rat> = (0..n * n).map(|i| a_diag[i / n].clone()).collect();
    Ok((c, Mat::diagonal(&entries)))
}

/// sl(n) with the operator `lambda1` on the strictly lower triangular part
/// and `lambda2` on the Borel part.
pub fn borel_projector(
    n: usize,
    lambda1: &Rat,
    lambda2: &Rat,
) -> Result<(StructureConstants, Mat)> {
    if n < 2 {
        return Err(CoreError::InvalidParameter {
            message: "borel_projector requires n >= 2".into(),
        });
    }
    let c = sl_constants(n);
    let dim = n * n - 1;
    let lower = lower_indices(n);
    let entries: Vec<Rat> = (0..dim)
        .map(|i| {
            if lower.contains(&i) {
                lambda1.clone()
            } else {
                lambda2.clone()
            }
        })
        .collect();
    Ok((c, Mat::diagonal(&entries)))
}

/// The subalgebra `g_I = {B : BI + I B* = 0}` with its two compatible
/// brackets `[ , ]` and `[B, C]_A = BAC - CAB`.
fn outer_pencil(
    n: usize,
    a_diag: &[Rat],
    form: &Mat,
    involution: Option<&Mat>,
) -> Result<CatalogEntry> {
    if a_diag.len() != n {
        return Err(CoreError::InvalidParameter {
            message: format!(
                "outer_pencil: diagonal has length {}, expected {n}",
                a_diag.len()
            ),
        });
    }
    if form.nrows() != n || form.ncols() != n {
        return Err(CoreError::InvalidParameter {
            message: "outer_pencil: form matrix has wrong size".into(),
        });
    }
    let j = involution.cloned().unwrap_or_else(|| Mat::identity(n));
    let j_inv = j.inverse().ok_or(CoreError::InvalidParameter {
        message: "outer_pencil: involution matrix is singular".into(),
    })?;
    let star = |b: &Mat| j.matmul(&b.transpose()).matmul(&j_inv);

    // The involution must be involutive; antihomomorphy (AB)* = B*A* is then
    // automatic for B -> J B^T J^{-1}.
    for e in gl_basis_matrices(n) {
        if star(&star(&e)) != e {
            return Err(CoreError::InvalidParameter {
                message: "outer_pencil: J does not define an involution (J^T must be ±J)".into(),
            });
        }
    }

    let a = Mat::diagonal(a_diag);
    if a.matmul(form) != form.matmul(&star(&a)) {
        return Err(CoreError::InvalidParameter {
            message: "outer_pencil: A is not in h_I (requires A I = I A*)".into(),
        });
    }

    // g_I is the kernel of B -> B I + I B*.
    let elementary = gl_basis_matrices(n);
    let columns: Vec<Vec<Rat>> = elementary
        .iter()
        .map(|e| vectorize(&e.matmul(form).add(&form.matmul(&star(e)))))
        .collect();
    let constraint = Mat::from_fn(n * n, n * n, |row, col| columns[col][row].clone());
    let kernel = constraint.nullspace();
    let basis_matrices: Vec<Mat> = kernel.iter().map(|v| unvectorize(v, n)).collect();

    let c1 = commutator_constants_from_matrices(&basis_matrices)?;
    let c2 = twisted_commutator_constants(&basis_matrices, &a)?;
    let mut exceptional: Vec<Rat> = Vec::new();
    for v in a_diag {
        if !exceptional.contains(v) {
            exceptional.push(v.clone());
        }
    }
    exceptional.sort();
    let pencil = BracketPencil::new(c1.clone(), c2, exceptional, PencilOrigin::Outer)?;

    let entry = CatalogEntry {
        name: "outer_pencil".into(),
        params: format!("n={n}, A=diag({})", join(a_diag)),
        algebra: c1,
        operator: None,
        pencil: Some(pencil),
        basis_matrices: Some(basis_matrices),
    };
    validate_entry(&entry)?;
    Ok(entry)
}
