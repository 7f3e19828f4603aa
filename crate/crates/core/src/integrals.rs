//! Polynomial first integrals of bracket pencils: trace families, resolvent
//! expansions, involutivity, the recursion relations between the two matrix
//! families, completeness of differentials and span comparison.

use crate::error::{CoreError, Result};
use crate::lie::{algebra_index_stable, StructureConstants};
use crate::linalg::Mat;
use crate::nijenhuis::{torsion, BracketPencil};
use crate::poly::MultiPoly;
use crate::rat::Rat;
use crate::sample::{sample_vector, PointSamplerConfig};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Manakov,
    Resolvent,
    Borel,
    CasimirExpansion,
    Manual,
}

impl Provenance {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "manakov" => Some(Provenance::Manakov),
            "resolvent" => Some(Provenance::Resolvent),
            "borel" => Some(Provenance::Borel),
            "casimir-expansion" => Some(Provenance::CasimirExpansion),
            "manual" => Some(Provenance::Manual),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub name: String,
    pub k: usize,
    pub l: usize,
    pub poly: MultiPoly,
}

/// An indexed family of polynomial functions on the dual space.
#[derive(Clone, Debug)]
pub struct IntegralFamily {
    nvars: usize,
    provenance: Provenance,
    members: Vec<FamilyMember>,
    warnings: Vec<String>,
}

impl IntegralFamily {
    pub fn new(nvars: usize, provenance: Provenance, members: Vec<FamilyMember>) -> Result<Self> {
        for (i, m) in members.iter().enumerate() {
            if m.poly.nvars() != nvars {
                return Err(CoreError::DimensionMismatch {
                    expected: nvars,
                    found: m.poly.nvars(),
                    context: "family member variables",
                });
            }
            if members[..i].iter().any(|other| other.name == m.name) {
                return Err(CoreError::InvalidParameter {
                    message: format!("duplicate family member name `{}`", m.name),
                });
            }
            if matches!(provenance, Provenance::Manakov | Provenance::Resolvent) && m.l + 1 > m.k {
                return Err(CoreError::InvalidParameter {
                    message: format!("member `{}` violates l <= k-1", m.name),
                });
            }
        }
        Ok(IntegralFamily {
            nvars,
            provenance,
            members,
            warnings: Vec::new(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn members(&self) -> &[FamilyMember] {
        self.members.as_slice()
    }

    pub fn member(&self, name: &str) -> Option<&FamilyMember> {
        self.members.iter().find(|m| m.name == name)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn push_warning(&mut self, w: String) {
        self.warnings.push(w);
    }
}

/// `sum_k c[i][j][k] xi_k` as a linear polynomial.
fn linear_factor(c: &StructureConstants, i: usize, j: usize) -> MultiPoly {
    let n = c.dim();
    let mut p = MultiPoly::zero(n);
    for (k, ck) in c.bracket_basis(i, j).iter().enumerate() {
        if !ck.is_zero() {
            let mut exps = vec![0; n];
            exps[k] = 1;
            p.add_term(exps, ck);
        }
    }
    p
}

/// The Lie–Poisson bracket of two polynomial functions:
/// `{f, g}(xi) = sum_{i,j,k} c[i][j][k] xi_k (d_i f)(d_j g)`.
pub fn poisson_bracket_constants(
    c: &StructureConstants,
    f: &MultiPoly,
    g: &MultiPoly,
) -> Result<MultiPoly> {
    let n = c.dim();
    if f.nvars() != n || g.nvars() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: f.nvars().max(g.nvars()),
            context: "polynomial variables",
        });
    }
    let df: Vec<MultiPoly> = (0..n).map(|i| f.partial(i)).collect();
    let dg: Vec<MultiPoly> = (0..n).map(|j| g.partial(j)).collect();
    let mut acc = MultiPoly::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let factor = linear_factor(c, i, j);
            if factor.is_zero() {
                continue;
            }
            let cross = df[i].mul(&dg[j]).sub(&df[j].mul(&dg[i]));
            if !cross.is_zero() {
                acc = acc.add(&factor.mul(&cross));
            }
        }
    }
    Ok(acc)
}

/// Bracket of `f, g` under the pencil member `s1 c1 + s2 c2`.
pub fn poisson_bracket_poly(
    p: &BracketPencil,
    s: (&Rat, &Rat),
    f: &MultiPoly,
    g: &MultiPoly,
) -> Result<MultiPoly> {
    let member = p.member(s.0, s.1);
    poisson_bracket_constants(&member, f, g)
}

/// The Hamiltonian vector field of `f`: `field_j = sum_{i,k} c[i][j][k] xi_k (d_i f)`,
/// so that `sum_j field_j (d_j g) = {f, g}` exactly.
pub fn hamiltonian_field_constants(
    c: &StructureConstants,
    f: &MultiPoly,
) -> Result<Vec<MultiPoly>> {
    let n = c.dim();
    if f.nvars() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: f.nvars(),
            context: "polynomial variables",
        });
    }
    let df: Vec<MultiPoly> = (0..n).map(|i| f.partial(i)).collect();
    let mut field = vec![MultiPoly::zero(n); n];
    for i in 0..n {
        if df[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let factor = linear_factor(c, i, j);
            if !factor.is_zero() {
                field[j] = field[j].add(&factor.mul(&df[i]));
            }
        }
    }
    Ok(field)
}

/// Field of `f` under the pencil member `s1 c1 + s2 c2`.
pub fn hamiltonian_field(
    p: &BracketPencil,
    s: (&Rat, &Rat),
    f: &MultiPoly,
) -> Result<Vec<MultiPoly>> {
    let member = p.member(s.0, s.1);
    hamiltonian_field_constants(&member, f)
}

// ---- symbolic matrices ----

type PolyMat = Vec<Vec<MultiPoly>>;

fn pm_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    let n = a.len();
    let nvars = a[0][0].nvars();
    let mut out = vec![vec![MultiPoly::zero(nvars); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

fn pm_trace(a: &PolyMat) -> MultiPoly {
    let nvars = a[0][0].nvars();
    let mut acc = MultiPoly::zero(nvars);
    for (i, row) in a.iter().enumerate() {
        acc = acc.add(&row[i]);
    }
    acc
}

/// The coordinate matrix of gl(n): entry (a, b) is the variable `xi_{a n + b}`,
/// in `total` variables.
fn coordinate_matrix(n: usize, total: usize) -> PolyMat {
    (0..n)
        .map(|a| (0..n).map(|b| MultiPoly::var(total, a * n + b)).collect())
        .collect()
}

fn repeated_entries(a_diag: &[Rat]) -> bool {
    a_diag
        .iter()
        .enumerate()
        .any(|(i, x)| a_diag[i + 1..].contains(x))
}

/// The trace family `h_{k,l}` = coefficient of `lambda^l` in
/// `(1/k) Tr (x + lambda A)^k`, for `k = 1..n`, `l = 0..k-1`, as exact
/// polynomials in the n^2 matrix coordinates.
pub fn manakov_family(n: usize, a_diag: &[Rat]) -> Result<IntegralFamily> {
    if a_diag.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: a_diag.len(),
            context: "diagonal of A",
        });
    }
    let nvars = n * n;
    let lambda = nvars; // extra variable index
    let mut p = coordinate_matrix(n, nvars + 1);
    for (a, entry) in a_diag.iter().enumerate() {
        let mut lam = MultiPoly::zero(nvars + 1);
        let mut exps = vec![0; nvars + 1];
        exps[lambda] = 1;
        lam.add_term(exps, entry);
        p[a][a] = p[a][a].add(&lam);
    }

    let mut members = Vec::new();
    let mut power = p.clone();
    for k in 1..=n {
        if k > 1 {
            power = pm_mul(&power, &p);
        }
        let tr = pm_trace(&power).scale(&Rat::from_int(k as i64).recip().unwrap());
        let coeffs = tr.coefficients_of(lambda);
        for l in 0..k {
            let poly = coeffs
                .iter()
                .find(|(pow, _)| *pow == l as u32)
                .map(|(_, q)| q.clone())
                .unwrap_or_else(|| MultiPoly::zero(nvars));
            members.push(FamilyMember {
                name: format!("h_{{{},{}}}", k, l),
                k,
                l,
                poly,
            });
        }
    }
    let mut fam = IntegralFamily::new(nvars, Provenance::Manakov, members)?;
    if repeated_entries(a_diag) {
        fam.push_warning("repeated diagonal entries in A".into());
    }
    Ok(fam)
}

/// The resolvent family `f_{k,l}` = coefficient of `1/lambda^l` in
/// `Tr (sum_j lambda^{-j} A^j x)^k`, `k = 1..n`, `l = 0..min(k-1, max_l)`.
pub fn resolvent_family(n: usize, a_diag: &[Rat], max_l: usize) -> Result<IntegralFamily> {
    resolvent_family_extended(n, a_diag, max_l, false)
}

/// As [`resolvent_family`], but `extended` lifts the `l <= k-1` truncation
/// and emits all orders up to `max_l` (redundant for span purposes).
pub fn resolvent_family_extended(
    n: usize,
    a_diag: &[Rat],
    max_l: usize,
    extended: bool,
) -> Result<IntegralFamily> {
    if a_diag.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: a_diag.len(),
            context: "diagonal of A",
        });
    }
    let nvars = n * n;
    let mu = nvars;
    // T[a][b] = x_{ab} * sum_{j<=max_l} (a_a mu)^j ; truncation in mu is
    // exact for coefficients of order <= max_l.
    let t: PolyMat = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let x = MultiPoly::var(nvars + 1, a * n + b);
                    let mut series = MultiPoly::zero(nvars + 1);
                    let mut coeff = Rat::one();
                    for j in 0..=max_l as u32 {
                        let mut exps = vec![0; nvars + 1];
                        exps[mu] = j;
                        series.add_term(exps, &coeff);
                        coeff *= &a_diag[a];
                    }
                    x.mul(&series)
                })
                .collect()
        })
        .collect();

    let mut members = Vec::new();
    let mut power = t.clone();
    for k in 1..=n {
        if k > 1 {
            power = pm_mul(&power, &t);
        }
        let tr = pm_trace(&power);
        let coeffs = tr.coefficients_of(mu);
        let top = if extended { max_l } else { (k - 1).min(max_l) };
        for l in 0..=top {
            let poly = coeffs
                .iter()
                .find(|(pow, _)| *pow == l as u32)
                .map(|(_, q)| q.clone())
                .unwrap_or_else(|| MultiPoly::zero(nvars));
            members.push(FamilyMember {
                name: format!("f_{{{},{}}}", k, l),
                k,
                l,
                poly,
            });
        }
    }
    let provenance = if extended {
        Provenance::Manual
    } else {
        Provenance::Resolvent
    };
    let mut fam = IntegralFamily::new(nvars, provenance, members)?;
    if repeated_entries(a_diag) {
        fam.push_warning("repeated diagonal entries in A".into());
    }
    Ok(fam)
}

/// The trace family of the Borel projector on sl(n) with eigenvalues
/// (1, -1): all nonzero `lambda^l` coefficients of `Tr ((N + lambda Id) x)^k`
/// for `k = 2..n`, in the n^2 - 1 traceless coordinates, plus the two
/// canonical quadratic members (exact recombinations of the k = 2 layer).
pub fn borel_family(n: usize) -> Result<IntegralFamily> {
    if n < 2 {
        return Err(CoreError::InvalidParameter {
            message: "borel_family requires n >= 2".into(),
        });
    }
    let basis = crate::catalog::sl_basis_matrices(n);
    let nvars = n * n - 1;
    let lambda = nvars;

    // symbolic traceless matrix in nvars variables
    let m_plain: PolyMat = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut acc = MultiPoly::zero(nvars);
                    for (a, b_mat) in basis.iter().enumerate() {
                        let coeff = &b_mat[(r, c)];
                        if !coeff.is_zero() {
                            let mut exps = vec![0; nvars];
                            exps[a] = 1;
                            acc.add_term(exps, coeff);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();

    // (N + lambda)x = (1 + lambda) x_lower + (lambda - 1) x_borel
    let p: PolyMat = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let entry = m_plain[r][c].extend_vars();
                    let mut factor = MultiPoly::zero(nvars + 1);
                    let sign = if r > c { Rat::one() } else { -Rat::one() };
                    factor.add_term(vec![0; nvars + 1], &sign);
                    let mut lam_exps = vec![0; nvars + 1];
                    lam_exps[lambda] = 1;
                    factor.add_term(lam_exps, &Rat::one());
                    entry.mul(&factor)
                })
                .collect()
        })
        .collect();

    let mut members = Vec::new();
    let mut power = pm_mul(&p, &p);
    for k in 2..=n {
        if k > 2 {
            power = pm_mul(&power, &p);
        }
        let tr = pm_trace(&power);
        for (l, poly) in tr.coefficients_of(lambda) {
            members.push(FamilyMember {
                name: format!("b_{{{},{}}}", k, l),
                k,
                l: l as usize,
                poly,
            });
        }
    }

    // sum_i x_ii^2 and sum_{i<j} x_ij x_ji
    let mut q_diag = MultiPoly::zero(nvars);
    let mut q_off = MultiPoly::zero(nvars);
    for i in 0..n {
        q_diag = q_diag.add(&m_plain[i][i].mul(&m_plain[i][i]));
        for j in i + 1..n {
            q_off = q_off.add(&m_plain[i][j].mul(&m_plain[j][i]));
        }
    }
    members.push(FamilyMember {
        name: "q_diag".into(),
        k: 2,
        l: 1,
        poly: q_diag,
    });
    members.push(FamilyMember {
        name: "q_offdiag".into(),
        k: 2,
        l: 2,
        poly: q_off,
    });

    IntegralFamily::new(nvars, Provenance::Borel, members)
}

/// Expands the given Casimirs along the resolvent transport of the operator:
/// member (j, l) is the coefficient of `mu^l` in `C_j(sum_i mu^i (N^T)^i xi)`,
/// `l = 0..max_l`. Each Casimir is validated against the bracket, and the
/// operator must have vanishing torsion.
pub fn casimir_resolvent_family(
    c: &StructureConstants,
    n_op: &Mat,
    casimirs: &[MultiPoly],
    max_l: usize,
) -> Result<IntegralFamily> {
    let n = c.dim();
    for (index, cas) in casimirs.iter().enumerate() {
        if cas.nvars() != n {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                found: cas.nvars(),
                context: "casimir variables",
            });
        }
        for coordinate in 0..n {
            let coord = MultiPoly::var(n, coordinate);
            if !poisson_bracket_constants(c, cas, &coord)?.is_zero() {
                return Err(CoreError::NotACasimir { index, coordinate });
            }
        }
    }
    let t = torsion(c, n_op)?;
    if let Some((i, j, _)) = t.first_nonzero() {
        return Err(CoreError::TorsionNonzero { i, j });
    }

    // transported coordinates y_i = sum_j mu^j ((N^T)^j xi)_i
    let mu = n;
    let mut powers: Vec<Mat> = vec![Mat::identity(n)];
    for _ in 0..max_l {
        powers.push(powers.last().unwrap().matmul(n_op));
    }
    let y: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let mut acc = MultiPoly::zero(n + 1);
            for (j, p) in powers.iter().enumerate() {
                for m in 0..n {
                    let coeff = &p[(m, i)];
                    if !coeff.is_zero() {
                        let mut exps = vec![0; n + 1];
                        exps[m] = 1;
                        exps[mu] = j as u32;
                        acc.add_term(exps, coeff);
                    }
                }
            }
            acc
        })
        .collect();

    let mut members = Vec::new();
    for (idx, cas) in casimirs.iter().enumerate() {
        let transported = cas.subst(&y);
        let coeffs = transported.coefficients_of(mu);
        for l in 0..=max_l {
            let poly = coeffs
                .iter()
                .find(|(pow, _)| *pow == l as u32)
                .map(|(_, q)| q.clone())
                .unwrap_or_else(|| MultiPoly::zero(n));
            members.push(FamilyMember {
                name: format!("c{}_l{}", idx + 1, l),
                k: idx + 1,
                l,
                poly,
            });
        }
    }
    IntegralFamily::new(n, Provenance::CasimirExpansion, members)
}

// ---- checks over families ----

#[derive(Clone, Debug, Serialize)]
pub struct BracketViolation {
    pub f: String,
    pub g: String,
    pub member: &'static str,
    pub bracket_leading_term: String,
    pub bracket_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutivityReport {
    pub verdict: crate::lie::CheckVerdict,
    pub pairs_checked: usize,
    pub violations: Vec<BracketViolation>,
    pub truncated: bool,
}

const BRACKET_VIOLATION_CAP: usize = 16;

/// Computes `{f, g}` symbolically under both spanning brackets (hence under
/// every pencil member, by bilinearity) for all member pairs.
pub fn involutivity_check(
    family: &IntegralFamily,
    p: &BracketPencil,
) -> Result<InvolutivityReport> {
    if family.nvars() != p.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: p.dim(),
            found: family.nvars(),
            context: "family vs pencil",
        });
    }
    let members = family.members();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            pairs.push((i, j));
        }
    }
    let computed: Vec<Vec<BracketViolation>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut found = Vec::new();
            for (tag, member) in [("c1", p.c1()), ("c2", p.c2())] {
                let b = poisson_bracket_constants(member, &members[i].poly, &members[j].poly)
                    .expect("dims checked");
                if !b.is_zero() {
                    found.push(BracketViolation {
                        f: members[i].name.clone(),
                        g: members[j].name.clone(),
                        member: tag,
                        bracket_leading_term: b.leading_term_string(),
                        bracket_terms: b.num_terms(),
                    });
                }
            }
            found
        })
        .collect();
    let mut violations = Vec::new();
    let mut truncated = false;
    for found in computed {
        for v in found {
            if violations.len() == BRACKET_VIOLATION_CAP {
                truncated = true;
                break;
            }
            violations.push(v);
        }
    }
    Ok(InvolutivityReport {
        verdict: if violations.is_empty() {
            crate::lie::CheckVerdict::Pass
        } else {
            crate::lie::CheckVerdict::Fail
        },
        pairs_checked: pairs.len(),
        violations,
        truncated,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationStatus {
    pub family: &'static str,
    pub k: usize,
    pub l: usize,
    pub holds: bool,
    pub first_diff_component: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LenardReport {
    pub verdict: crate::lie::CheckVerdict,
    pub relations: Vec<RelationStatus>,
    pub repeated_eigenvalues: bool,
}

/// Verifies the recursion relations between the two families as exact
/// identities of polynomial vector fields:
/// `theta_1(h_{k+1,l+1}) = theta_2(h_{k,l})` and
/// `theta_1(f_{k,l+1}) = theta_2(f_{k,l})`.
pub fn lenard_check(n: usize, a_diag: &[Rat], p: &BracketPencil) -> Result<LenardReport> {
    if p.dim() != n * n {
        return Err(CoreError::DimensionMismatch {
            expected: n * n,
            found: p.dim(),
            context: "pencil for the matrix algebra",
        });
    }
    let h = manakov_family(n, a_diag)?;
    let f = resolvent_family(n, a_diag, n.saturating_sub(1))?;
    let field1 = |poly: &MultiPoly| hamiltonian_field_constants(p.c1(), poly);
    let field2 = |poly: &MultiPoly| hamiltonian_field_constants(p.c2(), poly);

    let mut relations = Vec::new();
    for k in 1..n {
        for l in 0..k {
            let lhs = field1(
                &h.member(&format!("h_{{{},{}}}", k + 1, l + 1))
                    .unwrap()
                    .poly,
            )?;
            let rhs = field2(&h.member(&format!("h_{{{},{}}}", k, l)).unwrap().poly)?;
            let diff = first_component_diff(&lhs, &rhs);
            relations.push(RelationStatus {
                family: "h",
                k,
                l,
                holds: diff.is_none(),
                first_diff_component: diff,
            });
        }
    }
    for k in 2..=n {
        for l in 0..k - 1 {
            let lhs = field1(&f.member(&format!("f_{{{},{}}}", k, l + 1)).unwrap().poly)?;
            let rhs = field2(&f.member(&format!("f_{{{},{}}}", k, l)).unwrap().poly)?;
            let diff = first_component_diff(&lhs, &rhs);
            relations.push(RelationStatus {
                family: "f",
                k,
                l,
                holds: diff.is_none(),
                first_diff_component: diff,
            });
        }
    }

    Ok(LenardReport {
        verdict: if relations.iter().all(|r| r.holds) {
            crate::lie::CheckVerdict::Pass
        } else {
            crate::lie::CheckVerdict::Fail
        },
        relations,
        repeated_eigenvalues: repeated_entries(a_diag),
    })
}

fn first_component_diff(a: &[MultiPoly], b: &[MultiPoly]) -> Option<usize> {
    a.iter()
        .zip(b.iter())
        .position(|(x, y)| !x.sub(y).is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CompletenessVerdict {
    #[serde(rename = "COMPLETE")]
    Complete,
    #[serde(rename = "INCOMPLETE")]
    Incomplete,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    pub verdict: CompletenessVerdict,
    pub max_rank: usize,
    pub target: usize,
    /// Certified index upper bound of the undeformed bracket used in the
    /// target `(dim + ind) / 2`.
    pub index_used: usize,
    pub witness: Vec<Rat>,
    pub samples: usize,
    pub seed: u64,
    pub coord_bound: u64,
}

/// Exact rank of the family's Jacobian at sampled points against the
/// lagrangian target `(dim + ind)/2`.
pub fn completeness_rank(
    family: &IntegralFamily,
    p: &BracketPencil,
    cfg: &PointSamplerConfig,
) -> Result<CompletenessReport> {
    let n = family.nvars();
    if p.dim() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: p.dim(),
            context: "family vs pencil",
        });
    }
    let ind = algebra_index_stable(p.c1(), cfg).index;
    let target = (n + ind) / 2;
    let partials: Vec<Vec<MultiPoly>> = family
        .members()
        .iter()
        .map(|m| (0..n).map(|j| m.poly.partial(j)).collect())
        .collect();
    let evaluated: Vec<(usize, Vec<Rat>)> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|idx| {
            let point = sample_vector(cfg.seed.wrapping_add(5), idx, n, cfg.coord_bound);
            let jac = Mat::from_fn(partials.len(), n, |r, c| partials[r][c].eval(&point));
            (jac.rank(), point)
        })
        .collect();
    let mut max_rank = 0;
    let mut witness = vec![Rat::zero(); n];
    for (rank, point) in evaluated {
        if rank > max_rank {
            max_rank = rank;
            witness = point;
        }
    }
    Ok(CompletenessReport {
        verdict: if max_rank == target {
            CompletenessVerdict::Complete
        } else {
            CompletenessVerdict::Incomplete
        },
        max_rank,
        target,
        index_used: ind,
        witness,
        samples: cfg.samples,
        seed: cfg.seed,
        coord_bound: cfg.coord_bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanSample {
    pub point: Vec<Rat>,
    pub rank_first: usize,
    pub rank_second: usize,
    pub rank_joint: usize,
    pub equal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpanVerdict {
    #[serde(rename = "EQUIVALENT")]
    Equivalent,
    #[serde(rename = "NOT_EQUIVALENT")]
    NotEquivalent,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanEquivalenceReport {
    pub verdict: SpanVerdict,
    /// Certified generic ranks: maxima of the sampled per-point ranks.
    pub rank_first_max: usize,
    pub rank_second_max: usize,
    pub rank_joint_max: usize,
    pub points: Vec<SpanSample>,
    pub seed: u64,
    pub coord_bound: u64,
}

/// Compares the row spans of the two families' Jacobians at sampled points:
/// equivalent iff the certified generic ranks agree,
/// `max rank J1 = max rank J2 = max rank (J1 over J2)`.
///
/// This is the checkable consequence of functional generation at generic
/// points; strict functional generation is not decided algorithmically.
/// Individual sample points may land outside the dense open locus where the
/// spans coincide (they are recorded with their per-point ranks); the
/// maxima are the operational generic values.
pub fn family_span_equivalence(
    first: &IntegralFamily,
    second: &IntegralFamily,
    cfg: &PointSamplerConfig,
) -> Result<SpanEquivalenceReport> {
    let n = first.nvars();
    if second.nvars() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            found: second.nvars(),
            context: "family variable counts",
        });
    }
    let partials = |fam: &IntegralFamily| -> Vec<Vec<MultiPoly>> {
        fam.members()
            .iter()
            .map(|m| (0..n).map(|j| m.poly.partial(j)).collect())
            .collect()
    };
    let p1 = partials(first);
    let p2 = partials(second);
    let points: Vec<SpanSample> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|idx| {
            let point = sample_vector(cfg.seed.wrapping_add(6), idx, n, cfg.coord_bound);
            let j1 = Mat::from_fn(p1.len(), n, |r, c| p1[r][c].eval(&point));
            let j2 = Mat::from_fn(p2.len(), n, |r, c| p2[r][c].eval(&point));
            let joint = Mat::from_fn(p1.len() + p2.len(), n, |r, c| {
                if r < p1.len() {
                    j1[(r, c)].clone()
                } else {
                    j2[(r - p1.len(), c)].clone()
                }
            });
            let (r1, r2, rj) = (j1.rank(), j2.rank(), joint.rank());
            SpanSample {
                point,
                rank_first: r1,
                rank_second: r2,
                rank_joint: rj,
                equal: r1 == r2 && r2 == rj,
            }
        })
        .collect();
    let rank_first_max = points.iter().map(|s| s.rank_first).max().unwrap_or(0);
    let rank_second_max = points.iter().map(|s| s.rank_second).max().unwrap_or(0);
    let rank_joint_max = points.iter().map(|s| s.rank_joint).max().unwrap_or(0);
    Ok(SpanEquivalenceReport {
        verdict: if rank_first_max == rank_second_max && rank_second_max == rank_joint_max {
            SpanVerdict::Equivalent
        } else {
            SpanVerdict::NotEquivalent
        },
        rank_first_max,
        rank_second_max,
        rank_joint_max,
        points,
        seed: cfg.seed,
        coord_bound: cfg.coord_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nijenhuis::pencil_of;

    fn r(x: i64) -> Rat {
        Rat::from_int(x)
    }

    fn cfg() -> PointSamplerConfig {
        PointSamplerConfig::new(13, 16, 100)
    }

    fn gl2_pencil() -> BracketPencil {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        pencil_of(&c, &n_op).unwrap()
    }

    fn trace_poly(n: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(n * n);
        for a in 0..n {
            let mut exps = vec![0; n * n];
            exps[a * n + a] = 1;
            p.add_term(exps, &Rat::one());
        }
        p
    }

    fn trace_sq_poly(n: usize) -> MultiPoly {
        // Tr M^2 = sum_{a,b} M_ab M_ba
        let mut p = MultiPoly::zero(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut exps = vec![0; n * n];
                exps[a * n + b] += 1;
                exps[b * n + a] += 1;
                p.add_term(exps, &Rat::one());
            }
        }
        p
    }

    #[test]
    fn bracket_of_function_with_itself_vanishes() {
        let c = catalog::sl_constants(2);
        let mut f = MultiPoly::zero(3);
        f.add_term(vec![2, 0, 1], &r(3));
        f.add_term(vec![0, 1, 0], &r(-2));
        assert!(poisson_bracket_constants(&c, &f, &f).unwrap().is_zero());
    }

    #[test]
    fn sl2_coordinate_bracket() {
        // {xi_e, xi_f} = xi_h
        let c = catalog::sl_constants(2);
        let xe = MultiPoly::var(3, 0);
        let xf = MultiPoly::var(3, 2);
        let b = poisson_bracket_constants(&c, &xe, &xf).unwrap();
        assert!(b.sub(&MultiPoly::var(3, 1)).is_zero());
    }

    #[test]
    fn trace_is_casimir_of_gl2() {
        let c = catalog::gl_constants(2);
        let tr = trace_poly(2);
        for seed in 0..5u64 {
            // random polynomial of degree <= 2
            let coeffs = sample_vector(seed, 3, 10, 5);
            let mut g = MultiPoly::zero(4);
            g.add_term(vec![1, 0, 0, 0], &coeffs[0]);
            g.add_term(vec![0, 1, 1, 0], &coeffs[1]);
            g.add_term(vec![0, 0, 0, 2], &coeffs[2]);
            g.add_term(vec![1, 0, 0, 1], &coeffs[3]);
            assert!(poisson_bracket_constants(&c, &tr, &g).unwrap().is_zero());
        }
    }

    #[test]
    fn field_of_constant_vanishes() {
        let c = catalog::gl_constants(2);
        let f = MultiPoly::constant(4, r(7));
        assert!(hamiltonian_field_constants(&c, &f)
            .unwrap()
            .iter()
            .all(MultiPoly::is_zero));
    }

    #[test]
    fn field_of_quadratic_casimir_under_commutator_vanishes() {
        let c = catalog::gl_constants(2);
        let f = trace_sq_poly(2).scale(&Rat::new(1, 2));
        assert!(hamiltonian_field_constants(&c, &f)
            .unwrap()
            .iter()
            .all(MultiPoly::is_zero));
    }

    #[test]
    fn field_of_trace_under_deformed_bracket() {
        // under [x,y]_A the field of Tr is the commutator with A read in
        // coordinates: components (0, -xi_1, xi_2, 0) for A = diag(1, 2)
        let p = gl2_pencil();
        let f = trace_poly(2);
        let field = hamiltonian_field_constants(p.c2(), &f).unwrap();
        assert!(field[0].is_zero());
        assert!(field[1].sub(&MultiPoly::var(4, 1).neg()).is_zero());
        assert!(field[2].sub(&MultiPoly::var(4, 2)).is_zero());
        assert!(field[3].is_zero());
    }

    #[test]
    fn field_contracts_to_bracket() {
        let c = catalog::gl_constants(2);
        let f = trace_sq_poly(2);
        let mut g = MultiPoly::zero(4);
        g.add_term(vec![1, 1, 0, 0], &r(2));
        g.add_term(vec![0, 0, 1, 0], &r(-5));
        let field = hamiltonian_field_constants(&c, &f).unwrap();
        let mut contracted = MultiPoly::zero(4);
        for (j, comp) in field.iter().enumerate() {
            contracted = contracted.add(&comp.mul(&g.partial(j)));
        }
        let bracket = poisson_bracket_constants(&c, &f, &g).unwrap();
        assert!(contracted.sub(&bracket).is_zero());
    }

    #[test]
    fn manakov_members_match_hand_expansion() {
        let fam = manakov_family(2, &[r(1), r(2)]).unwrap();
        assert_eq!(fam.members().len(), 3); // h_{1,0}, h_{2,0}, h_{2,1}
        let h10 = &fam.member("h_{1,0}").unwrap().poly;
        assert!(h10.sub(&trace_poly(2)).is_zero());
        let h20 = &fam.member("h_{2,0}").unwrap().poly;
        assert!(h20.sub(&trace_sq_poly(2).scale(&Rat::new(1, 2))).is_zero());
        // h_{2,1} = Tr(Ax) = x11 + 2 x22
        let h21 = &fam.member("h_{2,1}").unwrap().poly;
        let mut expect = MultiPoly::zero(4);
        expect.add_term(vec![1, 0, 0, 0], &r(1));
        expect.add_term(vec![0, 0, 0, 1], &r(2));
        assert!(h21.sub(&expect).is_zero());
        assert!(fam.warnings().is_empty());
        assert!(!manakov_family(2, &[r(3), r(3)])
            .unwrap()
            .warnings()
            .is_empty());
    }

    #[test]
    fn manakov_h_k0_is_trace_power_over_k() {
        for n in 2..=3usize {
            let diag: Vec<Rat> = (1..=n as i64).map(Rat::from_int).collect();
            let fam = manakov_family(n, &diag).unwrap();
            for k in 1..=n {
                let member = &fam.member(&format!("h_{{{k},0}}")).unwrap().poly;
                // evaluate against (1/k) Tr M^k at a sample point
                let point = sample_vector(99, k as u64, n * n, 7);
                let m = Mat::from_fn(n, n, |a, b| point[a * n + b].clone());
                let tr = m.pow(k).trace() * Rat::from_int(k as i64).recip().unwrap();
                assert_eq!(member.eval(&point), tr);
            }
        }
    }

    #[test]
    fn resolvent_members_match_hand_expansion() {
        let fam = resolvent_family(2, &[r(1), r(2)], 1).unwrap();
        let f10 = &fam.member("f_{1,0}").unwrap().poly;
        assert!(f10.sub(&trace_poly(2)).is_zero());
        let f20 = &fam.member("f_{2,0}").unwrap().poly;
        assert!(f20.sub(&trace_sq_poly(2)).is_zero());
        // f_{2,1} = 2 Tr(A x^2): evaluate both sides at sample points
        let f21 = &fam.member("f_{2,1}").unwrap().poly;
        let a = Mat::diagonal(&[r(1), r(2)]);
        for idx in 0..5 {
            let point = sample_vector(7, idx, 4, 9);
            let m = Mat::from_fn(2, 2, |x, y| point[x * 2 + y].clone());
            let expect = a.matmul(&m).matmul(&m).trace() * r(2);
            assert_eq!(f21.eval(&point), expect);
        }
    }

    #[test]
    fn extended_resolvent_orders_are_redundant() {
        let standard = resolvent_family(2, &[r(1), r(2)], 1).unwrap();
        let extended = resolvent_family_extended(2, &[r(1), r(2)], 2, true).unwrap();
        assert!(extended.members().len() > standard.members().len());
        let rep = family_span_equivalence(&standard, &extended, &cfg()).unwrap();
        assert_eq!(rep.verdict, SpanVerdict::Equivalent);
    }

    #[test]
    fn borel_family_on_sl2() {
        let fam = borel_family(2).unwrap();
        // k = 2 coefficients at lambda^0, lambda^1, lambda^2 plus the two
        // quadratics
        assert_eq!(fam.members().len(), 5);
        // lambda^2 coefficient is Tr x^2 in the traceless parametrization:
        // 2 xi_e xi_f + 2 xi_h^2
        let top = &fam.member("b_{2,2}").unwrap().poly;
        let mut expect = MultiPoly::zero(3);
        expect.add_term(vec![1, 0, 1], &r(2));
        expect.add_term(vec![0, 2, 0], &r(2));
        assert!(top.sub(&expect).is_zero());
        // q_diag = 2 xi_h^2, q_offdiag = xi_e xi_f
        let q_diag = &fam.member("q_diag").unwrap().poly;
        assert!(q_diag
            .sub(&MultiPoly::monomial(3, vec![0, 2, 0], r(2)))
            .is_zero());
        let q_off = &fam.member("q_offdiag").unwrap().poly;
        assert!(q_off
            .sub(&MultiPoly::monomial(3, vec![1, 0, 1], r(1)))
            .is_zero());
    }

    #[test]
    fn borel_family_on_sl3_member_counts() {
        let fam = borel_family(3).unwrap();
        let k2: Vec<_> = fam
            .members()
            .iter()
            .filter(|m| m.k == 2 && m.name.starts_with("b_"))
            .collect();
        let k3: Vec<_> = fam.members().iter().filter(|m| m.k == 3).collect();
        assert_eq!(k2.len(), 3); // lambda^0..lambda^2
        assert_eq!(k3.len(), 4); // lambda^0..lambda^3
        assert!(fam.members().iter().all(|m| m.poly.total_degree() <= 3));
        // quadratics present by name
        assert!(fam.member("q_diag").is_some());
        assert!(fam.member("q_offdiag").is_some());
    }

    #[test]
    fn casimir_resolvent_of_trace_gives_weighted_traces() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let tr = trace_poly(2);
        let fam = casimir_resolvent_family(&c, &n_op, &[tr], 2).unwrap();
        // order l: Tr(A^l x) = x11 + 2^l x22
        for l in 0..=2usize {
            let member = &fam.member(&format!("c1_l{l}")).unwrap().poly;
            let mut expect = MultiPoly::zero(4);
            expect.add_term(vec![1, 0, 0, 0], &r(1));
            expect.add_term(vec![0, 0, 0, 1], &r(2i64.pow(l as u32)));
            assert!(member.sub(&expect).is_zero());
        }
    }

    #[test]
    fn casimir_resolvent_with_zero_operator() {
        let c = catalog::gl_constants(2);
        let tr = trace_poly(2);
        let fam =
            casimir_resolvent_family(&c, &Mat::zeros(4, 4), std::slice::from_ref(&tr), 2).unwrap();
        assert!(fam.member("c1_l0").unwrap().poly.sub(&tr).is_zero());
        assert!(fam.member("c1_l1").unwrap().poly.is_zero());
        assert!(fam.member("c1_l2").unwrap().poly.is_zero());
    }

    #[test]
    fn casimir_resolvent_regenerates_resolvent_span() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let casimirs = vec![trace_poly(2), trace_sq_poly(2)];
        let fam = casimir_resolvent_family(&c, &n_op, &casimirs, 1).unwrap();
        let resolvent = resolvent_family(2, &[r(1), r(2)], 1).unwrap();
        let rep = family_span_equivalence(&fam, &resolvent, &cfg()).unwrap();
        assert_eq!(rep.verdict, SpanVerdict::Equivalent);
    }

    #[test]
    fn casimir_validation_rejects_non_casimirs() {
        let c = catalog::gl_constants(2);
        let not_casimir = MultiPoly::var(4, 1); // xi_12 is no invariant
        match casimir_resolvent_family(&c, &Mat::zeros(4, 4), &[not_casimir], 1) {
            Err(CoreError::NotACasimir { index: 0, .. }) => {}
            other => panic!("expected NotACasimir, got {other:?}"),
        }
    }

    #[test]
    fn involutivity_of_commutator_casimirs() {
        let c = catalog::gl_constants(2);
        let p = gl2_pencil();
        let fam = IntegralFamily::new(
            4,
            Provenance::Manual,
            vec![
                FamilyMember {
                    name: "tr".into(),
                    k: 1,
                    l: 0,
                    poly: trace_poly(2),
                },
                FamilyMember {
                    name: "tr2".into(),
                    k: 2,
                    l: 0,
                    poly: trace_sq_poly(2),
                },
            ],
        )
        .unwrap();
        // casimirs of c1 bracketed under c1 alone
        let under_c1 = IntegralFamily::new(4, Provenance::Manual, fam.members().to_vec()).unwrap();
        for i in 0..under_c1.members().len() {
            for j in i + 1..under_c1.members().len() {
                assert!(poisson_bracket_constants(
                    &c,
                    &under_c1.members()[i].poly,
                    &under_c1.members()[j].poly
                )
                .unwrap()
                .is_zero());
            }
        }
        let _ = p;
    }

    #[test]
    fn involutivity_of_manakov_and_corruption_detection() {
        let p = gl2_pencil();
        let fam = manakov_family(2, &[r(1), r(2)]).unwrap();
        let rep = involutivity_check(&fam, &p).unwrap();
        assert_eq!(rep.verdict, crate::lie::CheckVerdict::Pass);
        assert_eq!(rep.pairs_checked, 3);

        // corrupt one member with an extra coordinate term
        let mut members = fam.members().to_vec();
        let idx = members.iter().position(|m| m.name == "h_{2,1}").unwrap();
        members[idx].poly = members[idx].poly.add(&MultiPoly::var(4, 1));
        let broken = IntegralFamily::new(4, Provenance::Manual, members).unwrap();
        let rep = involutivity_check(&broken, &p).unwrap();
        assert_eq!(rep.verdict, crate::lie::CheckVerdict::Fail);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.f == "h_{2,1}" || v.g == "h_{2,1}"));
    }

    #[test]
    fn lenard_relations_on_gl2() {
        let p = gl2_pencil();
        let rep = lenard_check(2, &[r(1), r(2)], &p).unwrap();
        assert_eq!(rep.verdict, crate::lie::CheckVerdict::Pass);
        assert!(!rep.repeated_eigenvalues);
        assert_eq!(rep.relations.len(), 2); // h: (1,0); f: (2,0)
        assert!(rep.relations.iter().all(|rel| rel.holds));
    }

    #[test]
    fn lenard_with_repeated_eigenvalues_still_closes() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(1)]).unwrap();
        let p = pencil_of(&c, &n_op).unwrap();
        let rep = lenard_check(2, &[r(1), r(1)], &p).unwrap();
        assert_eq!(rep.verdict, crate::lie::CheckVerdict::Pass);
        assert!(rep.repeated_eigenvalues);
    }

    #[test]
    fn completeness_examples() {
        // single trace function on gl_2 is incomplete: rank 1 < 3
        let p = gl2_pencil();
        let single = IntegralFamily::new(
            4,
            Provenance::Manual,
            vec![FamilyMember {
                name: "tr".into(),
                k: 1,
                l: 0,
                poly: trace_poly(2),
            }],
        )
        .unwrap();
        let rep = completeness_rank(&single, &p, &cfg()).unwrap();
        assert_eq!(rep.verdict, CompletenessVerdict::Incomplete);
        assert_eq!(rep.max_rank, 1);
        assert_eq!(rep.target, 3);

        // full manakov family on gl_2 is complete: rank 3 = (4 + 2)/2
        let fam = manakov_family(2, &[r(1), r(2)]).unwrap();
        let rep = completeness_rank(&fam, &p, &cfg()).unwrap();
        assert_eq!(rep.verdict, CompletenessVerdict::Complete);
        assert_eq!(rep.max_rank, 3);
    }

    #[test]
    fn span_equivalence_examples() {
        let fam = manakov_family(2, &[r(1), r(2)]).unwrap();
        let rep = family_span_equivalence(&fam, &fam, &cfg()).unwrap();
        assert_eq!(rep.verdict, SpanVerdict::Equivalent);

        let resolvent = resolvent_family(2, &[r(1), r(2)], 1).unwrap();
        let rep = family_span_equivalence(&fam, &resolvent, &cfg()).unwrap();
        assert_eq!(rep.verdict, SpanVerdict::Equivalent);

        // adding a non-invariant coordinate grows the span
        let mut members = fam.members().to_vec();
        members.push(FamilyMember {
            name: "xi12".into(),
            k: 1,
            l: 0,
            poly: MultiPoly::var(4, 1),
        });
        let bigger = IntegralFamily::new(4, Provenance::Manual, members).unwrap();
        let rep = family_span_equivalence(&fam, &bigger, &cfg()).unwrap();
        assert_eq!(rep.verdict, SpanVerdict::NotEquivalent);
    }
}
