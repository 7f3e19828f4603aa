//! Semidirect products, twilled splittings and their truncations, and the
//! index formula for semidirect products with an abelian factor.

use super::{
    algebra_index_stable, subalgebra_restrict, QuotientSplitter, StructureConstants, SubspaceBasis,
};
use crate::error::{CoreError, Result};
use crate::linalg::Mat;
use crate::rat::Rat;
use crate::sample::{sample_vector, PointSamplerConfig};
use serde::Serialize;

/// Checks that `action` is a Lie algebra homomorphism `h -> End(V)`:
/// `action([e_i, e_j]) = [action(e_i), action(e_j)]` on all basis pairs.
pub fn validate_representation(
    c_h: &StructureConstants,
    action: &[Mat],
    dim_v: usize,
) -> Result<()> {
    let m = c_h.dim();
    if action.len() != m {
        return Err(CoreError::DimensionMismatch {
            expected: m,
            found: action.len(),
            context: "action matrices",
        });
    }
    for a in action {
        if a.nrows() != dim_v || a.ncols() != dim_v {
            return Err(CoreError::DimensionMismatch {
                expected: dim_v,
                found: a.nrows(),
                context: "action matrix size",
            });
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let mut lhs = Mat::zeros(dim_v, dim_v);
            for (k, coeff) in c_h.bracket_basis(i, j).iter().enumerate() {
                if !coeff.is_zero() {
                    lhs = lhs.add(&action[k].scale(coeff));
                }
            }
            let rhs = action[i]
                .matmul(&action[j])
                .sub(&action[j].matmul(&action[i]));
            if lhs != rhs {
                return Err(CoreError::NotARepresentation { i, j });
            }
        }
    }
    Ok(())
}

/// Structure constants of `h x_A V` on the concatenated basis (h-basis,
/// V-basis): `[(x1, x2), (y1, y2)] = ([x1, y1], A(x1) y2 - A(y1) x2)`.
pub fn semidirect_product(
    c_h: &StructureConstants,
    action: &[Mat],
    dim_v: usize,
) -> Result<StructureConstants> {
    validate_representation(c_h, action, dim_v)?;
    let m = c_h.dim();
    let n = m + dim_v;
    let mut out = StructureConstants::zero(n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                out.set_entry(i, j, k, c_h.entry(i, j, k).clone());
            }
        }
    }
    for i in 0..m {
        for w in 0..dim_v {
            // [e_i, v_w] = action[i] v_w
            for row in 0..dim_v {
                let v = action[i][(row, w)].clone();
                if !v.is_zero() {
                    out.set_entry(i, m + w, m + row, v.clone());
                    out.set_entry(m + w, i, m + row, -&v);
                }
            }
        }
    }
    Ok(out)
}

/// The truncation of a splitting `g = g1 (+) g2` into two subalgebras,
/// together with the two cross-action families.
#[derive(Clone, Debug)]
pub struct TwilledTruncation {
    /// Truncated bracket on the concatenated basis (basis of g1, basis of g2):
    /// `[x, y] = [x1, y1]_1 + [x1, y2]_2 + [x2, y1]_2`.
    pub constants: StructureConstants,
    /// `A1(x1): g2 -> g2`, the g2-component of `[x1, .]`, one matrix per
    /// basis vector of g1. Validated to be a homomorphism.
    pub action_on_second: Vec<Mat>,
    /// `A2(x2): g1 -> g1`, the g1-component of `[x2, .]`, one matrix per
    /// basis vector of g2.
    pub action_on_first: Vec<Mat>,
}

/// Splits the bracket of `c` along `g = span(b1) (+) span(b2)` and truncates
/// it to the semidirect form.
pub fn twilled_truncate(
    c: &StructureConstants,
    b1: &SubspaceBasis,
    b2: &SubspaceBasis,
) -> Result<TwilledTruncation> {
    let n = c.dim();
    let m1 = b1.dim();
    let m2 = b2.dim();
    if m1 + m2 != n {
        return Err(CoreError::NotDirectSum);
    }
    subalgebra_restrict(c, b1)?;
    subalgebra_restrict(c, b2)?;
    let mut combined = b1.vectors().to_vec();
    combined.extend(b2.vectors().iter().cloned());
    let combined = SubspaceBasis::new(combined, n).map_err(|_| CoreError::NotDirectSum)?;
    let splitter = QuotientSplitter::new(&combined)?;
    // coords over the concatenated basis: first m1 entries in g1, rest in g2
    let coords = |v: &[Rat]| -> Vec<Rat> {
        let (alpha, _) = splitter.split(v);
        alpha
    };

    let mut constants = StructureConstants::zero(n);
    let mut action_on_second: Vec<Mat> = vec![Mat::zeros(m2, m2); m1];
    let mut action_on_first: Vec<Mat> = vec![Mat::zeros(m1, m1); m2];

    for i in 0..m1 {
        for j in 0..m1 {
            if i == j {
                continue;
            }
            let w = c.bracket(b1.vector(i), b1.vector(j))?;
            let cw = coords(&w);
            for k in 0..m1 {
                constants.set_entry(i, j, k, cw[k].clone());
            }
        }
    }
    for i in 0..m1 {
        for j in 0..m2 {
            let w = c.bracket(b1.vector(i), b2.vector(j))?;
            let cw = coords(&w);
            for k in 0..m2 {
                let v = cw[m1 + k].clone();
                action_on_second[i][(k, j)] = v.clone();
                if !v.is_zero() {
                    constants.set_entry(i, m1 + j, m1 + k, v.clone());
                    constants.set_entry(m1 + j, i, m1 + k, -&v);
                }
            }
            for k in 0..m1 {
                // A2 acts by [x2, y1]_1 = -[y1, x2]_1
                action_on_first[j][(k, i)] = -&cw[k];
            }
        }
    }

    // A1 must be a homomorphism of g1 into gl(g2).
    let c1 = subalgebra_restrict(c, b1)?;
    validate_representation(&c1, &action_on_second, m2)?;

    Ok(TwilledTruncation {
        constants,
        action_on_second,
        action_on_first,
    })
}

/// Two-sided index computation for a semidirect product with abelian factor:
/// the sampled index of `h x_A V` against `codim Orbit(a) + ind Stab(a)` for
/// a generic covector `a` of `V`.
#[derive(Clone, Debug, Serialize)]
pub struct RaisReport {
    pub verdict: super::CheckVerdict,
    pub semidirect_index: usize,
    pub orbit_codim: usize,
    pub stabilizer_index: usize,
    pub rhs_total: usize,
    pub witness_covector: Vec<Rat>,
    pub stabilizer_dim: usize,
}

/// Evaluates both sides of the index formula
/// `ind(h x_A V) = codim O_a + ind h^a` at a sampled generic `a` in `V*`.
pub fn rais_check(
    c_h: &StructureConstants,
    action: &[Mat],
    dim_v: usize,
    cfg: &PointSamplerConfig,
) -> Result<RaisReport> {
    let full = semidirect_product(c_h, action, dim_v)?;
    let lhs = algebra_index_stable(&full, cfg);
    let m = c_h.dim();

    // The coadjoint-type action of h on V*: x . a = -a o action(x).
    // Its tangent map at a has column j equal to -(action[j])^T a.
    let tangent = |a: &[Rat]| -> Mat {
        Mat::from_fn(dim_v, m, |w, j| {
            let mut acc = Rat::zero();
            for v in 0..dim_v {
                let entry = &action[j][(v, w)];
                if !entry.is_zero() && !a[v].is_zero() {
                    acc += entry * &a[v];
                }
            }
            -acc
        })
    };

    let mut best_rank = 0;
    let mut best_a: Vec<Rat> = vec![Rat::zero(); dim_v];
    for idx in 0..cfg.samples as u64 {
        let a = sample_vector(cfg.seed.wrapping_add(77), idx, dim_v, cfg.coord_bound);
        let rank = tangent(&a).rank();
        if rank > best_rank {
            best_rank = rank;
            best_a = a;
        }
    }

    let t = tangent(&best_a);
    let orbit_codim = dim_v - best_rank;
    let kernel = t.nullspace();
    let stabilizer = SubspaceBasis::new(kernel, m)?;
    let restricted =
        subalgebra_restrict(c_h, &stabilizer).map_err(|_| CoreError::StabilizerNotClosed)?;
    let stab_index = algebra_index_stable(&restricted, cfg);

    let rhs_total = orbit_codim + stab_index.index;
    let verdict = if lhs.index == rhs_total {
        super::CheckVerdict::Pass
    } else {
        super::CheckVerdict::Fail
    };
    Ok(RaisReport {
        verdict,
        semidirect_index: lhs.index,
        orbit_codim,
        stabilizer_index: stab_index.index,
        rhs_total,
        witness_covector: best_a,
        stabilizer_dim: stabilizer.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::{check_jacobi, CheckVerdict};

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn cfg() -> PointSamplerConfig {
        PointSamplerConfig::new(9, 32, 100)
    }

    #[test]
    fn trivial_action_gives_direct_sum() {
        let h = catalog::sl_constants(2);
        let action = vec![Mat::zeros(2, 2); 3];
        let sd = semidirect_product(&h, &action, 2).unwrap();
        assert!(check_jacobi(&sd).passed());
        for i in 0..3 {
            for w in 0..2 {
                assert!(sd.bracket_basis(i, 3 + w).iter().all(Rat::is_zero));
            }
        }
    }

    #[test]
    fn one_dim_identity_action_is_aff1() {
        let h = StructureConstants::zero(1);
        let action = vec![Mat::identity(1)];
        let sd = semidirect_product(&h, &action, 1).unwrap();
        assert_eq!(sd.bracket_basis(0, 1), &[r(0), r(1)]);
        assert!(check_jacobi(&sd).passed());
    }

    #[test]
    fn invalid_action_rejected() {
        // sl_2 acting with matrices that do not bracket correctly
        let h = catalog::sl_constants(2);
        let action = vec![Mat::identity(2), Mat::zeros(2, 2), Mat::zeros(2, 2)];
        assert!(matches!(
            semidirect_product(&h, &action, 2),
            Err(CoreError::NotARepresentation { .. })
        ));
    }

    #[test]
    fn semidirect_passes_jacobi_when_action_valid() {
        // adjoint action of sl_2 on itself, abelianized
        let h = catalog::sl_constants(2);
        let ad = |i: usize| Mat::from_fn(3, 3, |k, j| h.entry(i, j, k).clone());
        let action = vec![ad(0), ad(1), ad(2)];
        let sd = semidirect_product(&h, &action, 3).unwrap();
        assert!(check_jacobi(&sd).passed());
    }

    #[test]
    fn truncation_with_ideal_second_factor_keeps_constants() {
        // aff(1) basis (x, y): [x, y] = y; b1 = span(x), b2 = span(y) = ideal
        // with [b2, b2] = 0, so the truncation is the original bracket.
        let mut c = StructureConstants::zero(2);
        c.set_bracket(0, 1, &[(1, r(1))]);
        let b1 = SubspaceBasis::standard(2, &[0]);
        let b2 = SubspaceBasis::standard(2, &[1]);
        let t = twilled_truncate(&c, &b1, &b2).unwrap();
        assert!(t.constants.tensor_eq(&c));
    }

    #[test]
    fn sl2_borel_truncation() {
        // b1 = span(e, h), b2 = span(f). The cross term [e, f] = h projects
        // to zero in g2, and [h, f] = -2f stays; the truncation is b+ acting
        // on a line.
        let c = catalog::sl_constants(2);
        let b1 = SubspaceBasis::standard(3, &[0, 1]);
        let b2 = SubspaceBasis::standard(3, &[2]);
        let t = twilled_truncate(&c, &b1, &b2).unwrap();
        assert_eq!(t.constants.bracket_basis(0, 1), &[r(-2), r(0), r(0)]);
        assert!(t.constants.bracket_basis(0, 2).iter().all(Rat::is_zero));
        assert_eq!(t.constants.bracket_basis(1, 2), &[r(0), r(0), r(-2)]);
        assert!(check_jacobi(&t.constants).passed());
        // matches the semidirect product built from the extracted action
        let c1 = subalgebra_restrict(&c, &b1).unwrap();
        let sd = semidirect_product(&c1, &t.action_on_second, 1).unwrap();
        assert!(sd.tensor_eq(&t.constants));
    }

    #[test]
    fn gl2_zero_row_truncation_matches_semidirect_form() {
        let c = catalog::gl_constants(2);
        // b1 = zero-first-row span(E21, E22), b2 = span(E11, E12)
        let b1 = SubspaceBasis::standard(4, &[2, 3]);
        let b2 = SubspaceBasis::standard(4, &[0, 1]);
        let t = twilled_truncate(&c, &b1, &b2).unwrap();
        let c1 = subalgebra_restrict(&c, &b1).unwrap();
        let sd = semidirect_product(&c1, &t.action_on_second, 2).unwrap();
        assert!(sd.tensor_eq(&t.constants));
        assert!(check_jacobi(&t.constants).passed());
    }

    #[test]
    fn rais_on_trivial_action() {
        // trivial action: ind = ind h + dim V
        let h = catalog::sl_constants(2);
        let action = vec![Mat::zeros(2, 2); 3];
        let rep = rais_check(&h, &action, 2, &cfg()).unwrap();
        assert_eq!(rep.verdict, CheckVerdict::Pass);
        assert_eq!(rep.semidirect_index, 1 + 2);
        assert_eq!(rep.orbit_codim, 2);
        assert_eq!(rep.stabilizer_index, 1);
    }

    #[test]
    fn rais_on_aff1() {
        let h = StructureConstants::zero(1);
        let action = vec![Mat::identity(1)];
        let rep = rais_check(&h, &action, 1, &cfg()).unwrap();
        assert_eq!(rep.verdict, CheckVerdict::Pass);
        assert_eq!(rep.semidirect_index, 0);
        assert_eq!(rep.rhs_total, 0);
    }

    #[test]
    fn rais_on_gl2_zero_row_truncation() {
        // The truncation of gl_2 along (zero-first-row, first-row-only) is
        // the exceptional bracket of the left-multiplication pencil, whose
        // index must equal ind gl_2 = 2. The zero-row factor itself is
        // Frobenius, which enters through the stabilizer/orbit split 1 + 1.
        let c = catalog::gl_constants(2);
        let b1 = SubspaceBasis::standard(4, &[2, 3]);
        let b2 = SubspaceBasis::standard(4, &[0, 1]);
        let t = twilled_truncate(&c, &b1, &b2).unwrap();
        let c1 = subalgebra_restrict(&c, &b1).unwrap();
        let rep = rais_check(&c1, &t.action_on_second, 2, &cfg()).unwrap();
        assert_eq!(rep.verdict, CheckVerdict::Pass);
        assert_eq!(rep.semidirect_index, 2);
        assert_eq!(rep.orbit_codim, 1);
        assert_eq!(rep.stabilizer_index, 1);
        assert_eq!(rep.rhs_total, 2);
    }
}
