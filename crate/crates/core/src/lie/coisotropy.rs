//! The infinitesimal coisotropy action of a subalgebra on the dual of its
//! quotient, and the two numbers (stabilizer index, orbit codimension) it
//! attaches to a covector.

use super::{
    algebra_index_stable, subalgebra_restrict, Covector, IndexEstimate, QuotientSplitter,
    StructureConstants, SubspaceBasis,
};
use crate::error::{CoreError, Result};
use crate::linalg::Mat;
use crate::rat::Rat;
use crate::sample::PointSamplerConfig;
use serde::Serialize;

/// The data attached to a covector `a` on `g / h`: the index of its
/// stabilizer inside `h`, the codimension of its orbit in `(g/h)*`, and the
/// stabilizer itself.
#[derive(Clone, Debug, Serialize)]
pub struct CoisotropyNumbers {
    pub ind: IndexEstimate,
    pub codim: usize,
    pub stabilizer: SubspaceBasis,
    /// Standard-basis indices spanning the complement used for quotient
    /// coordinates; fixes the meaning of the covector entries.
    pub complement: Vec<usize>,
}

/// Builds the tangent map of the coisotropy action at `a`,
/// `T: h -> (g/h)*`, `x -> (v mod h -> -a([x, v] mod h))`,
/// and reads off `codim a = dim(g/h) - rank T`, `stabilizer = ker T`,
/// `ind a = index of the stabilizer subalgebra`.
pub fn coisotropy_numbers(
    c: &StructureConstants,
    subalgebra: &SubspaceBasis,
    a: &Covector,
    cfg: &PointSamplerConfig,
) -> Result<CoisotropyNumbers> {
    let n = c.dim();
    let m = subalgebra.dim();
    // Closure of the subalgebra is a precondition; fail early with a witness.
    subalgebra_restrict(c, subalgebra)?;
    let splitter = QuotientSplitter::new(subalgebra)?;
    let q = splitter.quotient_dim();
    if a.len() != q {
        return Err(CoreError::DimensionMismatch {
            expected: q,
            found: a.len(),
            context: "quotient covector",
        });
    }

    // T[beta][j] = -a([b_j, e_{complement[beta]}] mod h)
    let mut t = Mat::zeros(q, m);
    for j in 0..m {
        for (beta, &comp_idx) in splitter.complement().iter().enumerate() {
            let mut e = vec![Rat::zero(); n];
            e[comp_idx] = Rat::one();
            let w = c.bracket(subalgebra.vector(j), &e)?;
            let (_, quot) = splitter.split(&w);
            let mut acc = Rat::zero();
            for (gamma, coeff) in quot.iter().enumerate() {
                if !coeff.is_zero() && !a.0[gamma].is_zero() {
                    acc += coeff * &a.0[gamma];
                }
            }
            t[(beta, j)] = -acc;
        }
    }

    let rank = t.rank();
    let codim = q - rank;

    let kernel_coeffs = t.nullspace();
    let stab_vectors: Vec<Vec<Rat>> = kernel_coeffs
        .iter()
        .map(|kappa| {
            let mut v = vec![Rat::zero(); n];
            for (j, coeff) in kappa.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (row, x) in subalgebra.vector(j).iter().enumerate() {
                    if !x.is_zero() {
                        v[row] += coeff * x;
                    }
                }
            }
            v
        })
        .collect();
    let stabilizer = SubspaceBasis::new(stab_vectors, n)?;

    let restricted = match subalgebra_restrict(c, &stabilizer) {
        Ok(r) => r,
        Err(CoreError::NotASubalgebra { .. }) => return Err(CoreError::StabilizerNotClosed),
        Err(e) => return Err(e),
    };
    let ind = algebra_index_stable(&restricted, cfg);

    Ok(CoisotropyNumbers {
        ind,
        codim,
        stabilizer,
        complement: splitter.complement().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::algebra_index;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn cfg() -> PointSamplerConfig {
        PointSamplerConfig::new(5, 16, 100)
    }

    #[test]
    fn zero_covector_recovers_subalgebra_data() {
        // sl_2, subalgebra = upper Borel span(e, h)
        let c = catalog::sl_constants(2);
        let b = SubspaceBasis::standard(3, &[0, 1]);
        let nums = coisotropy_numbers(&c, &b, &Covector::zero(1), &cfg()).unwrap();
        let restricted = subalgebra_restrict(&c, &b).unwrap();
        assert_eq!(nums.ind.index, algebra_index(&restricted, &cfg()).index);
        assert_eq!(nums.codim, 1);
        assert_eq!(nums.stabilizer.dim(), 2);
    }

    #[test]
    fn sl2_borel_with_nilpotent_direction() {
        // subalgebra b+ = span(e, h); quotient spanned by f-bar; a dual to it
        let c = catalog::sl_constants(2);
        let b = SubspaceBasis::standard(3, &[0, 1]);
        let nums = coisotropy_numbers(&c, &b, &Covector(vec![r(1)]), &cfg()).unwrap();
        assert_eq!(nums.codim, 0);
        assert_eq!(nums.ind.index, 1);
        assert_eq!(nums.stabilizer.dim(), 1);
        // stabilizer is the line through e
        assert_eq!(nums.stabilizer.vector(0), &[r(1), r(0), r(0)]);
    }

    #[test]
    fn sl2_lower_nilpotent_with_semisimple_direction() {
        // subalgebra n- = span(f); quotient spanned by (e-bar, h-bar); a = h^*
        let c = catalog::sl_constants(2);
        let b = SubspaceBasis::standard(3, &[2]);
        let nums = coisotropy_numbers(&c, &b, &Covector(vec![r(0), r(1)]), &cfg()).unwrap();
        assert_eq!(nums.codim, 1);
        assert_eq!(nums.ind.index, 0);
        assert_eq!(nums.stabilizer.dim(), 0);
    }

    #[test]
    fn covector_length_checked() {
        let c = catalog::sl_constants(2);
        let b = SubspaceBasis::standard(3, &[2]);
        assert!(matches!(
            coisotropy_numbers(&c, &b, &Covector(vec![r(1)]), &cfg()),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }
}
