//! Rank profiles of Lie–Poisson pencils, kroneckerity certification via
//! witness points, and the coisotropy-number criteria.
//!
//! Rank constancy over the pencil is established positively: lower
//! semicontinuity of rank makes any witness point a certificate, so a pencil
//! is CERTIFIED once every exceptional member (and the undeformed member)
//! attains the sampled generic rank somewhere. Negative outcomes are always
//! "not found within budget", never a disproof.

use crate::error::{CoreError, Result};
use crate::lie::{
    algebra_index_stable, coisotropy_numbers, lie_poisson_matrix, subalgebra_restrict, Covector,
    StructureConstants, SubspaceBasis,
};
use crate::linalg::Mat;
use crate::nijenhuis::{image_subalgebra, pencil_of, spectrum_and_eigenspaces, BracketPencil};
use crate::rat::Rat;
use crate::sample::{sample_scalar_avoiding, sample_vector, PointSamplerConfig};
use rayon::prelude::*;
use serde::Serialize;

/// Wording attached to every pencil/coisotropy report: how genericity is
/// operationalized and in which direction the computed numbers are certified.
pub const GENERICITY_NOTE: &str = "Genericity is operationalized by seeded integer sample points \
with exact rank computation. Every reported rank is a certified lower bound for the generic rank \
(witness included), every index an upper bound for the algebra index. The open-dense-set \
assumption on nonsingular orbits is checked through its operational consequence: sampled \
non-exceptional members attain rank dim - ind.";

/// Exact rank of the pencil member `s1 c1 + s2 c2` at the point `xi`.
pub fn pencil_rank_at(p: &BracketPencil, s: (&Rat, &Rat), xi: &[Rat]) -> Result<usize> {
    if s.0.is_zero() && s.1.is_zero() {
        return Err(CoreError::ZeroParameter);
    }
    let member = p.member(s.0, s.1);
    Ok(lie_poisson_matrix(&member, xi)?.rank())
}

/// A rank witness for the generic part of the pencil.
#[derive(Clone, Debug, Serialize)]
pub struct GenericRankWitness {
    pub rank: usize,
    pub lambda: Rat,
    pub point: Vec<Rat>,
}

/// Maximum rank over sampled members `[,]' - lambda [,]` (lambda outside the
/// exceptional list) at sampled points.
pub fn generic_rank(p: &BracketPencil, cfg: &PointSamplerConfig) -> Result<GenericRankWitness> {
    let n = p.dim();
    let results: Vec<(usize, Rat, Vec<Rat>)> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let lambda = sample_scalar_avoiding(
                cfg.seed.wrapping_add(1),
                i,
                cfg.coord_bound,
                p.exceptional(),
            );
            let xi = sample_vector(cfg.seed.wrapping_add(2), i, n, cfg.coord_bound);
            let member = p.member_for_lambda(&lambda);
            let rank = lie_poisson_matrix(&member, &xi)
                .expect("dimensions validated at construction")
                .rank();
            (rank, lambda, xi)
        })
        .collect();
    let mut best = GenericRankWitness {
        rank: 0,
        lambda: Rat::zero(),
        point: vec![Rat::zero(); n],
    };
    let mut found = false;
    for (rank, lambda, point) in results {
        if !found || rank > best.rank {
            best = GenericRankWitness {
                rank,
                lambda,
                point,
            };
            found = true;
        }
    }
    Ok(best)
}

/// Search record for one pencil member.
#[derive(Clone, Debug, Serialize)]
pub struct MemberRank {
    /// `Some(lambda)` for the member `[,]' - lambda [,]`; `None` for the
    /// undeformed member s = (1, 0).
    pub lambda: Option<Rat>,
    pub s: (Rat, Rat),
    pub best_rank: usize,
    pub witness: Option<Vec<Rat>>,
    pub attained_generic_rank: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KroneckerVerdict {
    #[serde(rename = "CERTIFIED_KRONECKER")]
    Certified,
    #[serde(rename = "UNDECIDED")]
    Undecided,
}

/// Full rank profile of a pencil: generic rank with witness, one search
/// record per exceptional member, and the record of the undeformed member.
#[derive(Clone, Debug, Serialize)]
pub struct PencilRankProfile {
    pub verdict: KroneckerVerdict,
    pub generic_rank: usize,
    pub generic_witness: GenericRankWitness,
    pub per_exceptional: Vec<MemberRank>,
    pub infinity_member: MemberRank,
    pub degenerate: bool,
    pub samples_used: usize,
    pub coord_bound: u64,
    pub seed: u64,
    pub genericity_note: &'static str,
}

impl PencilRankProfile {
    pub fn certified(&self) -> bool {
        self.verdict == KroneckerVerdict::Certified
    }
}

fn search_member(
    member: &StructureConstants,
    target: usize,
    cfg: &PointSamplerConfig,
    stream: u64,
) -> (usize, Option<Vec<Rat>>) {
    let n = member.dim();
    let mut best_rank = 0;
    let mut best_witness: Option<Vec<Rat>> = None;
    for (stage, bound) in cfg.bound_schedule().into_iter().enumerate() {
        let results: Vec<(usize, Vec<Rat>)> = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let xi = sample_vector(
                    cfg.seed.wrapping_add(stream),
                    (stage as u64) << 32 | i,
                    n,
                    bound,
                );
                let rank = lie_poisson_matrix(member, &xi).expect("dims").rank();
                (rank, xi)
            })
            .collect();
        for (rank, xi) in results {
            if rank > best_rank {
                best_rank = rank;
                best_witness = Some(xi);
            }
            if best_rank >= target {
                return (best_rank, best_witness);
            }
        }
    }
    (best_rank, best_witness)
}

/// Certifies kroneckerity of the pencil by finding, for every member, a
/// point where the member attains the generic rank.
pub fn kronecker_certify(p: &BracketPencil, cfg: &PointSamplerConfig) -> Result<PencilRankProfile> {
    if p.is_degenerate() {
        // All members are proportional; the profile of c1 is the profile of
        // the whole family.
        let generic = generic_rank_of_constants(p.c1(), cfg);
        let infinity = MemberRank {
            lambda: None,
            s: (Rat::one(), Rat::zero()),
            best_rank: generic.rank,
            witness: Some(generic.point.clone()),
            attained_generic_rank: true,
        };
        return Ok(PencilRankProfile {
            verdict: KroneckerVerdict::Certified,
            generic_rank: generic.rank,
            generic_witness: generic,
            per_exceptional: Vec::new(),
            infinity_member: infinity,
            degenerate: true,
            samples_used: cfg.samples,
            coord_bound: cfg.coord_bound,
            seed: cfg.seed,
            genericity_note: GENERICITY_NOTE,
        });
    }

    let generic = generic_rank(p, cfg)?;
    let d = generic.rank;

    let mut per_exceptional = Vec::new();
    for (member_no, lambda) in p.exceptional().iter().enumerate() {
        let member = p.member_for_lambda(lambda);
        let (best_rank, witness) = search_member(&member, d, cfg, 100 + member_no as u64);
        per_exceptional.push(MemberRank {
            lambda: Some(lambda.clone()),
            s: (-lambda, Rat::one()),
            best_rank,
            witness,
            attained_generic_rank: best_rank == d,
        });
    }

    let (inf_rank, inf_witness) = search_member(p.c1(), d, cfg, 99);
    let infinity_member = MemberRank {
        lambda: None,
        s: (Rat::one(), Rat::zero()),
        best_rank: inf_rank,
        witness: inf_witness,
        attained_generic_rank: inf_rank == d,
    };

    let all_attained = per_exceptional.iter().all(|m| m.attained_generic_rank)
        && infinity_member.attained_generic_rank;
    Ok(PencilRankProfile {
        verdict: if all_attained {
            KroneckerVerdict::Certified
        } else {
            KroneckerVerdict::Undecided
        },
        generic_rank: d,
        generic_witness: generic,
        per_exceptional,
        infinity_member,
        degenerate: false,
        samples_used: cfg.samples,
        coord_bound: cfg.coord_bound,
        seed: cfg.seed,
        genericity_note: GENERICITY_NOTE,
    })
}

fn generic_rank_of_constants(
    c: &StructureConstants,
    cfg: &PointSamplerConfig,
) -> GenericRankWitness {
    let est = crate::lie::algebra_index(c, cfg);
    GenericRankWitness {
        rank: est.max_rank_found,
        lambda: Rat::zero(),
        point: est.witness,
    }
}

/// Per-eigenvalue record of the coisotropy computations.
#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueRow {
    pub lambda: Rat,
    pub subalgebra_dim: usize,
    pub codim: usize,
    /// Index of the image subalgebra itself (the zero-covector numbers).
    pub ind: usize,
    pub corollary_holds: bool,
    /// Present when the criterion search found (or reused `c = 0` as) a
    /// witness covector satisfying `ind c + codim c = ind g`.
    pub witness: Option<CovectorWitness>,
    pub criterion_holds: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovectorWitness {
    pub covector: Vec<Rat>,
    /// Standard-basis indices of the quotient complement the covector is
    /// written against.
    pub complement_columns: Vec<usize>,
    pub ind: usize,
    pub codim: usize,
    pub stabilizer_dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoisotropyVerdict {
    #[serde(rename = "HOLDS")]
    Holds,
    #[serde(rename = "FAILS")]
    Fails,
    #[serde(rename = "FOUND_ALL")]
    FoundAll,
    #[serde(rename = "NOT_FOUND_WITHIN_BUDGET")]
    NotFoundWithinBudget,
}

/// Report of the sufficient condition (zero covectors) or of the full
/// criterion (searched covectors) over all eigenvalues of the operator.
#[derive(Clone, Debug, Serialize)]
pub struct CoisotropyReport {
    pub mode: &'static str,
    pub verdict: CoisotropyVerdict,
    /// Certified upper bound for ind g used as the right-hand side.
    pub algebra_index: usize,
    pub rows: Vec<EigenvalueRow>,
    /// Cross-check performed when the criterion search fails: kroneckerity
    /// certification of the same pencil.
    pub kronecker_cross_check: Option<KroneckerVerdict>,
    /// Set when the cross-check certified the pencil although the covector
    /// search came up empty: a larger search budget is warranted.
    pub needs_larger_budget: bool,
    pub seed: u64,
    pub samples: usize,
    pub coord_bound: u64,
    pub search_budget: Option<usize>,
    pub genericity_note: &'static str,
}

impl CoisotropyReport {
    pub fn positive(&self) -> bool {
        matches!(
            self.verdict,
            CoisotropyVerdict::Holds | CoisotropyVerdict::FoundAll
        )
    }
}

fn diagonalizable_spectrum(n_op: &Mat) -> Result<Vec<Rat>> {
    let spectrum = spectrum_and_eigenspaces(n_op)?;
    for e in &spectrum {
        if e.riesz_index != 1 {
            return Err(CoreError::NotDiagonalizable {
                lambda: Box::new(e.eigenvalue.clone()),
                riesz: e.riesz_index,
            });
        }
    }
    Ok(spectrum.into_iter().map(|e| e.eigenvalue).collect())
}

struct EigenvalueData {
    lambda: Rat,
    subalgebra: SubspaceBasis,
    codim: usize,
    ind: usize,
}

fn eigenvalue_data(
    c: &StructureConstants,
    n_op: &Mat,
    cfg: &PointSamplerConfig,
) -> Result<Vec<EigenvalueData>> {
    let mut out = Vec::new();
    for lambda in diagonalizable_spectrum(n_op)? {
        let subalgebra = image_subalgebra(c, n_op, &lambda)?;
        let restricted = subalgebra_restrict(c, &subalgebra)?;
        let ind = algebra_index_stable(&restricted, cfg).index;
        let codim = c.dim() - subalgebra.dim();
        out.push(EigenvalueData {
            lambda,
            subalgebra,
            codim,
            ind,
        });
    }
    Ok(out)
}

/// The sufficient condition: for every eigenvalue,
/// `ind im(N - lambda) + codim im(N - lambda) = ind g`.
pub fn corollary_condition(
    c: &StructureConstants,
    n_op: &Mat,
    cfg: &PointSamplerConfig,
) -> Result<CoisotropyReport> {
    let ind_g = algebra_index_stable(c, cfg).index;
    let rows: Vec<EigenvalueRow> = eigenvalue_data(c, n_op, cfg)?
        .into_iter()
        .map(|d| {
            let holds = d.ind + d.codim == ind_g;
            EigenvalueRow {
                lambda: d.lambda,
                subalgebra_dim: d.subalgebra.dim(),
                codim: d.codim,
                ind: d.ind,
                corollary_holds: holds,
                witness: None,
                criterion_holds: None,
            }
        })
        .collect();
    let verdict = if rows.iter().all(|r| r.corollary_holds) {
        CoisotropyVerdict::Holds
    } else {
        CoisotropyVerdict::Fails
    };
    Ok(CoisotropyReport {
        mode: "corollary",
        verdict,
        algebra_index: ind_g,
        rows,
        kronecker_cross_check: None,
        needs_larger_budget: false,
        seed: cfg.seed,
        samples: cfg.samples,
        coord_bound: cfg.coord_bound,
        search_budget: None,
        genericity_note: GENERICITY_NOTE,
    })
}

/// The full criterion: for every eigenvalue, searches for a covector `c_i`
/// on `g / im(N - lambda_i)` with `ind c_i + codim c_i = ind g`. The zero
/// covector is tried first, then `search_budget` sampled covectors over the
/// bound schedule.
pub fn theorem_criterion(
    c: &StructureConstants,
    n_op: &Mat,
    cfg: &PointSamplerConfig,
    search_budget: usize,
) -> Result<CoisotropyReport> {
    let ind_g = algebra_index_stable(c, cfg).index;
    let data = eigenvalue_data(c, n_op, cfg)?;
    let mut rows = Vec::new();
    for (no, d) in data.iter().enumerate() {
        let q = c.dim() - d.subalgebra.dim();
        let corollary_holds = d.ind + d.codim == ind_g;
        let mut witness: Option<CovectorWitness> = None;

        // c = 0 first: it reproduces the corollary quantities.
        let mut candidates: Vec<Covector> = vec![Covector::zero(q)];
        let schedule = cfg.bound_schedule();
        for b in 0..search_budget {
            let bound = schedule[(b * schedule.len()) / search_budget.max(1)];
            candidates.push(Covector(sample_vector(
                cfg.seed.wrapping_add(300 + no as u64),
                b as u64,
                q,
                bound,
            )));
        }
        for cand in candidates {
            let nums = coisotropy_numbers(c, &d.subalgebra, &cand, cfg)?;
            if nums.ind.index + nums.codim == ind_g {
                witness = Some(CovectorWitness {
                    covector: cand.0,
                    complement_columns: nums.complement,
                    ind: nums.ind.index,
                    codim: nums.codim,
                    stabilizer_dim: nums.stabilizer.dim(),
                });
                break;
            }
        }

        let found = witness.is_some();
        rows.push(EigenvalueRow {
            lambda: d.lambda.clone(),
            subalgebra_dim: d.subalgebra.dim(),
            codim: d.codim,
            ind: d.ind,
            corollary_holds,
            witness,
            criterion_holds: Some(found),
        });
    }

    let all_found = rows.iter().all(|r| r.criterion_holds == Some(true));
    let (verdict, cross, needs_more) = if all_found {
        (CoisotropyVerdict::FoundAll, None, false)
    } else {
        // Not a disproof; cross-check against the rank certification.
        let cross = pencil_of(c, n_op)
            .and_then(|p| kronecker_certify(&p, cfg))
            .map(|profile| profile.verdict)
            .ok();
        let needs_more = cross == Some(KroneckerVerdict::Certified);
        (CoisotropyVerdict::NotFoundWithinBudget, cross, needs_more)
    };

    Ok(CoisotropyReport {
        mode: "criterion",
        verdict,
        algebra_index: ind_g,
        rows,
        kronecker_cross_check: cross,
        needs_larger_budget: needs_more,
        seed: cfg.seed,
        samples: cfg.samples,
        coord_bound: cfg.coord_bound,
        search_budget: Some(search_budget),
        genericity_note: GENERICITY_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nijenhuis::PencilOrigin;

    fn r(x: i64) -> Rat {
        Rat::from_int(x)
    }

    fn cfg() -> PointSamplerConfig {
        PointSamplerConfig::new(42, 24, 100)
    }

    fn gl2_pencil() -> BracketPencil {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        pencil_of(&c, &n_op).unwrap()
    }

    #[test]
    fn rank_at_examples() {
        let p = gl2_pencil();
        let zero = vec![r(0); 4];
        assert_eq!(pencil_rank_at(&p, (&r(1), &r(1)), &zero).unwrap(), 0);
        // deformed member at a generic integer point has rank 2
        let xi = vec![r(3), r(-1), r(7), r(2)];
        assert_eq!(pencil_rank_at(&p, (&r(0), &r(1)), &xi).unwrap(), 2);
        assert!(matches!(
            pencil_rank_at(&p, (&r(0), &r(0)), &xi),
            Err(CoreError::ZeroParameter)
        ));
        // projective invariance
        assert_eq!(
            pencil_rank_at(&p, (&r(-3), &r(2)), &xi).unwrap(),
            pencil_rank_at(&p, (&r(-6), &r(4)), &xi).unwrap()
        );
        // undeformed member of sl_2 at a generic point
        let (c, n_op) = catalog::borel_projector(2, &r(1), &r(-1)).unwrap();
        let ps = pencil_of(&c, &n_op).unwrap();
        assert_eq!(
            pencil_rank_at(&ps, (&r(1), &r(0)), &[r(1), r(2), r(5)]).unwrap(),
            2
        );
    }

    #[test]
    fn generic_rank_values() {
        let abelian = BracketPencil::new(
            StructureConstants::zero(3),
            StructureConstants::zero(3),
            vec![],
            PencilOrigin::Manual,
        )
        .unwrap();
        assert_eq!(generic_rank(&abelian, &cfg()).unwrap().rank, 0);
        assert_eq!(generic_rank(&gl2_pencil(), &cfg()).unwrap().rank, 2);
        let (c, n_op) = catalog::borel_projector(3, &r(1), &r(-1)).unwrap();
        let p = pencil_of(&c, &n_op).unwrap();
        assert_eq!(generic_rank(&p, &cfg()).unwrap().rank, 6);
    }

    #[test]
    fn kronecker_gl2_and_sl2() {
        let profile = kronecker_certify(&gl2_pencil(), &cfg()).unwrap();
        assert!(profile.certified());
        assert_eq!(profile.generic_rank, 2);
        assert_eq!(profile.per_exceptional.len(), 2);
        assert!(profile.infinity_member.attained_generic_rank);

        let (c, n_op) = catalog::borel_projector(2, &r(1), &r(-1)).unwrap();
        let p = pencil_of(&c, &n_op).unwrap();
        let profile = kronecker_certify(&p, &cfg()).unwrap();
        assert!(profile.certified());
        assert_eq!(profile.generic_rank, 2);
    }

    #[test]
    fn degenerate_pencil_certifies_trivially() {
        let c = catalog::sl_constants(2);
        let p = BracketPencil::new(c.clone(), c, vec![r(1)], PencilOrigin::Manual).unwrap();
        assert!(p.is_degenerate());
        let profile = kronecker_certify(&p, &cfg()).unwrap();
        assert!(profile.certified());
        assert!(profile.degenerate);
        assert_eq!(profile.generic_rank, 2);
    }

    #[test]
    fn zero_infinity_member_stays_undecided() {
        // c1 = 0, c2 = aff(1): the undeformed member is the zero bivector
        // and can never reach the generic rank 2.
        let mut c2 = StructureConstants::zero(2);
        c2.set_bracket(0, 1, &[(1, r(1))]);
        let p = BracketPencil::new(
            StructureConstants::zero(2),
            c2,
            vec![r(0)],
            PencilOrigin::Manual,
        )
        .unwrap();
        assert!(!p.is_degenerate());
        let profile = kronecker_certify(&p, &cfg()).unwrap();
        assert_eq!(profile.verdict, KroneckerVerdict::Undecided);
        assert_eq!(profile.generic_rank, 2);
        assert_eq!(profile.infinity_member.best_rank, 0);
        assert!(profile.per_exceptional[0].attained_generic_rank);
    }

    #[test]
    fn corollary_on_gl2_left_mult_holds() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let rep = corollary_condition(&c, &n_op, &cfg()).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::Holds);
        assert_eq!(rep.algebra_index, 2);
        for row in &rep.rows {
            assert_eq!(row.ind, 0); // zero-row subalgebras are Frobenius
            assert_eq!(row.codim, 2);
            assert!(row.corollary_holds);
        }
    }

    #[test]
    fn corollary_on_sl2_projector_fails_overall() {
        let entry = catalog::build("sl2_projector", &Default::default()).unwrap();
        let rep =
            corollary_condition(&entry.algebra, entry.operator.as_ref().unwrap(), &cfg()).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::Fails);
        assert_eq!(rep.algebra_index, 1);
        // eigenvalue 0 has image n- (a line): ind 1 + codim 2 != 1, fails;
        // eigenvalue 1 has image b+ : ind 0 + codim 1 = 1, holds.
        let row0 = &rep.rows[0];
        assert_eq!(row0.lambda, r(0));
        assert_eq!((row0.subalgebra_dim, row0.ind, row0.codim), (1, 1, 2));
        assert!(!row0.corollary_holds);
        let row1 = &rep.rows[1];
        assert_eq!(row1.lambda, r(1));
        assert_eq!((row1.subalgebra_dim, row1.ind, row1.codim), (2, 0, 1));
        assert!(row1.corollary_holds);
    }

    #[test]
    fn corollary_scalar_operator_on_abelian_and_nonabelian() {
        // N = 2 Id on abelian: image is 0, ind 0, codim = dim = ind g: holds
        let ab = StructureConstants::zero(3);
        let rep = corollary_condition(&ab, &Mat::identity(3).scale(&r(2)), &cfg()).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::Holds);
        // on sl_2: codim 3 != ind 1: fails
        let c = catalog::sl_constants(2);
        let rep = corollary_condition(&c, &Mat::identity(3).scale(&r(2)), &cfg()).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::Fails);
    }

    #[test]
    fn criterion_certifies_sl2_borel_with_nonzero_witness() {
        let (c, n_op) = catalog::borel_projector(2, &r(1), &r(-1)).unwrap();
        let rep = theorem_criterion(&c, &n_op, &cfg(), 32).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::FoundAll);
        // eigenvalue -1 carries image n-, where the zero covector fails and
        // a nonzero one with (ind, codim) = (0, 1) must be found
        let row = rep
            .rows
            .iter()
            .find(|row| row.lambda == r(-1))
            .expect("eigenvalue -1 present");
        assert!(!row.corollary_holds);
        let w = row.witness.as_ref().unwrap();
        assert!(w.covector.iter().any(|v| !v.is_zero()));
        assert_eq!((w.ind, w.codim), (0, 1));
        // the other eigenvalue already satisfies the zero-covector route
        let other = rep.rows.iter().find(|row| row.lambda == r(1)).unwrap();
        assert!(other.corollary_holds);
        assert!(other
            .witness
            .as_ref()
            .unwrap()
            .covector
            .iter()
            .all(Rat::is_zero));
    }

    #[test]
    fn criterion_on_gl2_uses_zero_covectors() {
        let (c, n_op) = catalog::left_mult(2, &[r(1), r(2)]).unwrap();
        let rep = theorem_criterion(&c, &n_op, &cfg(), 8).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::FoundAll);
        for row in &rep.rows {
            assert!(row
                .witness
                .as_ref()
                .unwrap()
                .covector
                .iter()
                .all(Rat::is_zero));
        }
    }

    #[test]
    fn criterion_budget_zero_reports_not_found_with_cross_check() {
        let entry = catalog::build("sl2_projector", &Default::default()).unwrap();
        let rep =
            theorem_criterion(&entry.algebra, entry.operator.as_ref().unwrap(), &cfg(), 0).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::NotFoundWithinBudget);
        assert_eq!(rep.kronecker_cross_check, Some(KroneckerVerdict::Certified));
        assert!(rep.needs_larger_budget);
    }

    #[test]
    fn criterion_abelian_any_diagonalizable() {
        let ab = StructureConstants::zero(3);
        let n_op = Mat::diagonal(&[r(1), r(1), r(4)]);
        let rep = theorem_criterion(&ab, &n_op, &cfg(), 4).unwrap();
        assert_eq!(rep.verdict, CoisotropyVerdict::FoundAll);
    }

    #[test]
    fn criterion_rejects_jordan_blocks() {
        let c = StructureConstants::zero(2);
        let mut jordan = Mat::zeros(2, 2);
        jordan[(0, 1)] = r(1);
        assert!(matches!(
            theorem_criterion(&c, &jordan, &cfg(), 4),
            Err(CoreError::NotDiagonalizable { .. })
        ));
    }
}
