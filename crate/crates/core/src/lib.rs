//! Exact rational machinery for pencils of Lie brackets.
//!
//! The crate builds Lie algebras from structure constants, deforms their
//! brackets along Nijenhuis operators, certifies rank constancy of the
//! resulting Lie–Poisson pencils through witness points, and constructs the
//! commuting polynomial first integrals the pencils carry. All arithmetic is
//! over arbitrary-precision rationals: every rank, index and verdict in a
//! report is exact, and every randomized search is seeded and reproducible.

// dense tensor code reads better with explicit index loops
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod error;
pub mod integrals;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod nijenhuis;
pub mod pencil;
pub mod poly;
pub mod rat;
pub mod sample;

pub use error::{CoreError, Result};
pub use integrals::IntegralFamily;
pub use lie::{Covector, IndexEstimate, StructureConstants, SubspaceBasis, ViolationReport};
pub use linalg::Mat;
pub use nijenhuis::{BracketPencil, Eigenspace, Torsion};
pub use pencil::{CoisotropyReport, PencilRankProfile};
pub use poly::MultiPoly;
pub use rat::Rat;
pub use sample::PointSamplerConfig;
