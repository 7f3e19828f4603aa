//! Shared fixtures for the benchmark targets.

use pforge_core::catalog;
use pforge_core::nijenhuis::{pencil_of, BracketPencil};
use pforge_core::rat::Rat;
use pforge_core::{Mat, StructureConstants};

pub fn left_mult_pencil(n: usize) -> (StructureConstants, Mat, BracketPencil) {
    let diag: Vec<Rat> = (1..=n as i64).map(Rat::from_int).collect();
    let (c, op) = catalog::left_mult(n, &diag).unwrap();
    let p = pencil_of(&c, &op).unwrap();
    (c, op, p)
}

pub fn diag(n: usize) -> Vec<Rat> {
    (1..=n as i64).map(Rat::from_int).collect()
}
