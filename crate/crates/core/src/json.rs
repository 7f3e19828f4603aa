//! On-disk JSON formats and their validated conversions to core types.
//!
//! Algebra files list only `i < j` bracket entries; the antisymmetric
//! completion is implied. The loader also accepts `i >= j` entries verbatim
//! (mirroring only pairs given once), so that structurally broken inputs can
//! be expressed and then rejected by the validators with a witness.

use crate::error::{CoreError, Result};
use crate::integrals::{FamilyMember, IntegralFamily, Provenance};
use crate::lie::{StructureConstants, SubspaceBasis};
use crate::linalg::Mat;
use crate::nijenhuis::{BracketPencil, PencilOrigin};
use crate::poly::MultiPoly;
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A file-format error with a JSON-pointer-style location.
#[derive(Debug, Clone, Serialize)]
pub struct FileError {
    pub pointer: String,
    pub message: String,
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.pointer, self.message)
    }
}

impl std::error::Error for FileError {}

pub type FileResult<T> = std::result::Result<T, FileError>;

fn err<T>(pointer: impl Into<String>, message: impl Into<String>) -> FileResult<T> {
    Err(FileError {
        pointer: pointer.into(),
        message: message.into(),
    })
}

// ---- algebra ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, Rat>,
}

pub fn algebra_to_file(c: &StructureConstants) -> AlgebraFile {
    let n = c.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut coeffs = BTreeMap::new();
            for k in 0..n {
                let v = c.entry(i, j, k);
                if !v.is_zero() {
                    coeffs.insert(k.to_string(), v.clone());
                }
            }
            if !coeffs.is_empty() {
                brackets.push(BracketEntry { i, j, coeffs });
            }
        }
    }
    AlgebraFile {
        dim: n,
        labels: c.labels().map(|l| l.to_vec()),
        brackets,
    }
}

pub fn algebra_from_file(f: &AlgebraFile) -> FileResult<StructureConstants> {
    let n = f.dim;
    if let Some(labels) = &f.labels {
        if labels.len() != n {
            return err(
                "/labels",
                format!("expected {n} labels, found {}", labels.len()),
            );
        }
    }
    let mut c = StructureConstants::zero(n);
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (idx, entry) in f.brackets.iter().enumerate() {
        let here = format!("/brackets/{idx}");
        if entry.i >= n {
            return err(
                format!("{here}/i"),
                format!("index {} out of range for dim {n}", entry.i),
            );
        }
        if entry.j >= n {
            return err(
                format!("{here}/j"),
                format!("index {} out of range for dim {n}", entry.j),
            );
        }
        if seen.contains(&(entry.i, entry.j)) {
            return err(
                here,
                format!("duplicate bracket entry ({}, {})", entry.i, entry.j),
            );
        }
        seen.push((entry.i, entry.j));
        for (key, v) in &entry.coeffs {
            let k: usize = match key.parse() {
                Ok(k) => k,
                Err(_) => {
                    return err(
                        format!("{here}/coeffs/{key}"),
                        "coefficient key must be a basis index",
                    )
                }
            };
            if k >= n {
                return err(
                    format!("{here}/coeffs/{key}"),
                    format!("index {k} out of range for dim {n}"),
                );
            }
            c.set_entry(entry.i, entry.j, k, v.clone());
            // antisymmetric completion only when the mirror is not given
            if entry.i != entry.j
                && !seen.contains(&(entry.j, entry.i))
                && !f.brackets.iter().any(|e| (e.i, e.j) == (entry.j, entry.i))
            {
                c.set_entry(entry.j, entry.i, k, -v);
            }
        }
    }
    if let Some(labels) = &f.labels {
        c.set_labels(labels.clone());
    }
    Ok(c)
}

pub fn parse_algebra(text: &str) -> FileResult<StructureConstants> {
    let file: AlgebraFile = parse_json(text)?;
    algebra_from_file(&file)
}

// ---- operator ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dim: usize,
    pub matrix: Vec<Vec<Rat>>,
}

pub fn operator_to_file(m: &Mat) -> OperatorFile {
    OperatorFile {
        dim: m.nrows(),
        matrix: m.rows_vec(),
    }
}

pub fn operator_from_file(f: &OperatorFile) -> FileResult<Mat> {
    if f.matrix.len() != f.dim {
        return err(
            "/matrix",
            format!("expected {} rows, found {}", f.dim, f.matrix.len()),
        );
    }
    for (i, row) in f.matrix.iter().enumerate() {
        if row.len() != f.dim {
            return err(
                format!("/matrix/{i}"),
                format!("expected {} columns, found {}", f.dim, row.len()),
            );
        }
    }
    Ok(Mat::from_rows(f.matrix.clone()))
}

pub fn parse_operator(text: &str) -> FileResult<Mat> {
    let file: OperatorFile = parse_json(text)?;
    operator_from_file(&file)
}

// ---- subspace ----

pub fn parse_subspace(text: &str, ambient: usize) -> FileResult<SubspaceBasis> {
    let vectors: Vec<Vec<Rat>> = parse_json(text)?;
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != ambient {
            return err(
                format!("/{i}"),
                format!("expected length {ambient}, found {}", v.len()),
            );
        }
    }
    SubspaceBasis::new(vectors, ambient).map_err(|e| FileError {
        pointer: "/".into(),
        message: e.to_string(),
    })
}

// ---- pencil ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PencilFile {
    pub c1: AlgebraFile,
    pub c2: AlgebraFile,
    pub exceptional: Vec<Rat>,
    #[serde(default = "default_origin")]
    pub origin: String,
}

fn default_origin() -> String {
    "manual".into()
}

pub fn pencil_to_file(p: &BracketPencil) -> PencilFile {
    PencilFile {
        c1: algebra_to_file(p.c1()),
        c2: algebra_to_file(p.c2()),
        exceptional: p.exceptional().to_vec(),
        origin: match p.origin() {
            PencilOrigin::FromOperator => "from-operator".into(),
            PencilOrigin::Outer => "outer".into(),
            PencilOrigin::Manual => "manual".into(),
        },
    }
}

pub fn pencil_from_file(f: &PencilFile) -> FileResult<BracketPencil> {
    let c1 = algebra_from_file(&f.c1).map_err(|e| FileError {
        pointer: format!("/c1{}", e.pointer),
        message: e.message,
    })?;
    let c2 = algebra_from_file(&f.c2).map_err(|e| FileError {
        pointer: format!("/c2{}", e.pointer),
        message: e.message,
    })?;
    let origin = match f.origin.as_str() {
        "from-operator" => PencilOrigin::FromOperator,
        "outer" => PencilOrigin::Outer,
        "manual" => PencilOrigin::Manual,
        other => return err("/origin", format!("unknown origin `{other}`")),
    };
    BracketPencil::new(c1, c2, f.exceptional.clone(), origin).map_err(|e| FileError {
        pointer: "/".into(),
        message: e.to_string(),
    })
}

pub fn parse_pencil(text: &str) -> FileResult<BracketPencil> {
    let file: PencilFile = parse_json(text)?;
    pencil_from_file(&file)
}

// ---- integral families ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub nvars: usize,
    pub provenance: String,
    pub members: Vec<MemberFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberFile {
    pub name: String,
    pub k: usize,
    pub l: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    pub exps: Vec<u32>,
    pub coeff: Rat,
}

pub fn family_to_file(fam: &IntegralFamily) -> FamilyFile {
    FamilyFile {
        nvars: fam.nvars(),
        provenance: match fam.provenance() {
            Provenance::Manakov => "manakov",
            Provenance::Resolvent => "resolvent",
            Provenance::Borel => "borel",
            Provenance::CasimirExpansion => "casimir-expansion",
            Provenance::Manual => "manual",
        }
        .into(),
        members: fam
            .members()
            .iter()
            .map(|m| MemberFile {
                name: m.name.clone(),
                k: m.k,
                l: m.l,
                terms: m
                    .poly
                    .terms()
                    .map(|(mono, coeff)| TermFile {
                        exps: mono.0.clone(),
                        coeff: coeff.clone(),
                    })
                    .collect(),
            })
            .collect(),
        warnings: fam.warnings().to_vec(),
    }
}

pub fn family_from_file(f: &FamilyFile) -> FileResult<IntegralFamily> {
    let provenance = match Provenance::parse(&f.provenance) {
        Some(p) => p,
        None => {
            return err(
                "/provenance",
                format!("unknown provenance `{}`", f.provenance),
            )
        }
    };
    let mut members = Vec::new();
    for (i, m) in f.members.iter().enumerate() {
        let mut poly = MultiPoly::zero(f.nvars);
        for (t, term) in m.terms.iter().enumerate() {
            if term.exps.len() != f.nvars {
                return err(
                    format!("/members/{i}/terms/{t}/exps"),
                    format!("expected {} exponents, found {}", f.nvars, term.exps.len()),
                );
            }
            poly.add_term(term.exps.clone(), &term.coeff);
        }
        members.push(FamilyMember {
            name: m.name.clone(),
            k: m.k,
            l: m.l,
            poly,
        });
    }
    let mut fam = IntegralFamily::new(f.nvars, provenance, members).map_err(|e| FileError {
        pointer: "/members".into(),
        message: e.to_string(),
    })?;
    for w in &f.warnings {
        fam.push_warning(w.clone());
    }
    Ok(fam)
}

pub fn parse_family(text: &str) -> FileResult<IntegralFamily> {
    let file: FamilyFile = parse_json(text)?;
    family_from_file(&file)
}

// ---- representation / action ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionFile {
    pub dim_v: usize,
    pub matrices: Vec<Vec<Vec<Rat>>>,
}

pub fn parse_action(text: &str) -> FileResult<(Vec<Mat>, usize)> {
    let file: ActionFile = parse_json(text)?;
    let mut out = Vec::new();
    for (i, rows) in file.matrices.iter().enumerate() {
        if rows.len() != file.dim_v || rows.iter().any(|r| r.len() != file.dim_v) {
            return err(
                format!("/matrices/{i}"),
                format!("expected a {0}x{0} matrix", file.dim_v),
            );
        }
        out.push(Mat::from_rows(rows.clone()));
    }
    Ok((out, file.dim_v))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> FileResult<T> {
    serde_json::from_str(text).map_err(|e| FileError {
        pointer: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Lift a core error into a file error at the document root.
pub fn core_to_file_error(e: CoreError) -> FileError {
    FileError {
        pointer: "/".into(),
        message: e.to_string(),
    }
}

/// Convenience used by the round-trip tests and the CLI.
pub fn validated_algebra_roundtrip(c: &StructureConstants) -> Result<StructureConstants> {
    let file = algebra_to_file(c);
    algebra_from_file(&file).map_err(|e| CoreError::InvalidParameter {
        message: e.to_string(),
    })
}
