//! `pforge` — validation and certification runs over exact rational
//! arithmetic: Lie algebra validation, bracket pencils, rank profiles,
//! kroneckerity certificates, coisotropy criteria, integral families and
//! their checks.
//!
//! Exit codes: 0 positive verdict, 1 negative or undecided verdict,
//! 2 input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pforge_core::catalog::{self, CatalogParams};
use pforge_core::integrals::{
    borel_family, completeness_rank, family_span_equivalence, involutivity_check, lenard_check,
    manakov_family, resolvent_family_extended,
};
use pforge_core::json;
use pforge_core::lie::{check_jacobi, rais_check, CheckVerdict, Violation};
use pforge_core::nijenhuis::{pencil_of, torsion, BracketPencil};
use pforge_core::pencil::{corollary_condition, kronecker_certify, theorem_criterion};
use pforge_core::rat::Rat;
use pforge_core::sample::PointSamplerConfig;
use pforge_core::{CoreError, IntegralFamily, Mat, StructureConstants};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "pforge",
    version,
    about = "Exact certification of Lie bracket pencils and their integrals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for all randomized searches.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Sample points per search stage.
    #[arg(long, global = true, default_value_t = 64)]
    samples: usize,

    /// Coordinates are drawn from [-coord-bound, coord-bound].
    #[arg(long = "coord-bound", global = true, default_value_t = 1000)]
    coord_bound: u64,

    /// Covector search budget for the criterion.
    #[arg(long, global = true, default_value_t = 64)]
    budget: usize,

    /// Write the report here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct AlgebraInput {
    /// Lie algebra JSON file.
    #[arg(short = 'i', long = "input")]
    algebra: PathBuf,
}

#[derive(Args)]
struct OperatorInput {
    /// Operator JSON file.
    #[arg(short = 'N', long = "operator")]
    operator: PathBuf,
}

#[derive(Args)]
struct PencilInput {
    /// Lie algebra JSON file (with -N builds the operator pencil).
    #[arg(short = 'i', long = "input")]
    algebra: Option<PathBuf>,

    /// Operator JSON file.
    #[arg(short = 'N', long = "operator")]
    operator: Option<PathBuf>,

    /// Pencil JSON file (two algebras plus exceptional list).
    #[arg(long)]
    pencil: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check antisymmetry and the Jacobi identity; with -N also the torsion.
    Validate {
        #[command(flatten)]
        algebra: AlgebraInput,
        #[arg(short = 'N', long = "operator")]
        operator: Option<PathBuf>,
    },
    /// Build a bracket pencil and validate compatibility.
    Pencil {
        #[command(flatten)]
        input: PencilInput,
    },
    /// Full rank profile of a pencil (generic rank, member witnesses).
    RankProfile {
        #[command(flatten)]
        input: PencilInput,
    },
    /// Certify rank constancy of the pencil through witness points.
    Kronecker {
        #[command(flatten)]
        input: PencilInput,
    },
    /// Check the sufficient condition ind + codim = ind g on image
    /// subalgebras.
    Corollary {
        #[command(flatten)]
        algebra: AlgebraInput,
        #[command(flatten)]
        operator: OperatorInput,
    },
    /// Search covector witnesses for the full criterion.
    Criterion {
        #[command(flatten)]
        algebra: AlgebraInput,
        #[command(flatten)]
        operator: OperatorInput,
    },
    /// Emit an integral family (manakov | resolvent | borel).
    Integrals {
        /// Family name: manakov, resolvent or borel.
        family: String,
        #[arg(long)]
        n: usize,
        /// Diagonal of A, e.g. --a 1,2,3 (defaults to 1..n).
        #[arg(long)]
        a: Option<String>,
        /// Expansion order cap for the resolvent family.
        #[arg(long = "max-l")]
        max_l: Option<usize>,
        /// Emit resolvent orders beyond l = k-1 (redundant).
        #[arg(long)]
        extended: bool,
    },
    /// Symbolic involutivity of a family under both pencil brackets.
    Involution {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        input: PencilInput,
    },
    /// Verify the recursion relations between the two matrix families.
    Lenard {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: Option<String>,
    },
    /// Jacobian rank of a family against the lagrangian target.
    Completeness {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        input: PencilInput,
    },
    /// Compare the differential spans of two families at sampled points.
    Equivalence {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Check the index formula on a semidirect product.
    Rais {
        #[command(flatten)]
        algebra: AlgebraInput,
        /// Action JSON file: {"dim_v": m, "matrices": [...]}.
        #[arg(long)]
        action: PathBuf,
    },
    /// List or emit catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum CatalogAction {
    /// List available entries.
    List,
    /// Build an entry and write its files.
    Emit {
        /// Entry name (see `catalog list`).
        name: String,
        #[arg(long)]
        n: Option<usize>,
        /// Diagonal of A, e.g. --a 1,2.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        lambda1: Option<String>,
        #[arg(long)]
        lambda2: Option<String>,
        /// Form matrix I for outer pencils (operator JSON file).
        #[arg(long = "i-file")]
        i_file: Option<PathBuf>,
        /// Involution matrix J (operator JSON file).
        #[arg(long = "j-file")]
        j_file: Option<PathBuf>,
        /// Write the operator here.
        #[arg(short = 'N', long = "operator-out")]
        operator_out: Option<PathBuf>,
        /// Write the pencil here.
        #[arg(long = "pencil-out")]
        pencil_out: Option<PathBuf>,
    },
}

/// A completed run: verdict polarity plus the two report renderings.
struct Outcome {
    positive: bool,
    report: Value,
    text: String,
    /// When set, the command already wrote its own files (catalog emit);
    /// the report goes to stdout even if -o was given.
    files_written: bool,
}

impl Outcome {
    fn new(positive: bool, report: Value, text: String) -> Self {
        Outcome {
            positive,
            report,
            text,
            files_written: false,
        }
    }
}

/// Input-level failure: exit code 2.
struct InputError(String);

impl From<json::FileError> for InputError {
    fn from(e: json::FileError) -> Self {
        InputError(e.to_string())
    }
}

impl From<CoreError> for InputError {
    fn from(e: CoreError) -> Self {
        InputError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let cfg = PointSamplerConfig::new(cli.seed, cli.samples.max(1), cli.coord_bound.max(1));
    match run(&cli, &cfg) {
        Ok(outcome) => {
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&outcome.report).expect("serializable") + "\n"
                }
                Format::Text => outcome.text.clone(),
            };
            match (&cli.output, outcome.files_written) {
                (Some(path), false) => {
                    if let Err(e) = std::fs::write(path, &body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                _ => print!("{body}"),
            }
            if outcome.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// PFORGE_THREADS caps internal parallelism; 0 or unset means automatic.
fn configure_threads() {
    if let Ok(v) = std::env::var("PFORGE_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<StructureConstants, InputError> {
    json::parse_algebra(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_operator(path: &Path) -> Result<Mat, InputError> {
    json::parse_operator(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_family(path: &Path) -> Result<IntegralFamily, InputError> {
    json::parse_family(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_pencil(input: &PencilInput) -> Result<BracketPencil, InputError> {
    match (&input.pencil, &input.algebra, &input.operator) {
        (Some(p), _, _) => {
            json::parse_pencil(&read(p)?).map_err(|e| InputError(format!("{}: {e}", p.display())))
        }
        (None, Some(a), Some(op)) => {
            let c = load_algebra(a)?;
            let n_op = load_operator(op)?;
            Ok(pencil_of(&c, &n_op)?)
        }
        _ => Err(InputError(
            "a pencil requires either --pencil, or -i together with -N".into(),
        )),
    }
}

fn parse_diag(n: usize, a: &Option<String>) -> Result<Vec<Rat>, InputError> {
    match a {
        None => Ok((1..=n as i64).map(Rat::from_int).collect()),
        Some(list) => {
            let entries: Result<Vec<Rat>, _> =
                list.split(',').map(|s| Rat::from_str(s.trim())).collect();
            let entries = entries.map_err(|e| InputError(e.to_string()))?;
            if entries.len() != n {
                return Err(InputError(format!(
                    "--a lists {} entries, expected {n}",
                    entries.len()
                )));
            }
            Ok(entries)
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializable")
}

/// Canonical token of a verdict enum (its serialized form).
fn verdict_str<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn run(cli: &Cli, cfg: &PointSamplerConfig) -> Result<Outcome, InputError> {
    match &cli.command {
        Command::Validate { algebra, operator } => {
            let c = load_algebra(&algebra.algebra)?;
            let jacobi = check_jacobi(&c);
            // antisymmetry failures mean the file does not encode a bracket
            if jacobi
                .violations
                .iter()
                .any(|v| matches!(v, Violation::Antisymmetry { .. }))
            {
                return Err(InputError(format!(
                    "structure constants are not antisymmetric: {}",
                    serde_json::to_string(&jacobi.violations).unwrap_or_default()
                )));
            }
            let torsion_part = match operator {
                None => None,
                Some(path) => {
                    let n_op = load_operator(path)?;
                    let t = torsion(&c, &n_op)?;
                    Some((t.is_zero(), t.first_nonzero()))
                }
            };
            let positive = jacobi.passed() && torsion_part.is_none_or(|(z, _)| z);
            let verdict = if positive { "VALID" } else { "INVALID" };
            let report = json!({
                "verdict": verdict,
                "jacobi": to_value(&jacobi),
                "torsion_zero": torsion_part.map(|(z, _)| z),
                "torsion_witness": torsion_part.and_then(|(_, w)| w),
            });
            let text = format!(
                "validate: {verdict}\n  jacobi: {}\n  torsion: {}\n",
                verdict_str(&jacobi.verdict),
                match torsion_part {
                    None => "not checked".to_string(),
                    Some((true, _)) => "zero".to_string(),
                    Some((false, w)) => format!("nonzero at {w:?}"),
                }
            );
            Ok(Outcome::new(positive, report, text))
        }

        Command::Pencil { input } => {
            let p = load_pencil(input)?;
            // -o takes the bare pencil JSON so it can feed --pencil inputs
            let mut files_written = false;
            if let Some(path) = &cli.output {
                let body = serde_json::to_string_pretty(&json::pencil_to_file(&p)).unwrap() + "\n";
                std::fs::write(path, body)
                    .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
                files_written = true;
            }
            let report = json!({
                "verdict": "COMPATIBLE",
                "dim": p.dim(),
                "exceptional": to_value(&p.exceptional().to_vec()),
                "origin": to_value(&p.origin()),
                "degenerate": p.is_degenerate(),
                "pencil": to_value(&json::pencil_to_file(&p)),
            });
            let text = format!(
                "pencil: COMPATIBLE\n  dim: {}\n  exceptional: [{}]\n  degenerate: {}\n",
                p.dim(),
                p.exceptional()
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                p.is_degenerate()
            );
            let mut outcome = Outcome::new(true, report, text);
            outcome.files_written = files_written;
            Ok(outcome)
        }

        Command::RankProfile { input } | Command::Kronecker { input } => {
            let p = load_pencil(input)?;
            let profile = kronecker_certify(&p, cfg)?;
            let positive = profile.certified();
            let mut text = format!(
                "kronecker: {}\n  generic rank: {} (lambda = {}, witness found)\n",
                verdict_str(&profile.verdict),
                profile.generic_rank,
                profile.generic_witness.lambda
            );
            for m in &profile.per_exceptional {
                text += &format!(
                    "  member lambda = {}: best rank {}{}\n",
                    m.lambda.as_ref().expect("exceptional member"),
                    m.best_rank,
                    if m.attained_generic_rank {
                        " (attained)"
                    } else {
                        ""
                    }
                );
            }
            text += &format!(
                "  undeformed member: best rank {}{}\n",
                profile.infinity_member.best_rank,
                if profile.infinity_member.attained_generic_rank {
                    " (attained)"
                } else {
                    ""
                }
            );
            Ok(Outcome::new(positive, to_value(&profile), text))
        }

        Command::Corollary { algebra, operator } => {
            let c = load_algebra(&algebra.algebra)?;
            let n_op = load_operator(&operator.operator)?;
            let rep = corollary_condition(&c, &n_op, cfg)?;
            let positive = rep.positive();
            let text = coisotropy_text(&rep);
            Ok(Outcome::new(positive, to_value(&rep), text))
        }

        Command::Criterion { algebra, operator } => {
            let c = load_algebra(&algebra.algebra)?;
            let n_op = load_operator(&operator.operator)?;
            let rep = theorem_criterion(&c, &n_op, cfg, cli.budget)?;
            let positive = rep.positive();
            let text = coisotropy_text(&rep);
            Ok(Outcome::new(positive, to_value(&rep), text))
        }

        Command::Integrals {
            family,
            n,
            a,
            max_l,
            extended,
        } => {
            let n = *n;
            let fam = match family.as_str() {
                "manakov" => manakov_family(n, &parse_diag(n, a)?)?,
                "resolvent" => resolvent_family_extended(
                    n,
                    &parse_diag(n, a)?,
                    max_l.unwrap_or(n.saturating_sub(1)),
                    *extended,
                )?,
                "borel" => borel_family(n)?,
                other => {
                    return Err(InputError(format!(
                        "unknown family `{other}` (expected manakov, resolvent or borel)"
                    )))
                }
            };
            let file = json::family_to_file(&fam);
            let text = format!(
                "integrals: {} members, {} variables\n{}",
                fam.members().len(),
                fam.nvars(),
                fam.members()
                    .iter()
                    .map(|m| format!(
                        "  {} (k={}, l={}): {} terms\n",
                        m.name,
                        m.k,
                        m.l,
                        m.poly.num_terms()
                    ))
                    .collect::<String>()
            );
            Ok(Outcome::new(true, to_value(&file), text))
        }

        Command::Involution { family, input } => {
            let fam = load_family(family)?;
            let p = load_pencil(input)?;
            let rep = involutivity_check(&fam, &p)?;
            let positive = rep.verdict == CheckVerdict::Pass;
            let text = format!(
                "involution: {}\n  pairs checked: {}\n  violations: {}\n",
                verdict_str(&rep.verdict),
                rep.pairs_checked,
                rep.violations.len()
            );
            Ok(Outcome::new(positive, to_value(&rep), text))
        }

        Command::Lenard { n, a } => {
            let n = *n;
            let diag = parse_diag(n, a)?;
            let (c, n_op) = catalog::left_mult(n, &diag)?;
            let p = pencil_of(&c, &n_op)?;
            let rep = lenard_check(n, &diag, &p)?;
            let positive = rep.verdict == CheckVerdict::Pass;
            let text = format!(
                "lenard: {}\n{}  repeated eigenvalues: {}\n",
                verdict_str(&rep.verdict),
                rep.relations
                    .iter()
                    .map(|r| format!(
                        "  {}-relation (k={}, l={}): {}\n",
                        r.family,
                        r.k,
                        r.l,
                        if r.holds { "holds" } else { "FAILS" }
                    ))
                    .collect::<String>(),
                rep.repeated_eigenvalues
            );
            Ok(Outcome::new(positive, to_value(&rep), text))
        }

        Command::Completeness { family, input } => {
            let fam = load_family(family)?;
            let p = load_pencil(input)?;
            let rep = completeness_rank(&fam, &p, cfg)?;
            let positive = rep.verdict == pforge_core::integrals::CompletenessVerdict::Complete;
            let text = format!(
                "completeness: {}\n  max rank: {}\n  target: {}\n",
                verdict_str(&rep.verdict),
                rep.max_rank,
                rep.target
            );
            Ok(Outcome::new(positive, to_value(&rep), text))
        }

        Command::Equivalence { family, other } => {
            let f1 = load_family(family)?;
            let f2 = load_family(other)?;
            let rep = family_span_equivalence(&f1, &f2, cfg)?;
            let positive = rep.verdict == pforge_core::integrals::SpanVerdict::Equivalent;
            let text = format!(
                "equivalence: {}\n  generic ranks: {} / {} / joint {}\n  points sampled: {}\n",
                verdict_str(&rep.verdict),
                rep.rank_first_max,
                rep.rank_second_max,
                rep.rank_joint_max,
                rep.points.len()
            );
            Ok(Outcome::new(positive, to_value(&rep), text))
        }

        Command::Rais { algebra, action } => {
            let c = load_algebra(&algebra.algebra)?;
            let (matrices, dim_v) = json::parse_action(&read(action)?)
                .map_err(|e| InputError(format!("{}: {e}", action.display())))?;
            let rep = rais_check(&c, &matrices, dim_v, cfg)?;
            let positive = rep.verdict == CheckVerdict::Pass;
            let text = format!(
                "rais: {}\n  ind(semidirect) = {}\n  codim orbit + ind stabilizer = {} + {} = {}\n",
                verdict_str(&rep.verdict),
                rep.semidirect_index,
                rep.orbit_codim,
                rep.stabilizer_index,
                rep.rhs_total
            );
            Ok(Outcome::new(positive, to_value(&rep), text))
        }

        Command::Catalog { action } => run_catalog(cli, action),
    }
}

fn coisotropy_text(rep: &pforge_core::CoisotropyReport) -> String {
    let mut text = format!(
        "{}: {}\n  ind g (certified upper bound): {}\n",
        rep.mode,
        verdict_str(&rep.verdict),
        rep.algebra_index
    );
    for row in &rep.rows {
        text += &format!(
            "  eigenvalue {}: dim {} / ind {} / codim {} -> corollary {}",
            row.lambda,
            row.subalgebra_dim,
            row.ind,
            row.codim,
            if row.corollary_holds {
                "holds"
            } else {
                "fails"
            }
        );
        if let Some(w) = &row.witness {
            text += &format!(
                "; witness covector [{}] with ind {} + codim {}",
                w.covector
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                w.ind,
                w.codim
            );
        }
        text.push('\n');
    }
    text
}

fn run_catalog(cli: &Cli, action: &CatalogAction) -> Result<Outcome, InputError> {
    match action {
        CatalogAction::List => {
            let entries = catalog::list();
            let report = json!({
                "verdict": "OK",
                "entries": entries
                    .iter()
                    .map(|(name, desc)| json!({"name": name, "description": desc}))
                    .collect::<Vec<_>>(),
            });
            let text = entries
                .iter()
                .map(|(name, desc)| format!("{name}: {desc}\n"))
                .collect::<String>();
            Ok(Outcome::new(true, report, text))
        }
        CatalogAction::Emit {
            name,
            n,
            a,
            lambda1,
            lambda2,
            i_file,
            j_file,
            operator_out,
            pencil_out,
        } => {
            let parse_rat = |s: &Option<String>| -> Result<Option<Rat>, InputError> {
                match s {
                    None => Ok(None),
                    Some(v) => Ok(Some(
                        Rat::from_str(v).map_err(|e| InputError(e.to_string()))?,
                    )),
                }
            };
            let a_diag = match (a, n) {
                (Some(list), Some(n)) => Some(parse_diag(*n, &Some(list.clone()))?),
                (Some(list), None) => {
                    let entries: Result<Vec<Rat>, _> =
                        list.split(',').map(|s| Rat::from_str(s.trim())).collect();
                    Some(entries.map_err(|e| InputError(e.to_string()))?)
                }
                (None, _) => None,
            };
            let params = CatalogParams {
                n: *n,
                a_diag,
                lambda1: parse_rat(lambda1)?,
                lambda2: parse_rat(lambda2)?,
                form: i_file.as_deref().map(load_operator).transpose()?,
                involution: j_file.as_deref().map(load_operator).transpose()?,
            };
            let entry = catalog::build(name, &params)?;

            // -o takes the bare algebra JSON so it can feed other commands;
            // the confirmation report goes to stdout.
            let algebra_file = json::algebra_to_file(&entry.algebra);
            let mut files_written = false;
            if let Some(path) = &cli.output {
                let body = serde_json::to_string_pretty(&algebra_file).unwrap() + "\n";
                std::fs::write(path, body)
                    .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
                files_written = true;
            }
            if let Some(path) = operator_out {
                match &entry.operator {
                    Some(op) => {
                        let body = serde_json::to_string_pretty(&json::operator_to_file(op))
                            .unwrap()
                            + "\n";
                        std::fs::write(path, body).map_err(|e| {
                            InputError(format!("cannot write {}: {e}", path.display()))
                        })?;
                        files_written = true;
                    }
                    None => {
                        return Err(InputError(format!("entry `{name}` has no operator")));
                    }
                }
            }
            if let Some(path) = pencil_out {
                match &entry.pencil {
                    Some(p) => {
                        let body =
                            serde_json::to_string_pretty(&json::pencil_to_file(p)).unwrap() + "\n";
                        std::fs::write(path, body).map_err(|e| {
                            InputError(format!("cannot write {}: {e}", path.display()))
                        })?;
                        files_written = true;
                    }
                    None => {
                        return Err(InputError(format!("entry `{name}` has no pencil")));
                    }
                }
            }

            let report = json!({
                "verdict": "OK",
                "name": entry.name,
                "params": entry.params,
                "dim": entry.algebra.dim(),
                "has_operator": entry.operator.is_some(),
                "has_pencil": entry.pencil.is_some(),
                "algebra": to_value(&algebra_file),
            });
            let text = format!(
                "catalog emit: {} ({})\n  dim: {}\n  operator: {}\n  pencil: {}\n",
                entry.name,
                entry.params,
                entry.algebra.dim(),
                entry.operator.is_some(),
                entry.pencil.is_some()
            );
            let mut outcome = Outcome::new(true, report, text);
            outcome.files_written = files_written;
            Ok(outcome)
        }
    }
}
