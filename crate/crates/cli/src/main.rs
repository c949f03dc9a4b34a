//! `pslat`: command-line front end for the surface-like pseudolattice
//! calculus. Reads lattice files (JSON) on stdin or from a path, writes
//! reports on stdout. Exit codes: 0 success, 1 invalid input, 2 not
//! surface-like, 3 search bound exhausted, 4 hypothesis unmet.

mod io;
mod report;

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};
use serde_json::Value;

use pseudolattice::exceptional::{
    apply_word, reduce_ranks, ExceptionalBasis, MutationWord, ReduceError, ReduceStatus,
};
use pseudolattice::lattice::{
    detect_surface_like, DetectError, Detection, Pseudolattice, SurfaceStructure,
};
use pseudolattice::linalg::IntMatrix;
use pseudolattice::mmp::{classify_minimal, minimal_model, vial_criterion, MmpStatus};
use pseudolattice::models::ModelSpec;
use pseudolattice::toric::{
    check_fan_relations, fan_of, fan_svg, polygon_report, toric_system_of, verify_toric_system,
};

use crate::io::{lattice_file_value, parse_lattice_file, LatticeFile};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    NotSurfaceLike(String),
    BoundExhausted(String),
    Hypothesis(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::NotSurfaceLike(_) => 2,
            CliError::BoundExhausted(_) => 3,
            CliError::Hypothesis(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(s)
            | CliError::NotSurfaceLike(s)
            | CliError::BoundExhausted(s)
            | CliError::Hypothesis(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "pslat", version, about = "Exact calculus of surface-like pseudolattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a built-in model as a lattice file
    Model {
        /// P2 | P1xP1 | F1 | BlowupP2 | RuledSurface | K3Mukai
        name: String,
        /// twist parameter for P1xP1 and F1
        #[arg(long)]
        c: Option<i64>,
        /// number of blown-up points for BlowupP2
        #[arg(long)]
        k: Option<usize>,
        /// base-curve genus for RuledSurface
        #[arg(long)]
        genus: Option<u32>,
    },
    /// Detect a surface-like structure and report its invariants
    Analyze {
        /// lattice file; stdin when absent
        input: Option<PathBuf>,
        /// sup-norm box for point and minimality searches
        #[arg(long, default_value_t = 10)]
        bound: u64,
        /// machine-readable single-line JSON
        #[arg(long)]
        machine: bool,
    },
    /// Apply a mutation word to the basis; emits the mutated lattice file
    Mutate {
        /// comma-separated steps, e.g. L2,R1,F3 (1-based)
        #[arg(long)]
        word: String,
        input: Option<PathBuf>,
    },
    /// Mutate the basis into the canonical rank pattern
    Reduce {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long)]
        machine: bool,
    },
    /// Toric system, fan, and polygon of the basis
    Toric {
        input: Option<PathBuf>,
        #[arg(long)]
        machine: bool,
        /// write a decorative SVG of the fan
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Run the contraction minimal model program
    Mmp {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long)]
        machine: bool,
    },
    /// Existence criterion for exceptional bases
    Criterion {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long)]
        machine: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                exit(0);
            }
            eprint!("{e}");
            exit(1);
        }
    };
    match run(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Model { name, c, k, genus } => cmd_model(&name, c, k, genus),
        Command::Analyze { input, bound, machine } => cmd_analyze(&input, bound, machine),
        Command::Mutate { word, input } => cmd_mutate(&word, &input),
        Command::Reduce { input, bound, machine } => cmd_reduce(&input, bound, machine),
        Command::Toric { input, machine, svg, bound } => cmd_toric(&input, machine, &svg, bound),
        Command::Mmp { input, bound, machine } => cmd_mmp(&input, bound, machine),
        Command::Criterion { input, bound, machine } => cmd_criterion(&input, bound, machine),
    }
}

fn emit(value: &Value, machine: bool) {
    if machine {
        println!("{value}");
    } else {
        print!("{}", report::render_human(value));
    }
}

// ---------------------------------------------------------------------------
// Input loading.
// ---------------------------------------------------------------------------

fn read_input(input: &Option<PathBuf>) -> Result<String, CliError> {
    match input {
        Some(path) if path.as_os_str() != "-" => fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display()))),
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Invalid(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn load(input: &Option<PathBuf>) -> Result<(LatticeFile, Pseudolattice), CliError> {
    let text = read_input(input)?;
    let file = parse_lattice_file(&text)?;
    let gram = IntMatrix::from_rows(file.gram.clone());
    let lattice = match &file.name {
        Some(name) => Pseudolattice::named(gram, name.clone()),
        None => Pseudolattice::new(gram),
    }
    .map_err(|e| CliError::NotSurfaceLike(e.to_string()))?;
    Ok((file, lattice))
}

enum ResolvedPoint {
    Fixed(Box<SurfaceStructure>, Option<Detection>, &'static str),
    Ambiguous(Detection),
}

fn resolve_point(
    lattice: &Pseudolattice,
    file: &LatticeFile,
    bound: u64,
) -> Result<ResolvedPoint, CliError> {
    if let Some(point) = &file.point {
        let s = SurfaceStructure::new(lattice.clone(), point.clone())
            .map_err(|e| CliError::NotSurfaceLike(e.to_string()))?;
        return Ok(ResolvedPoint::Fixed(Box::new(s), None, "provided"));
    }
    let detection = detect_surface_like(lattice, bound).map_err(|e| match e {
        DetectError::InconclusiveAtBound(_) => CliError::BoundExhausted(e.to_string()),
        other => CliError::NotSurfaceLike(other.to_string()),
    })?;
    match detection.unique_point() {
        Some(p) => {
            let s = SurfaceStructure::new(lattice.clone(), p.clone())
                .map_err(|e| CliError::NotSurfaceLike(e.to_string()))?;
            Ok(ResolvedPoint::Fixed(Box::new(s), Some(detection), "detected"))
        }
        None => Ok(ResolvedPoint::Ambiguous(detection)),
    }
}

fn require_point(
    lattice: &Pseudolattice,
    file: &LatticeFile,
    bound: u64,
) -> Result<SurfaceStructure, CliError> {
    match resolve_point(lattice, file, bound)? {
        ResolvedPoint::Fixed(s, _, _) => Ok(*s),
        ResolvedPoint::Ambiguous(det) => Err(CliError::Invalid(format!(
            "{} point-like candidates found; set \"point\" in the input to choose one",
            det.candidates.len()
        ))),
    }
}

fn require_basis(
    lattice: &Pseudolattice,
    file: &LatticeFile,
) -> Result<ExceptionalBasis, CliError> {
    let vectors = file
        .basis
        .clone()
        .ok_or_else(|| CliError::Invalid("this command needs a \"basis\" in the input".into()))?;
    ExceptionalBasis::new(lattice, vectors)
        .map_err(|e| CliError::Invalid(format!("input basis: {e}")))
}

fn optional_basis(
    lattice: &Pseudolattice,
    file: &LatticeFile,
) -> Result<Option<ExceptionalBasis>, CliError> {
    match &file.basis {
        Some(vectors) => Ok(Some(
            ExceptionalBasis::new(lattice, vectors.clone())
                .map_err(|e| CliError::Invalid(format!("input basis: {e}")))?,
        )),
        None => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

fn cmd_model(
    name: &str,
    c: Option<i64>,
    k: Option<usize>,
    genus: Option<u32>,
) -> Result<i32, CliError> {
    let normalized: String = name
        .chars()
        .filter(|ch| *ch != '_' && *ch != '-')
        .collect::<String>()
        .to_ascii_lowercase();
    let spec = match normalized.as_str() {
        "p2" => ModelSpec::P2,
        "p1xp1" => ModelSpec::P1xP1 { c: c.unwrap_or(0) },
        "f1" => ModelSpec::F1 { c: c.unwrap_or(0) },
        "blowupp2" => ModelSpec::BlowupP2 {
            k: k.ok_or_else(|| CliError::Invalid("BlowupP2 needs --k".into()))?,
        },
        "ruled" | "ruledsurface" => ModelSpec::RuledSurface {
            genus: genus.ok_or_else(|| CliError::Invalid("RuledSurface needs --genus".into()))?,
        },
        "k3mukai" => ModelSpec::K3Mukai {
            ns_gram: IntMatrix::from_i64(&[&[0, 1], &[1, 0]]),
        },
        other => return Err(CliError::Invalid(format!("unknown model: {other}"))),
    };
    let model = spec.build().map_err(|e| CliError::Invalid(e.to_string()))?;
    let file = LatticeFile {
        name: model.lattice.name().map(str::to_string),
        gram: (0..model.lattice.rank())
            .map(|i| model.lattice.gram().row(i))
            .collect(),
        point: Some(model.point),
        basis: model.basis,
    };
    println!("{}", lattice_file_value(&file));
    Ok(0)
}

fn cmd_analyze(input: &Option<PathBuf>, bound: u64, machine: bool) -> Result<i32, CliError> {
    let (file, lattice) = load(input)?;
    let resolved = resolve_point(&lattice, &file, bound)?;
    let value = match resolved {
        ResolvedPoint::Fixed(s, detection, source) => {
            let basis = optional_basis(&lattice, &file)?;
            let detection_value = detection
                .as_ref()
                .map(|d| report::detection_value(d, source))
                .unwrap_or_else(|| serde_json::json!({ "source": source }));
            report::report(
                "analyze",
                "ok",
                serde_json::json!({
                    "name": lattice.name(),
                    "rank": lattice.rank(),
                    "detection": detection_value,
                    "point": io::json_int_vec(s.point()),
                    "surface": report::surface_value(&s, basis.as_ref(), bound),
                }),
            )
        }
        ResolvedPoint::Ambiguous(det) => report::report(
            "analyze",
            "point-choice-required",
            serde_json::json!({
                "name": lattice.name(),
                "rank": lattice.rank(),
                "detection": report::detection_value(&det, "ambiguous"),
                "point": Value::Null,
                "surface": Value::Null,
            }),
        ),
    };
    emit(&value, machine);
    Ok(0)
}

fn cmd_mutate(word: &str, input: &Option<PathBuf>) -> Result<i32, CliError> {
    let (file, lattice) = load(input)?;
    let word: MutationWord = word.parse().map_err(|e| CliError::Invalid(format!("{e}")))?;
    let basis = require_basis(&lattice, &file)?;
    let mutated = apply_word(&lattice, &basis, &word)
        .map_err(|e| CliError::Invalid(format!("mutation failed: {e}")))?;
    let out = LatticeFile {
        name: file.name,
        gram: file.gram,
        point: file.point,
        basis: Some(mutated.vectors().to_vec()),
    };
    println!("{}", lattice_file_value(&out));
    Ok(0)
}

fn cmd_reduce(input: &Option<PathBuf>, bound: u64, machine: bool) -> Result<i32, CliError> {
    let (file, lattice) = load(input)?;
    let s = require_point(&lattice, &file, bound)?;
    let basis = require_basis(&lattice, &file)?;
    let (final_basis, word, rep) = reduce_ranks(&s, &basis).map_err(|e| match e {
        ReduceError::GeometricityRequired => CliError::Hypothesis(e.to_string()),
        other => CliError::Invalid(other.to_string()),
    })?;
    let value = report::report(
        "reduce",
        "ok",
        serde_json::json!({
            "word": word.to_string(),
            "zero_count": rep.zero_count,
            "nonzero_count": rep.nonzero_count,
            "stage4_ran": rep.stage4_ran,
            "pattern": match rep.status {
                ReduceStatus::AllRanksOne => "all-ranks-one",
                ReduceStatus::StoppedAtZeroOnePattern => "stopped-at-zero-one-pattern",
            },
            "final_ranks": io::json_int_vec(&rep.final_ranks),
            "final_basis": io::json_int_rows(final_basis.vectors()),
        }),
    );
    emit(&value, machine);
    Ok(0)
}

fn cmd_toric(
    input: &Option<PathBuf>,
    machine: bool,
    svg: &Option<PathBuf>,
    bound: u64,
) -> Result<i32, CliError> {
    let (file, lattice) = load(input)?;
    let s = require_point(&lattice, &file, bound)?;
    let basis = require_basis(&lattice, &file)?;
    let ts = toric_system_of(&s, &basis).map_err(|e| CliError::Invalid(e.to_string()))?;
    let axioms = verify_toric_system(s.ns_gram(), s.canonical_class(), &ts);
    let fan = fan_of(&ts).map_err(|e| CliError::Invalid(e.to_string()))?;
    check_fan_relations(&ts, &fan).map_err(|e| CliError::Invalid(e.to_string()))?;
    let polygon = polygon_report(&ts, &fan);
    let svg_path = match svg {
        Some(path) => {
            let markup = fan_svg(&fan, &polygon);
            fs::write(path, markup)
                .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let value = report::report(
        "toric",
        "ok",
        report::toric_value(&s, &ts, &axioms, &fan, &polygon, svg_path.as_deref()),
    );
    emit(&value, machine);
    Ok(0)
}

fn cmd_mmp(input: &Option<PathBuf>, bound: u64, machine: bool) -> Result<i32, CliError> {
    let (file, lattice) = load(input)?;
    let s = require_point(&lattice, &file, bound)?;
    let basis = optional_basis(&lattice, &file)?;
    let run =
        minimal_model(&s, basis.as_ref(), bound).map_err(|e| CliError::Invalid(e.to_string()))?;
    let classification = run
        .final_basis
        .as_ref()
        .map(|b| classify_minimal(&run.final_structure, b))
        .transpose()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let status = match run.status {
        MmpStatus::Minimal => "ok",
        MmpStatus::UnknownAtBound(_) => "bound-exhausted",
    };
    let value = report::report(
        "mmp",
        status,
        report::mmp_value(&run, classification.as_ref(), bound),
    );
    emit(&value, machine);
    match run.status {
        MmpStatus::Minimal => Ok(0),
        MmpStatus::UnknownAtBound(_) => Ok(3),
    }
}

fn cmd_criterion(input: &Option<PathBuf>, bound: u64, machine: bool) -> Result<i32, CliError> {
    let (file, lattice) = load(input)?;
    let s = require_point(&lattice, &file, bound)?;
    let verdict = vial_criterion(&s).map_err(|e| CliError::Hypothesis(e.to_string()))?;
    let value = report::report("criterion", "ok", report::criterion_value(&verdict));
    emit(&value, machine);
    Ok(0)
}
