//! `slocc`: Kronecker invariants, SLOCC equivalence and class catalogues
//! of `2 x m x n` states from the command line.

mod dot;
mod input;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use slocc_core::catalogue::{
    classify, convertibility_with, enumerate_classes, hierarchy_with, tensor_rank_of_invariants,
    ClassDescriptor, ConvertOptions, ConvertVerdict, Hierarchy,
};
use slocc_core::exec::ExecMode;
use slocc_core::kronecker::reduce_to_canonical;
use slocc_core::slocc::{
    apply_local_maps, apply_slocc, local_ranks, pencil_to_state, regularizing_lft,
    slocc_equivalent, EquivVerdict,
};
use slocc_core::{kronecker_invariants, Error};

const EXIT_NOT_EQUIVALENT: u8 = 1;
const EXIT_INFINITE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(
    name = "slocc",
    version,
    about = "Exact SLOCC classification of 2 x m x n states"
)]
struct Cli {
    /// Re-check every witness before printing it.
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Dims {
    /// System dimensions, the first of which must be 2.
    #[arg(long, num_args = 3, value_names = ["2", "M", "N"], required = true)]
    dims: Vec<usize>,
}

impl Dims {
    fn get(&self) -> Result<(usize, usize), Failure> {
        match self.dims[..] {
            [2, m, n] if m > 0 && n > 0 => Ok((m, n)),
            _ => Err(Failure::usage(format!(
                "--dims expects 2 M N with M, N >= 1, got {:?}",
                self.dims
            ))),
        }
    }
}

#[derive(Args)]
struct Search {
    /// Maximum number of candidates examined per conversion.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// Seed for the random phase after the coefficient grid.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Do not use tensor-rank increase as an obstruction.
    #[arg(long)]
    no_tensor_rank_obstruction: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Kronecker invariants, local ranks and tensor rank.
    Invariants { file: PathBuf },
    /// Kronecker canonical form with its transformation matrices.
    Canonical { file: PathBuf },
    /// Decide SLOCC equivalence of two states.
    Equiv { a: PathBuf, b: PathBuf },
    /// Normalized class descriptor.
    Classify { file: PathBuf },
    /// All finite classes of a system.
    Enumerate {
        #[command(flatten)]
        dims: Dims,
        /// Keep only classes with full local ranks.
        #[arg(long)]
        full_rank_only: bool,
    },
    /// Search for a non-invertible conversion between two classes.
    Convert {
        src: PathBuf,
        dst: PathBuf,
        #[command(flatten)]
        search: Search,
    },
    /// Pairwise conversion graph of a catalogue.
    Hierarchy {
        #[command(flatten)]
        dims: Dims,
        /// Write the graph in DOT syntax to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Drop edges implied by two-step paths.
        #[arg(long)]
        reduce: bool,
        #[command(flatten)]
        search: Search,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure {
            code: EXIT_USAGE,
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::DimensionMismatch(_) | Error::ZeroState => EXIT_DATA,
            Error::InfiniteFamilies(_) => EXIT_INFINITE,
            _ => EXIT_SOFTWARE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// A document for stdout and the exit code it carries.
struct Outcome {
    doc: Value,
    code: u8,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: 0 }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn check(verify: bool, ok: impl FnOnce() -> Result<bool, Error>) -> Result<Option<bool>, Failure> {
    if !verify {
        return Ok(None);
    }
    if ok()? {
        Ok(Some(true))
    } else {
        Err(Failure {
            code: EXIT_SOFTWARE,
            message: "witness failed verification".into(),
        })
    }
}

fn invariants(file: &Path) -> Result<Outcome, Failure> {
    let s = input::load_state(file)?;
    let inv = kronecker_invariants(s.pencil())?;
    Ok(Outcome::ok(json!({
        "dims": [2, s.dims().0, s.dims().1],
        "invariants": to_json(&inv),
        "localRanks": to_json(&local_ranks(&s)),
        "tensorRank": tensor_rank_of_invariants(&inv),
    })))
}

fn canonical(file: &Path, verify: bool) -> Result<Outcome, Failure> {
    let s = input::load_state(file)?;
    let p = s.pencil();
    let d = reduce_to_canonical(p)?;
    let verified = check(verify, || Ok(p.transform(&d.b, &d.c) == d.k))?;
    let regularized = if d.inv.infinite_divisors.is_empty() {
        Value::Null
    } else {
        let lft = regularizing_lft(&d.inv);
        let q = lft.apply_pencil(p);
        let dq = reduce_to_canonical(&q)?;
        check(verify, || Ok(q.transform(&dq.b, &dq.c) == dq.k))?;
        json!({ "lft": to_json(&lft), "B": to_json(&dq.b), "C": to_json(&dq.c), "K": to_json(&dq.k) })
    };
    Ok(Outcome::ok(json!({
        "B": to_json(&d.b),
        "C": to_json(&d.c),
        "K": to_json(&d.k),
        "invariants": to_json(&d.inv),
        "regularized": regularized,
        "verified": verified,
    })))
}

fn equiv(a: &Path, b: &Path, verify: bool) -> Result<Outcome, Failure> {
    let s1 = input::load_state(a)?;
    let s2 = input::load_state(b)?;
    Ok(match slocc_equivalent(&s1, &s2)? {
        EquivVerdict::Equivalent(w) => {
            let verified = check(verify, || Ok(apply_slocc(&s1, &w)?.ratio_to(&s2).is_some()))?;
            Outcome::ok(
                json!({ "verdict": "Equivalent", "witness": to_json(&w), "verified": verified }),
            )
        }
        EquivVerdict::NotEquivalent(why) => Outcome {
            doc: json!({ "verdict": "NotEquivalent", "differs": why.to_string() }),
            code: EXIT_NOT_EQUIVALENT,
        },
    })
}

fn verify_descriptor(d: &ClassDescriptor) -> Result<bool, Error> {
    Ok(classify(&d.representative())? == *d)
}

fn classify_cmd(file: &Path, verify: bool) -> Result<Outcome, Failure> {
    let s = input::load_state(file)?;
    let d = classify(&s)?;
    let verified = check(verify, || verify_descriptor(&d))?;
    let mut doc = to_json(&d);
    doc["verified"] = to_json(&verified);
    Ok(Outcome::ok(doc))
}

fn enumerate(dims: &Dims, full_rank_only: bool) -> Result<Outcome, Failure> {
    let (m, n) = dims.get()?;
    let mut cat = match enumerate_classes(m, n) {
        Ok(c) => c,
        Err(Error::InfiniteFamilies(why)) => {
            return Ok(Outcome {
                doc: json!({ "dims": [2, m, n], "infiniteFamilies": why }),
                code: EXIT_INFINITE,
            })
        }
        Err(e) => return Err(e.into()),
    };
    if full_rank_only {
        cat.classes
            .retain(|d| d.local_ranks.1 == m && d.local_ranks.2 == n);
    }
    Ok(Outcome::ok(json!({
        "dims": [2, m, n],
        "count": cat.count(),
        "classes": to_json(&cat.classes),
    })))
}

fn options(search: &Search, prefer_exact: bool) -> ConvertOptions {
    ConvertOptions {
        budget: search.budget,
        seed: search.seed,
        tensor_rank_obstruction: !search.no_tensor_rank_obstruction,
        prefer_exact,
    }
}

fn verify_conversion(
    src: &ClassDescriptor,
    dst: &ClassDescriptor,
    maps: &slocc_core::catalogue::LocalMaps,
) -> Result<bool, Error> {
    let image = apply_local_maps(&src.representative_pencil(), &maps.a, &maps.b, &maps.c)?;
    Ok(classify(&pencil_to_state(&image)?)? == *dst)
}

fn convert(src: &Path, dst: &Path, search: &Search, verify: bool) -> Result<Outcome, Failure> {
    let src = classify(&input::load_state(src)?)?;
    let dst = classify(&input::load_state(dst)?)?;
    let verdict = convertibility_with(&src, &dst, &options(search, true));
    let (name, code, detail, verified) = match &verdict {
        ConvertVerdict::Convertible(w) => {
            let verified = check(verify, || verify_conversion(&src, &dst, &w.maps))?;
            ("Convertible", 0, to_json(w), verified)
        }
        ConvertVerdict::Obstructed(why) => (
            "Obstructed",
            EXIT_NOT_EQUIVALENT,
            json!(why.to_string()),
            None,
        ),
        ConvertVerdict::Undecided { samples } => (
            "Undecided",
            EXIT_UNDECIDED,
            json!({ "samples": samples }),
            None,
        ),
    };
    Ok(Outcome {
        doc: json!({
            "src": to_json(&src),
            "dst": to_json(&dst),
            "verdict": name,
            "detail": detail,
            "verified": verified,
        }),
        code,
    })
}

fn hierarchy(
    dims: &Dims,
    dot: Option<&PathBuf>,
    reduce: bool,
    search: &Search,
    verify: bool,
) -> Result<Outcome, Failure> {
    let (m, n) = dims.get()?;
    let mut h: Hierarchy = hierarchy_with(m, n, &options(search, false), ExecMode::default())?;
    let verified = check(verify, || {
        for e in &h.edges {
            if !verify_conversion(&h.nodes[e.src], &h.nodes[e.dst], &e.witness.maps)? {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    if reduce {
        h = h.transitive_reduction();
    }
    if let Some(path) = dot {
        fs::write(path, dot::to_dot(&h, &format!("2x{m}x{n}"))).map_err(|e| Failure {
            code: EXIT_DATA,
            message: format!("{}: {e}", path.display()),
        })?;
    }
    let label = |i: usize| h.nodes[i].label.clone();
    let edges: Vec<Value> = h
        .edges
        .iter()
        .map(
            |e| json!({ "src": label(e.src), "dst": label(e.dst), "witness": to_json(&e.witness) }),
        )
        .collect();
    let undecided: Vec<Value> = h
        .undecided
        .iter()
        .map(|&(s, d)| json!([label(s), label(d)]))
        .collect();
    Ok(Outcome::ok(json!({
        "dims": [2, m, n],
        "nodes": to_json(&h.nodes),
        "edges": edges,
        "undecided": undecided,
        "verified": verified,
    })))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let v = cli.verify;
    match &cli.command {
        Command::Invariants { file } => invariants(file),
        Command::Canonical { file } => canonical(file, v),
        Command::Equiv { a, b } => equiv(a, b, v),
        Command::Classify { file } => classify_cmd(file, v),
        Command::Enumerate {
            dims,
            full_rank_only,
        } => enumerate(dims, *full_rank_only),
        Command::Convert { src, dst, search } => convert(src, dst, search, v),
        Command::Hierarchy {
            dims,
            dot,
            reduce,
            search,
        } => hierarchy(dims, dot.as_ref(), *reduce, search, v),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.doc).expect("valid json");
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("slocc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
