//! `wittkit`: JSON-in, JSON-out command line for exact truncated Witt
//! vector computations.
//!
//! Exit codes: 0 success, 2 malformed input, 3 unsupported operation,
//! 4 resource guard exceeded. Outputs are deterministic: identical
//! inputs produce byte-identical documents.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use wittkit_core::charpoly;
use wittkit_core::oracle::{self, OracleCheck};
use wittkit_core::ring::{elem_from_json, elem_to_json, ring_from_json};
use wittkit_core::{Error, Ring, TruncationSet, WittRep};

#[derive(Parser)]
#[command(name = "wittkit", version, about = "Exact truncated big Witt vectors over JSON files")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct OutArg {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Characteristic element of a square matrix: writes coords, series
    /// and ghost components.
    Chi {
        /// Ring descriptor (path or inline JSON).
        #[arg(long)]
        ring: String,
        /// Square matrix over the ring as a row-major nested array.
        #[arg(long = "in")]
        input: String,
        /// Truncation set, e.g. 1,2,3,4.
        #[arg(long = "S", value_delimiter = ',')]
        tset: Vec<usize>,
        /// Series precision.
        #[arg(long = "N")]
        prec: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Witt group operator applied to representative documents.
    /// Names: add, neg, V, F, star, restrict, ghost, equals.
    Op {
        name: String,
        /// Operator index for V and F.
        index: Option<usize>,
        /// First (or only) Witt representative (path or inline JSON).
        #[arg(long = "in")]
        input: String,
        /// Second representative for add, star and equals.
        #[arg(long = "in2")]
        input2: Option<String>,
        /// Target truncation set for V and restrict.
        #[arg(long = "S", value_delimiter = ',')]
        tset: Option<Vec<usize>>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Brute-force checks of a finite ring against the enumerated Witt
    /// group.
    Oracle {
        /// Ring descriptor (path or inline JSON); must be finite.
        #[arg(long)]
        ring: String,
        /// Series precision.
        #[arg(long = "N")]
        prec: usize,
        /// all | equality | pivot | representative | exactness.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeGuard(_) => 4,
        Error::Unsupported(_) | Error::UnsupportedTensor(_, _) => 3,
        Error::Config(_) | Error::Mismatch(_) | Error::Parse(_) => 2,
    }
}

/// Loads a JSON document from a path, or parses it inline when the
/// argument itself looks like JSON.
fn load_json(arg: &str) -> Result<Value, Error> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn emit(doc: &Value, out: &OutArg) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    text.push('\n');
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_matrix(ring: &Ring, v: &Value) -> Result<(usize, Vec<wittkit_core::Elem>), Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be a nested array".into()))?;
    let k = rows.len();
    if k == 0 {
        return Err(Error::Parse("matrix must have at least one row".into()));
    }
    let mut entries = Vec::with_capacity(k * k);
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
        if cells.len() != k {
            return Err(Error::Parse("matrix must be square".into()));
        }
        for c in cells {
            entries.push(elem_from_json(ring, c)?);
        }
    }
    Ok((k, entries))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Chi { ring, input, tset, prec, out } => {
            let ring = ring_from_json(&load_json(&ring)?)?;
            let (k, f) = parse_matrix(&ring, &load_json(&input)?)?;
            let tset = TruncationSet::new(tset)?;
            let w = charpoly::chi(&ring, k, &f, &tset, prec)?;
            let series = w.to_series();
            let coords: serde_json::Map<String, Value> = w
                .coords()
                .iter()
                .map(|(n, a)| (n.to_string(), elem_to_json(&ring, a)))
                .collect();
            let doc = json!({
                "coords": coords,
                "series": series
                    .series()
                    .coeffs()
                    .iter()
                    .map(|c| elem_to_json(&ring, c))
                    .collect::<Vec<_>>(),
                "ghost": w.ghost().to_json(),
            });
            emit(&doc, &out)
        }
        Cmd::Op { name, index, input, input2, tset, out } => {
            let w = WittRep::from_json(&load_json(&input)?)?;
            let second = |arg: &Option<String>| -> Result<WittRep, Error> {
                let s = arg
                    .as_ref()
                    .ok_or_else(|| Error::Parse("this operator needs --in2".into()))?;
                WittRep::from_json(&load_json(s)?)
            };
            let idx = || -> Result<usize, Error> {
                index.ok_or_else(|| Error::Parse("this operator needs an index".into()))
            };
            let target = |arg: &Option<Vec<usize>>| -> Result<TruncationSet, Error> {
                TruncationSet::new(
                    arg.clone()
                        .ok_or_else(|| Error::Parse("this operator needs --S".into()))?,
                )
            };
            let doc = match name.as_str() {
                "add" => second(&input2).and_then(|v| w.add(&v))?.to_json(),
                "neg" => w.neg().to_json(),
                "V" => w.verschiebung(idx()?, target(&tset)?)?.to_json(),
                "F" => w.frobenius(idx()?)?.to_json(),
                "star" => second(&input2).and_then(|v| w.star(&v))?.to_json(),
                "restrict" => w.restrict(target(&tset)?)?.to_json(),
                "ghost" => w.ghost().to_json(),
                "equals" => {
                    let v = second(&input2)?;
                    json!({"verdict": w.equals(&v)?.to_string()})
                }
                other => {
                    return Err(Error::Unsupported(format!("unknown operator `{other}`")))
                }
            };
            emit(&doc, &out)
        }
        Cmd::Oracle { ring, prec, checks, seed, out } => {
            let ring = ring_from_json(&load_json(&ring)?)?;
            let checks = OracleCheck::from_name(&checks)?;
            let report = oracle::run_checks(&ring, prec, &checks, seed)?;
            emit(&report.to_json(), &out)
        }
    }
}
