//! `relcon`: check constrained circuits, run relation operations and oracle suites.
//!
//! Exit codes: 0 success, 1 constraint violation (or a failing suite),
//! 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use relcon::circuit::{self, CircuitReport};
use relcon::io::Json;
use relcon::oracle::{self, OracleConfig, DEFAULT_CAP, DEFAULT_SEED};
use relcon::{Error, FiniteRelation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "relcon",
    version,
    about = "Finite relations as constraints on morphisms"
)]
struct Cli {
    /// Output format. `rel` defaults to JSON, everything else to text.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every pair in a circuit file and report the composite.
    Check { file: PathBuf },
    /// Operations on relation files.
    Rel {
        #[command(subcommand)]
        op: RelOp,
    },
    /// Run an exhaustive or randomized oracle suite.
    Oracle {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(oracle::SUITES))]
        suite: String,
        /// Largest number of cases the suite may plan.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Suite-specific scope (blocks, set size or monoid order).
        #[arg(long)]
        size: Option<usize>,
    },
}

#[derive(Subcommand)]
enum RelOp {
    /// Compose in diagrammatic order: the first file is applied first.
    Compose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Meet of relations on one boundary.
    Meet {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    Converse {
        file: PathBuf,
    },
    /// The meet-generators on a relation's boundary.
    Generators {
        file: PathBuf,
    },
}

/// Why the command stopped: a violation found in valid input, or bad input.
enum Failure {
    Violation(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_violation() {
            Failure::Violation(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_relation(path: &Path) -> Result<FiniteRelation, Failure> {
    FiniteRelation::from_json(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_all(files: &[PathBuf]) -> Result<Vec<FiniteRelation>, Failure> {
    files.iter().map(|f| load_relation(f)).collect()
}

fn raw(json: &str) -> Value {
    serde_json::from_str(json).unwrap_or_else(|_| Value::String(json.to_string()))
}

fn relation_out(r: &FiniteRelation, format: Format) -> String {
    match format {
        Format::Json => r.to_json(),
        Format::Text => r.to_string(),
    }
}

fn check_out(rep: &CircuitReport, format: Format) -> String {
    match format {
        Format::Json => json!({
            "status": "ok",
            "encoding": rep.encoding,
            "dom": rep.dom,
            "cod": rep.cod,
            "leaves": rep.leaves,
            "constraint": raw(&rep.constraint),
            "morphism": raw(&rep.morphism),
        })
        .to_string(),
        Format::Text => format!(
            "ok: {} pair(s) verified ({} encoding)\nboundary: {} -> {}\nconstraint: {}\nmorphism: {}",
            rep.leaves, rep.encoding, rep.dom, rep.cod, rep.constraint, rep.morphism
        ),
    }
}

fn rel(op: &RelOp, format: Format) -> Result<String, Failure> {
    let result = match op {
        RelOp::Compose { files } => {
            let rs = load_all(files)?;
            let mut acc = rs[0].clone();
            for (r, path) in rs.iter().zip(files).skip(1) {
                acc = r
                    .compose(&acc)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            acc
        }
        RelOp::Meet { files } => {
            let rs = load_all(files)?;
            let mut acc = rs[0].clone();
            for (r, path) in rs.iter().zip(files).skip(1) {
                acc = acc
                    .meet(r)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            acc
        }
        RelOp::Converse { file } => load_relation(file)?.converse(),
        RelOp::Generators { file } => {
            let r = load_relation(file)?;
            let gens = FiniteRelation::meet_generators(r.src(), r.dst());
            return Ok(match format {
                Format::Json => {
                    let items: Vec<String> = gens.iter().map(Json::to_json).collect();
                    format!("[{}]", items.join(", "))
                }
                Format::Text => gens
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join("\n"),
            });
        }
    };
    Ok(relation_out(&result, format))
}

impl Cli {
    fn format(&self) -> Format {
        match (self.format, &self.command) {
            (Some(f), _) => f,
            (None, Command::Rel { .. }) => Format::Json,
            (None, _) => Format::Text,
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let format = cli.format();
    match &cli.command {
        Command::Check { file } => {
            let text = read(file)?;
            let rep = circuit::check_circuit_json(&text)?;
            Ok(check_out(&rep, format))
        }
        Command::Rel { op } => rel(op, format),
        Command::Oracle {
            suite,
            cap,
            seed,
            size,
        } => {
            let cfg = OracleConfig {
                cap: *cap,
                seed: *seed,
                size: *size,
            };
            let rep = oracle::run_suite(suite, &cfg)?;
            let out = match format {
                Format::Json => rep.to_json(),
                Format::Text => rep.to_text().trim_end().to_string(),
            };
            if rep.passed {
                Ok(out)
            } else {
                // The report is the useful output even on failure.
                println!("{out}");
                Err(Failure::Violation(format!(
                    "suite `{suite}` failed: {}",
                    rep.first_failure.unwrap_or_default()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Violation(msg)) => {
            match cli.format() {
                Format::Json => println!("{}", json!({"status": "violation", "error": msg})),
                Format::Text => eprintln!("violation: {msg}"),
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
