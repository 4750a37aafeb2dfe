//! `parthom`: classify symmetric rational matrices and evaluate their
//! partition functions.
//!
//! Exit codes: 0 success, 2 input parse error, 3 evaluation refused because
//! the matrix is #P-hard, 4 brute-force enumeration exceeded the size guard.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parthom::classify::{classify, verdict_report, Verdict};
use parthom::core_model::{decimal_string, format_rational, Multigraph, Rational, SymMatrix};
use parthom::evaluate::eval_tractable;
use parthom::oracle::{eval_plain_bruteforce, OracleError};
use parthom::selftest;

const EXIT_PARSE: u8 = 2;
const EXIT_HARD: u8 = 3;
const EXIT_GUARD: u8 = 4;

#[derive(Parser)]
#[command(
    name = "parthom",
    about = "Exact partition functions of symmetric rational matrices",
    version
)]
struct Cli {
    /// Cap on worker threads (component evaluations are sequential today,
    /// so any value >= 1 behaves identically).
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(usize))]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether Z_A is polynomial-time computable or #P-hard.
    Classify {
        /// Matrix file ("m=<order>" then rows of rationals).
        matrix: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Evaluate Z_A(G) exactly; refuses #P-hard matrices.
    Eval {
        /// Matrix file.
        matrix: PathBuf,
        /// Graph file ("n=<count>" then "u v multiplicity" lines).
        graph: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Evaluate Z_A(G) by brute-force enumeration (any matrix, small inputs).
    Oracle {
        /// Matrix file.
        matrix: PathBuf,
        /// Graph file.
        graph: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Run the acceptance corpus; nonzero exit on any failure.
    Selftest {
        #[command(flatten)]
        output: OutputFlags,
    },
}

#[derive(Args)]
struct OutputFlags {
    /// Emit machine-readable JSON instead of human text.
    #[arg(long)]
    json: bool,
    /// Also render values as fixed-point decimals with this many digits
    /// (truncated, so approximate unless the expansion terminates).
    #[arg(long, value_name = "DIGITS")]
    decimal: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(EXIT_PARSE);
    }
    match cli.command {
        Command::Classify { matrix, output } => run_classify(&matrix, &output),
        Command::Eval { matrix, graph, output } => run_eval(&matrix, &graph, &output),
        Command::Oracle { matrix, graph, output } => run_oracle(&matrix, &graph, &output),
        Command::Selftest { output } => run_selftest(&output),
    }
}

fn read_matrix(path: &Path) -> Result<SymMatrix, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })?;
    SymMatrix::from_text(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })
}

fn read_graph(path: &Path) -> Result<Multigraph, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })?;
    Multigraph::from_text(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })
}

fn run_classify(matrix: &Path, output: &OutputFlags) -> ExitCode {
    let a = match read_matrix(matrix) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let verdict = classify(&a);
    let report = verdict_report(&verdict);
    if output.json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        match &verdict {
            Verdict::Tractable(_) => {
                println!("TRACTABLE");
                for comp in &report.components {
                    println!(
                        "  component {:?}: {}",
                        comp.indices,
                        comp.kind
                    );
                    for cond in &comp.conditions {
                        println!("    {cond}");
                    }
                }
            }
            Verdict::Hard(evidence) => {
                println!("HARD ({evidence})");
            }
        }
    }
    ExitCode::SUCCESS
}

fn print_value(value: &Rational, output: &OutputFlags) {
    if output.json {
        let mut obj = serde_json::Map::new();
        obj.insert("value".into(), format_rational(value).into());
        if let Some(digits) = output.decimal {
            obj.insert("decimal".into(), decimal_string(value, digits).into());
            obj.insert("decimal_is_approximate".into(), true.into());
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Object(obj)).unwrap()
        );
    } else {
        println!("{}", format_rational(value));
        if let Some(digits) = output.decimal {
            println!("~ {}", decimal_string(value, digits));
        }
    }
}

fn run_eval(matrix: &Path, graph: &Path, output: &OutputFlags) -> ExitCode {
    let a = match read_matrix(matrix) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let g = match read_graph(graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    match classify(&a) {
        Verdict::Tractable(witness) => {
            let value = eval_tractable(&witness, &g);
            print_value(&value, output);
            ExitCode::SUCCESS
        }
        Verdict::Hard(evidence) => {
            eprintln!("error: refusing to evaluate a #P-hard matrix: {evidence}");
            ExitCode::from(EXIT_HARD)
        }
    }
}

fn run_oracle(matrix: &Path, graph: &Path, output: &OutputFlags) -> ExitCode {
    let a = match read_matrix(matrix) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let g = match read_graph(graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    match eval_plain_bruteforce(&a, &g) {
        Ok(value) => {
            print_value(&value, output);
            ExitCode::SUCCESS
        }
        Err(err @ OracleError::GuardExceeded { .. }) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_GUARD)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_PARSE)
        }
    }
}

fn run_selftest(output: &OutputFlags) -> ExitCode {
    let results = selftest::run_all();
    let all_passed = results.iter().all(|r| r.passed);
    if output.json {
        let arr: Vec<serde_json::Value> = results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "index": r.index,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "passed": all_passed,
                "criteria": arr,
            }))
            .unwrap()
        );
    } else {
        for r in &results {
            println!("{}", r.line());
        }
        println!("selftest: {}", if all_passed { "PASS" } else { "FAIL" });
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
