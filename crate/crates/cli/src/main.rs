//! `ftvn`: run FTvN property campaigns and print a JSON report.
//!
//! Exit status: 0 when the checked property holds, 1 when it is violated
//! (the report carries a counterexample), 2 on usage or input errors.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use ftvn::campaign::CheckReport;

use commands::{Command, Failure, Inputs};
use input::{parse_element, resolve_system};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "ftvn", version, about = "Property campaigns for FTvN systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Kind name (rn-down, rn-abs, norm-system, sym, sing-val, spin,
    /// finite-seq, subspace-counterexample) or a JSON instance spec;
    /// `@path` reads the spec from a file
    #[arg(long, global = true)]
    system: Option<String>,

    /// Dimension for named kinds; inferred from --x when omitted, else 3
    #[arg(long, global = true)]
    dim: Option<usize>,

    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, allow_hyphen_values = true, env = "FTVN_DEFAULT_TOL", default_value_t = ftvn::campaign::DEFAULT_TOL)]
    tol: f64,

    /// JSON vector or matrix (rows); `@path` reads a file
    #[arg(long, global = true, allow_hyphen_values = true)]
    x: Option<String>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    y: Option<String>,

    /// JSON matrix given by rows
    #[arg(long, global = true, allow_hyphen_values = true)]
    matrix: Option<String>,

    /// Include a majorization witness in the report
    #[arg(long, global = true)]
    witness: bool,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for sampling campaigns (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

fn inputs(cli: &Cli) -> Result<Inputs, String> {
    if cli.samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(format!("--tol must be positive, got {}", cli.tol));
    }
    let parse = |s: &Option<String>| s.as_deref().map(parse_element).transpose();
    let (x, y, matrix) = (parse(&cli.x)?, parse(&cli.y)?, parse(&cli.matrix)?);
    let system = match &cli.system {
        Some(s) => Some(resolve_system(s, cli.dim, x.as_ref(), matrix.as_ref())?),
        None if cli.command.needs_system() => return Err("--system is required".into()),
        None => None,
    };
    Ok(Inputs {
        system,
        samples: cli.samples,
        seed: cli.seed,
        tol: cli.tol,
        x,
        y,
        matrix,
        witness: cli.witness,
    })
}

fn execute(cli: &Cli) -> Result<Report, String> {
    let inp = inputs(cli)?;
    let name = inp.system.as_ref().map(|s| s.name());
    let start = Instant::now();
    let mut report = match commands::run(cli.command, &inp) {
        Ok((check, details)) => Report::new(cli.command.name(), name, check, details),
        Err(Failure::Usage(msg)) => return Err(msg),
        Err(Failure::Violation(msg)) => {
            let mut check = CheckReport::new(inp.seed, inp.tol);
            check.record(1.0, || json!({ "error": msg }));
            Report::new(cli.command.name(), name, check, serde_json::Value::Null)
        }
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.jobs {
        Some(0) => Err("--jobs must be at least 1".to_string()),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| e.to_string())
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report.to_json()) {
                eprintln!("ftvn: cannot write report: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(msg) => {
            eprintln!("ftvn: {msg}");
            ExitCode::from(2)
        }
    }
}
