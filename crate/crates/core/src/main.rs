use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pentacalc::flow::FlowSettings;
use pentacalc::harness::{cmd_flow, cmd_transport, load_scenario, run_suite, HarnessError, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "pentacalc", version, about = "Five-vector calculus identity harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run identity suites and print one JSON record per check.
    Check {
        #[arg(long)]
        spec: PathBuf,
        /// Suite to run; repeatable. Defaults to the scenario's checks.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Tolerance applied to every bound check.
        #[arg(long)]
        tol: Option<f64>,
        /// Probe seed overriding the scenario's.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Parallel-transport a five-vector along a named curve.
    Transport {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        curve: String,
        /// Five comma-separated components.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long = "from", allow_hyphen_values = true)]
        t0: f64,
        #[arg(long = "to", allow_hyphen_values = true)]
        t1: f64,
        /// Frame the vector is given in; the active regular frame by default.
        #[arg(long)]
        frame: Option<String>,
    },
    /// Tabulate the finite images of a function under a named field's flow.
    Flow {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long = "fn", allow_hyphen_values = true)]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
}

fn parse_vector(src: &str) -> Result<[f64; 5], HarnessError> {
    let parts: Vec<f64> = src
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| HarnessError::Usage(format!("--vector: {e}")))?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| HarnessError::Usage(format!("--vector needs 5 components, got {}", v.len())))
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    let settings = FlowSettings::from_env();
    match cli.command {
        Command::Check { spec, suites, tol, seed, report } => {
            let scenario = load_scenario(&spec)?;
            let result = run_suite(&scenario, &RunOptions { suites, tolerance: tol, seed, settings })?;
            let text = result.to_json_lines();
            print!("{text}");
            if let Some(path) = report {
                std::fs::write(&path, &text)
                    .map_err(|e| HarnessError::Io { path: path.display().to_string(), message: e.to_string() })?;
            }
            Ok(result.passed())
        }
        Command::Transport { spec, curve, vector, t0, t1, frame } => {
            let scenario = load_scenario(&spec)?;
            let v = parse_vector(&vector)?;
            let r = cmd_transport(&scenario, &curve, v, t0, t1, frame.as_deref(), &settings)?;
            println!("{}", serde_json::to_string(&r).expect("report serializes"));
            Ok(true)
        }
        Command::Flow { spec, field, function, t } => {
            let scenario = load_scenario(&spec)?;
            let table = cmd_flow(&scenario, &field, &function, t, &settings)?;
            for row in &table.rows {
                println!("{}", serde_json::to_string(row).expect("row serializes"));
            }
            println!("{}", serde_json::json!({ "field": table.field, "fn": table.function, "t": table.t, "max_residual": table.max_residual }));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
