use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use structlmi_cli::commands::{error_exit_code, parse_gain};
use structlmi_cli::problem::read_file;
use structlmi_cli::report::comparison_table;
use structlmi_cli::{
    load_problem, run_structure, run_synthesize, run_verify, CliError, MethodChoice, Overrides, EXIT_INPUT,
};

#[derive(Parser)]
#[command(name = "structlmi", version, about = "Structured state-feedback synthesis via LMIs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a structured gain and write a JSON report.
    Synthesize {
        problem: PathBuf,
        #[arg(long, value_enum, env = "STRUCTLMI_METHOD")]
        method: Option<MethodChoice>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit timing fields so reports are byte-for-byte reproducible.
        #[arg(long)]
        canonical: bool,
    },
    /// Print the structure set of the problem's gain subspace.
    Structure {
        problem: PathBuf,
        /// Emit JSON instead of the text grid.
        #[arg(long)]
        json: bool,
    },
    /// Check a gain: closed-loop stability and membership in the subspace.
    Verify {
        problem: PathBuf,
        /// `{"K": ...}` or a synthesis report.
        gain: PathBuf,
        /// Relative membership tolerance.
        #[arg(long, env = "STRUCTLMI_TOL")]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Margin for strict LMIs.
    #[arg(long, env = "STRUCTLMI_EPSILON")]
    epsilon: Option<f64>,
    /// Solver gap and feasibility tolerance.
    #[arg(long, env = "STRUCTLMI_TOL")]
    tol: Option<f64>,
    /// Per-solve limit in seconds.
    #[arg(long, env = "STRUCTLMI_TIME_LIMIT")]
    time_limit: Option<f64>,
    #[arg(long, env = "STRUCTLMI_MAX_ITER")]
    max_iter: Option<u32>,
}

fn emit(json: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, format!("{json}\n"))
            .map_err(|e| CliError::Io { path: path.display().to_string(), source: e }),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{json}").map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Synthesize { problem, method, solver, out, canonical } => {
            let problem = load_problem(&problem)?;
            let ov = Overrides {
                method,
                epsilon: solver.epsilon,
                tol: solver.tol,
                time_limit: solver.time_limit,
                max_iter: solver.max_iter,
            };
            let (report, code) = run_synthesize(&problem, &ov, canonical)?;
            eprint!("{}", comparison_table(&report));
            emit(&to_json(&report), out.as_deref())?;
            Ok(code)
        }
        Command::Structure { problem, json } => {
            let problem = load_problem(&problem)?;
            let s = run_structure(&problem)?;
            if json {
                emit(&to_json(&s), None)?;
            } else {
                let mut text = format!("structure set ({}), dimension {}\n", s.kind, s.hull_dim);
                for row in &s.grid {
                    text.push_str(&format!("  {row}\n"));
                }
                if !s.equality_constraints.is_empty() {
                    text.push_str("constraints:\n");
                    for c in &s.equality_constraints {
                        text.push_str(&format!("  {c}\n"));
                    }
                }
                print!("{text}");
            }
            Ok(0)
        }
        Command::Verify { problem, gain, tol, out } => {
            let problem = load_problem(&problem)?;
            let k = parse_gain(&read_file(&gain)?)?;
            let (report, code) = run_verify(&problem, &k, tol)?;
            eprintln!(
                "{}: {} (margin {:.3e}, membership residual {:.3e})",
                problem.name(),
                if report.passed { "passed" } else { "failed" },
                report.hurwitz_margin,
                report.membership_residual
            );
            emit(&to_json(&report), out.as_deref())?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with 2 on bad arguments; 2 is reserved for "no certified gain"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
