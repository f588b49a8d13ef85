//! The three subcommands, free of argument parsing and terminal I/O.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use structlmi::{
    compute_structure_set, synthesize_blanchini, synthesize_main, synthesize_prop1, verify_gain,
    Mat, SynthesisOptions,
};

use crate::problem::{matrix, parse_json, Matrix, MethodChoice, Problem};
use crate::report::{eigen_pairs, report_file, structure_summary, MethodResult, ReportFile, StructureSummary};
use crate::{CliError, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK};

/// Settings from flags or the environment. They win over the problem file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub method: Option<MethodChoice>,
    pub epsilon: Option<f64>,
    pub tol: Option<f64>,
    pub time_limit: Option<f64>,
    pub max_iter: Option<u32>,
}

impl Overrides {
    fn check(&self) -> Result<(), CliError> {
        for (flag, v) in [("--epsilon", self.epsilon), ("--tol", self.tol), ("--time-limit", self.time_limit)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(CliError::Usage(format!("{flag} must be positive, got {v}")));
                }
            }
        }
        if self.max_iter == Some(0) {
            return Err(CliError::Usage("--max-iter must be positive".into()));
        }
        Ok(())
    }
}

/// Flag, then problem file, then library default.
pub fn resolve_options(problem: &Problem, ov: &Overrides) -> Result<(MethodChoice, SynthesisOptions), CliError> {
    ov.check()?;
    let file = &problem.file.options;
    let mut opts = SynthesisOptions::default();
    if let Some(eps) = ov.epsilon.or(file.epsilon) {
        opts.epsilon = eps;
    }
    if let Some(tol) = ov.tol.or(file.tol) {
        opts.solve.tol = tol;
    }
    if let Some(t) = ov.time_limit.or(file.time_limit) {
        opts.solve.time_limit = Duration::from_secs_f64(t);
    }
    if let Some(it) = ov.max_iter {
        opts.solve.max_iter = it;
    }
    let method = ov.method.or(file.method).unwrap_or(MethodChoice::All);
    Ok((method, opts))
}

fn run_method(problem: &Problem, name: &str, opts: &SynthesisOptions, canonical: bool) -> MethodResult {
    let outcome = match name {
        "main" => synthesize_main(&problem.plant, &problem.basis, opts),
        "prop1" => synthesize_prop1(&problem.plant, &problem.basis, &problem.p_pattern, &problem.basis, opts),
        _ => match &problem.partition {
            Some(part) => synthesize_blanchini(&problem.plant, part, opts),
            None => {
                return MethodResult::not_applicable(
                    name,
                    format!("needs a decentralized structure, got {}", problem.file.structure.kind()),
                )
            }
        },
    };
    log::info!("{name}: {}", outcome.as_ref().map_or_else(|e| e.kind(), |_| "feasible"));
    MethodResult::from_outcome(problem, name, outcome, canonical)
}

/// Runs the requested methods and returns the report with its exit code.
///
/// A single method that does not apply to the problem is a usage error.
pub fn run_synthesize(problem: &Problem, ov: &Overrides, canonical: bool) -> Result<(ReportFile, i32), CliError> {
    let (choice, opts) = resolve_options(problem, ov)?;
    let names: &[&str] = match choice {
        MethodChoice::Main => &["main"],
        MethodChoice::Prop1 => &["prop1"],
        MethodChoice::Blanchini => &["blanchini"],
        MethodChoice::All => &["main", "prop1", "blanchini"],
    };
    let results: Vec<MethodResult> = names.iter().map(|n| run_method(problem, n, &opts, canonical)).collect();
    if let [only] = results.as_slice() {
        if only.status == "not_applicable" {
            return Err(CliError::Usage(format!(
                "method {} does not apply: {}",
                only.method,
                only.message.as_deref().unwrap_or("")
            )));
        }
    }
    let desc = compute_structure_set(&problem.basis, opts.structure_tol)?;
    let structure = structure_summary(problem, &desc, opts.structure_tol);
    let code = if results.iter().any(MethodResult::succeeded) { EXIT_OK } else { EXIT_INCONCLUSIVE };
    Ok((report_file(problem, structure, results), code))
}

pub fn run_structure(problem: &Problem) -> Result<StructureSummary, CliError> {
    let tol = SynthesisOptions::default().structure_tol;
    let desc = compute_structure_set(&problem.basis, tol)?;
    Ok(structure_summary(problem, &desc, tol))
}

/// Relative membership tolerance used by `verify` unless overridden.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub problem: String,
    pub passed: bool,
    pub stability: String,
    pub hurwitz: bool,
    pub hurwitz_margin: f64,
    pub membership_residual: f64,
    pub membership_tol: f64,
    pub membership_ok: bool,
    pub closed_loop_eigenvalues: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct GainOnly {
    #[serde(rename = "K")]
    k: Matrix,
}

/// Accepts `{"K": [[..]]}` or a synthesis report; for a report, the gain of
/// the first verified result is used.
pub fn parse_gain(text: &str) -> Result<Mat, CliError> {
    let value: serde_json::Value = parse_json(text)?;
    if value.get("results").is_some() {
        let report: ReportFile = parse_json(text)?;
        let (i, r) = report
            .results
            .iter()
            .enumerate()
            .find(|(_, r)| r.succeeded() && r.k.is_some())
            .ok_or_else(|| CliError::Schema { path: "results".into(), message: "no verified gain in report".into() })?;
        return matrix(&format!("results[{i}].K"), r.k.as_ref().unwrap());
    }
    let g: GainOnly = parse_json(text)?;
    matrix("K", &g.k)
}

pub fn run_verify(problem: &Problem, k: &Mat, membership_tol: Option<f64>) -> Result<(VerifyReport, i32), CliError> {
    let tol = membership_tol.unwrap_or(DEFAULT_MEMBERSHIP_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let (m, n) = (problem.plant.m(), problem.plant.n());
    if k.shape() != (m, n) {
        return Err(CliError::Schema {
            path: "K".into(),
            message: format!("is {}x{}, expected {m}x{n}", k.nrows(), k.ncols()),
        });
    }
    let g = verify_gain(&problem.plant, k, &problem.basis)?;
    let membership_ok = g.membership_residual <= tol * (1.0 + k.norm());
    let passed = g.hurwitz && membership_ok;
    let report = VerifyReport {
        problem: problem.name().to_string(),
        passed,
        stability: g.stability.label().into(),
        hurwitz: g.hurwitz,
        hurwitz_margin: g.margin,
        membership_residual: g.membership_residual,
        membership_tol: tol,
        membership_ok,
        closed_loop_eigenvalues: eigen_pairs(&g),
    };
    Ok((report, if passed { EXIT_OK } else { EXIT_INCONCLUSIVE }))
}

/// Exit code for an error that stopped a command.
pub fn error_exit_code(_: &CliError) -> i32 {
    EXIT_INPUT
}
