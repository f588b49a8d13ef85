//! Report documents and their human-readable summaries.

use serde::{Deserialize, Serialize};
use structlmi::matops::to_rows;
use structlmi::{
    verify_gain, verify_lyapunov, GainReport, Mat, SolveReport, StructureSetDescription,
    SynthesisCertificate, SynthesisError,
};

use crate::problem::{Matrix, Problem, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub problem: String,
    pub structure: StructureSummary,
    pub results: Vec<MethodResult>,
}

impl ReportFile {
    pub fn result(&self, method: &str) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureSummary {
    #[serde(rename = "type")]
    pub kind: String,
    pub basis_dim: usize,
    pub hull_dim: usize,
    /// `true` where some element of the structure-set hull is nonzero.
    pub free: Vec<Vec<bool>>,
    pub grid: Vec<String>,
    pub equality_constraints: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub status: String,
    pub iterations: u32,
    pub worst_violation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve_time_s: Option<f64>,
    pub used_slack: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: String,
    pub status: String,
    /// Independent re-check of the returned gain passed.
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Matrix>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Matrix>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Matrix>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Matrix>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_cond: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_cond: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hurwitz_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership_residual: Option<f64>,
    /// `[re, im]` pairs, real parts descending.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_loop_eigenvalues: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverStats>,
}

impl MethodResult {
    pub fn succeeded(&self) -> bool {
        self.status == "feasible" && self.verified
    }

    pub fn not_applicable(method: &str, message: String) -> Self {
        MethodResult {
            method: method.into(),
            status: "not_applicable".into(),
            message: Some(message),
            ..Default::default()
        }
    }

    pub fn from_outcome(
        problem: &Problem,
        method: &str,
        outcome: Result<SynthesisCertificate, SynthesisError>,
        canonical: bool,
    ) -> Self {
        match outcome {
            Ok(cert) => {
                let mut r = Self::with_certificate(problem, method, &cert, canonical);
                if !r.verified {
                    r.status = "verification_failed".into();
                    r.message = Some("independent re-check of the gain failed".into());
                }
                r
            }
            Err(SynthesisError::Input(e)) => Self::not_applicable(method, e.to_string()),
            Err(err) => {
                let message = Some(err.to_string());
                let certificate = match &err {
                    SynthesisError::DegenerateLambda { certificate, .. }
                    | SynthesisError::MembershipViolation { certificate, .. }
                    | SynthesisError::VerificationFailed { certificate, .. } => Some(certificate),
                    _ => None,
                };
                let mut r = match certificate {
                    Some(cert) => Self::with_certificate(problem, method, cert, canonical),
                    None => MethodResult {
                        method: method.into(),
                        solver: err.solve_report().map(|s| solver_stats(s, canonical)),
                        ..Default::default()
                    },
                };
                r.status = err.kind().into();
                r.verified = false;
                r.message = message;
                r
            }
        }
    }

    fn with_certificate(problem: &Problem, method: &str, cert: &SynthesisCertificate, canonical: bool) -> Self {
        let gain = verify_gain(&problem.plant, &cert.k_gain, &problem.basis).ok();
        let lyapunov = verify_lyapunov(&problem.plant, &cert.k_gain, &cert.p);
        let verified = gain.as_ref().is_some_and(GainReport::passed) && lyapunov;
        let (r, y) = if cert.x.is_some() {
            (Some(rows(&cert.r_or_y)), None)
        } else {
            (None, Some(rows(&cert.r_or_y)))
        };
        MethodResult {
            method: method.into(),
            status: "feasible".into(),
            verified,
            message: None,
            k: Some(rows(&cert.k_gain)),
            p: Some(rows(cert.p.as_mat())),
            x: cert.x.as_ref().map(rows),
            r,
            y,
            gamma: cert.gamma,
            lambda: cert.lambda.as_ref().map(rows),
            lambda_cond: cert.lambda_cond,
            x_cond: cert.x_cond,
            hurwitz_margin: gain.as_ref().map(|g| g.margin),
            membership_residual: gain.as_ref().map(|g| g.membership_residual),
            closed_loop_eigenvalues: gain.as_ref().map(eigen_pairs),
            epsilon: Some(cert.epsilon),
            warnings: cert.warnings.clone(),
            solver: Some(solver_stats(&cert.solver, canonical)),
        }
    }
}

pub fn rows(m: &Mat) -> Matrix {
    to_rows(m)
}

pub fn eigen_pairs(g: &GainReport) -> Vec<[f64; 2]> {
    g.eigenvalues.iter().map(|z| [z.re, z.im]).collect()
}

fn solver_stats(s: &SolveReport, canonical: bool) -> SolverStats {
    SolverStats {
        status: s.status.label().into(),
        iterations: s.iterations,
        worst_violation: s.worst_violation,
        solve_time_s: (!canonical).then_some(s.solve_time.as_secs_f64()),
        used_slack: s.used_slack,
    }
}

fn entry_name(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("q{}{}", i + 1, j + 1)
    } else {
        format!("q{},{}", i + 1, j + 1)
    }
}

pub fn structure_summary(problem: &Problem, desc: &StructureSetDescription, tol: f64) -> StructureSummary {
    let n = desc.n();
    let free = desc.free_pattern(tol);
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| (0..n).map(|j| if free[i][j] { entry_name(n, i, j) } else { "0".into() }).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let grid = cells
        .iter()
        .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  "))
        .collect();

    let zeros = free.iter().flatten().filter(|f| !**f).count();
    let equality_constraints = if zeros == desc.equality_form().len() {
        // the complement is spanned by the forced-zero entries
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !free[i][j])
            .map(|(i, j)| format!("{} = 0", entry_name(n, i, j)))
            .collect()
    } else {
        desc.equality_form()
            .iter()
            .map(|f| {
                let scale = f.amax();
                let terms: Vec<String> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| f[(i, j)].abs() > 1e-9 * scale)
                    .map(|(i, j)| format!("{:+.6}·{}", f[(i, j)] / scale, entry_name(n, i, j)))
                    .collect();
                format!("{} = 0", terms.join(" "))
            })
            .collect()
    };
    StructureSummary {
        kind: problem.file.structure.kind().into(),
        basis_dim: problem.basis.k(),
        hull_dim: desc.dim(),
        free,
        grid,
        equality_constraints,
    }
}

pub fn report_file(problem: &Problem, structure: StructureSummary, results: Vec<MethodResult>) -> ReportFile {
    ReportFile {
        schema_version: SCHEMA_VERSION,
        problem: problem.name().to_string(),
        structure,
        results,
    }
}

fn sci(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.3e}"))
}

/// Fixed-width comparison table, one row per method.
pub fn comparison_table(report: &ReportFile) -> String {
    let mut out = format!(
        "{:<10} {:<22} {:>10} {:>10}  {}\n",
        "method", "status", "margin", "residual", "gain"
    );
    for r in &report.results {
        let status = if r.status == "feasible" && !r.verified {
            "feasible (unverified)".to_string()
        } else {
            r.status.clone()
        };
        let gain = r.k.as_ref().map_or_else(
            || r.message.clone().unwrap_or_default(),
            |k| {
                let rows: Vec<String> = k
                    .iter()
                    .map(|row| row.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", "))
                    .collect();
                format!("[[{}]]", rows.join("], ["))
            },
        );
        out.push_str(&format!(
            "{:<10} {:<22} {:>10} {:>10}  {}\n",
            r.method,
            status,
            sci(r.hurwitz_margin),
            sci(r.membership_residual),
            gain
        ));
    }
    out
}
