//! Solver boundary for compiled conic feasibility programs.
//!
//! [`SdpBackend`] is the contract; [`ClarabelBackend`] is the default
//! implementation. Every point a backend calls feasible is re-checked
//! against the compiled blocks with a dense eigenvalue test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

use crate::lmi::CompiledProgram;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub max_iter: u32,
    /// Interior-point gap and feasibility tolerance.
    pub tol: f64,
    /// Accepted relative constraint violation at a returned point.
    pub feas_tol: f64,
    pub time_limit: Duration,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iter: 200,
            tol: 1e-8,
            feas_tol: 1e-7,
            time_limit: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    Feasible,
    Infeasible,
    /// The backend stopped without a certified answer; the best iterate is attached.
    Inaccurate(String),
    NumericalFailure(String),
    TimedOut,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Inaccurate(_) => "inaccurate",
            SolveStatus::NumericalFailure(_) => "numerical_failure",
            SolveStatus::TimedOut => "timed_out",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub coords: Option<Vec<f64>>,
    /// Largest relative violation over all blocks (see
    /// [`CompiledProgram::violations`]); negative when strictly satisfied.
    pub worst_violation: f64,
    pub iterations: u32,
    pub solve_time: Duration,
    /// Whether the margin-slack reformulation produced this report.
    pub used_slack: bool,
}

impl SolveReport {
    fn failure(status: SolveStatus, started: Instant) -> Self {
        SolveReport {
            status,
            coords: None,
            worst_violation: f64::NAN,
            iterations: 0,
            solve_time: started.elapsed(),
            used_slack: false,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == SolveStatus::Feasible
    }
}

pub trait SdpBackend {
    fn solve(&self, program: &CompiledProgram, opts: &SolveOptions) -> SolveReport;
}

/// Interior-point backend using Clarabel's PSD-triangle cones.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClarabelBackend;

impl SdpBackend for ClarabelBackend {
    fn solve(&self, program: &CompiledProgram, opts: &SolveOptions) -> SolveReport {
        let first = solve_direct(program, opts);
        match first.status {
            SolveStatus::Inaccurate(_) | SolveStatus::NumericalFailure(_) => {
                log::debug!("direct solve inconclusive ({:?}); retrying with slack", first.status);
                let slack = solve_slack(program, opts);
                if slack.is_feasible() || slack.status == SolveStatus::Infeasible {
                    slack
                } else {
                    first
                }
            }
            _ => first,
        }
    }
}

/// Conic data in Clarabel's `Ax + s = b, s ∈ K` form.
struct ConicData {
    a: CscMatrix<f64>,
    b: Vec<f64>,
    cones: Vec<SupportedConeT<f64>>,
}

/// Position of `(i, j)` (i ≤ j) in the scaled upper-triangle, column-wise
/// ordering used by PSD-triangle cones, and its scale.
fn triangle_entries(dim: usize) -> impl Iterator<Item = (usize, usize, f64)> {
    (0..dim).flat_map(|j| {
        (0..=j).map(move |i| (i, j, if i == j { 1.0 } else { std::f64::consts::SQRT_2 }))
    })
}

/// Index of `(row, col)` (row ≥ col) in the crate's lower-triangle svec.
fn svec_index(dim: usize, row: usize, col: usize) -> usize {
    col * dim - col * (col + 1) / 2 + row
}

/// Builds `b − A x = s` where `s` stacks the cone slices of each block.
/// With `slack`, one extra trailing variable enters every block as `+t·I`.
fn assemble(program: &CompiledProgram, slack: bool) -> ConicData {
    let ncols = program.num_scalars + usize::from(slack);
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut b = Vec::new();
    let mut cones = Vec::new();
    let mut row = 0;
    for blk in &program.blocks {
        let d = blk.dim;
        let start = row;
        for (i, j, scale) in triangle_entries(d) {
            // lower-triangle svec coordinates of entry (j, i)
            let idx = svec_index(d, j, i);
            b.push(scale * blk.constant[idx]);
            for (k, f) in &blk.coeffs {
                let v = f[idx];
                if v != 0.0 {
                    triplets.push((row, *k, -scale * v));
                }
            }
            if slack && i == j {
                triplets.push((row, program.num_scalars, -1.0));
            }
            row += 1;
        }
        if d == 1 {
            cones.push(SupportedConeT::NonnegativeConeT(1));
        } else {
            cones.push(SupportedConeT::PSDTriangleConeT(d));
        }
        debug_assert_eq!(row - start, d * (d + 1) / 2);
    }
    ConicData { a: csc_from_triplets(row, ncols, triplets), b, cones }
}

fn csc_from_triplets(m: usize, n: usize, mut t: Vec<(usize, usize, f64)>) -> CscMatrix<f64> {
    t.sort_by_key(|&(r, c, _)| (c, r));
    let mut colptr = vec![0usize; n + 1];
    let mut rowval = Vec::with_capacity(t.len());
    let mut nzval = Vec::with_capacity(t.len());
    for &(r, c, v) in &t {
        colptr[c + 1] += 1;
        rowval.push(r);
        nzval.push(v);
    }
    for c in 0..n {
        colptr[c + 1] += colptr[c];
    }
    CscMatrix::new(m, n, colptr, rowval, nzval)
}

struct RawSolution {
    status: SolverStatus,
    x: Vec<f64>,
    iterations: u32,
}

fn run_clarabel(data: ConicData, q: Vec<f64>, opts: &SolveOptions) -> Result<RawSolution, String> {
    let n = q.len();
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(opts.max_iter)
        .time_limit(opts.time_limit.as_secs_f64())
        .tol_gap_abs(opts.tol)
        .tol_gap_rel(opts.tol)
        .tol_feas(opts.tol)
        .build()
        .map_err(|e| format!("invalid solver settings: {e}"))?;
    let p = CscMatrix::<f64>::zeros((n, n));
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let mut solver = DefaultSolver::new(&p, &q, &data.a, &data.b, &data.cones, settings)
            .map_err(|e| format!("solver setup failed: {e:?}"))?;
        solver.solve();
        Ok::<_, String>(RawSolution {
            status: solver.solution.status,
            x: solver.solution.x.clone(),
            iterations: solver.solution.iterations,
        })
    }));
    match outcome {
        Ok(r) => r,
        Err(_) => Err("solver panicked".into()),
    }
}

fn classify(
    program: &CompiledProgram,
    raw: RawSolution,
    coords: Vec<f64>,
    opts: &SolveOptions,
    started: Instant,
) -> SolveReport {
    let worst = program.worst_violation(&coords);
    let certified = worst.is_finite() && worst <= opts.feas_tol;
    let status = match raw.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved if certified => SolveStatus::Feasible,
        SolverStatus::Solved | SolverStatus::AlmostSolved => {
            SolveStatus::Inaccurate(format!("solver point violates constraints by {worst:.3e}"))
        }
        SolverStatus::PrimalInfeasible => SolveStatus::Infeasible,
        SolverStatus::MaxTime => SolveStatus::TimedOut,
        SolverStatus::NumericalError => SolveStatus::NumericalFailure("numerical error".into()),
        other => SolveStatus::Inaccurate(format!("{other:?}")),
    };
    SolveReport {
        status,
        coords: Some(coords),
        worst_violation: worst,
        iterations: raw.iterations,
        solve_time: started.elapsed(),
        used_slack: false,
    }
}

fn solve_direct(program: &CompiledProgram, opts: &SolveOptions) -> SolveReport {
    let started = Instant::now();
    let data = assemble(program, false);
    let q = vec![0.0; program.num_scalars];
    match run_clarabel(data, q, opts) {
        Ok(raw) => {
            let coords = raw.x.clone();
            classify(program, raw, coords, opts, started)
        }
        Err(msg) => SolveReport::failure(SolveStatus::NumericalFailure(msg), started),
    }
}

/// Minimizes a shared slack `t` with every block's margin replaced by
/// `−t`: `F_b(x) + (ε_b + t) I ⪰ 0`, `t ≥ −1`. Accepted when `t ≤ −ε/2`
/// for the smallest margin `ε`; an optimal `t` above that is reported as
/// infeasible.
fn solve_slack(program: &CompiledProgram, opts: &SolveOptions) -> SolveReport {
    let started = Instant::now();
    let min_eps = program.blocks.iter().map(|b| b.eps).fold(f64::INFINITY, f64::min);
    let mut relaxed = program.clone();
    for blk in &mut relaxed.blocks {
        let d = blk.dim;
        for i in 0..d {
            blk.constant[svec_index(d, i, i)] += blk.eps;
        }
    }
    let mut data = assemble(&relaxed, true);
    // t ≥ −1  ⇔  1 + t ≥ 0
    let t_col = program.num_scalars;
    let (m, n) = (data.a.m + 1, data.a.n);
    let mut triplets = csc_triplets(&data.a);
    triplets.push((m - 1, t_col, -1.0));
    data.a = csc_from_triplets(m, n, triplets);
    data.b.push(1.0);
    data.cones.push(SupportedConeT::NonnegativeConeT(1));

    let mut q = vec![0.0; n];
    q[t_col] = 1.0;
    match run_clarabel(data, q, opts) {
        Ok(raw) => {
            let t = raw.x[t_col];
            let coords = raw.x[..program.num_scalars].to_vec();
            // Violations are judged against the halved margin.
            let mut report = if t <= -min_eps / 2.0 {
                let mut halved = program.clone();
                for blk in &mut halved.blocks {
                    let d = blk.dim;
                    for i in 0..d {
                        blk.constant[svec_index(d, i, i)] += blk.eps - min_eps / 2.0;
                    }
                }
                classify(&halved, raw, coords, opts, started)
            } else {
                let optimal = matches!(raw.status, SolverStatus::Solved);
                let mut r = classify(program, raw, coords, opts, started);
                // The optimal slack is the smallest achievable margin violation.
                r.status = if optimal {
                    SolveStatus::Infeasible
                } else {
                    SolveStatus::Inaccurate(format!("slack {t:.3e} above -eps/2"))
                };
                r
            };
            report.used_slack = true;
            report
        }
        Err(msg) => SolveReport::failure(SolveStatus::NumericalFailure(msg), started),
    }
}

fn csc_triplets(a: &CscMatrix<f64>) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::with_capacity(a.nzval.len());
    for c in 0..a.n {
        for idx in a.colptr[c]..a.colptr[c + 1] {
            out.push((a.rowval[idx], c, a.nzval[idx]));
        }
    }
    out
}
