//! Structured gain synthesis.
//!
//! * [`synthesize_main`]: design matrix `X` restricted to the structure-set
//!   hull, `R ∈ span 𝒮`, unstructured Lyapunov matrix `P`, dilated LMI
//!   `[[0,P],[P,0]] + He([[AX+BR, AX+BR],[−X,−X]]) ≺ 0`, gain `K = R X⁻¹`.
//! * [`synthesize_prop1`]: classical change of variables `He(AP + BY) ≺ 0`
//!   with a structured `P`, gain `K = Y P⁻¹`.
//! * [`synthesize_blanchini`]: network-decentralized condition
//!   `AW + WAᵀ − 2γBBᵀ ≺ 0` with block-diagonal `W`, gain `K = −γBᵀW⁻¹`.
//! * [`dilated_feasibility`]: the dilated LMI for a fixed closed loop and a
//!   fixed `P`, with a free `X`.
//!
//! All conditions are sufficient only: an infeasible program means the
//! method is inconclusive, not that no structured stabilizer exists.

use thiserror::Error;

use crate::error::Error;
use crate::lmi::{AffineMatExpr, LinExpr, ProgramBuilder, VarKind, VarRef, DEFAULT_EPSILON};
use crate::matops::{self, Mat, SymMat};
use crate::sdp::{ClarabelBackend, SdpBackend, SolveOptions, SolveReport, SolveStatus};
use crate::structure::{
    basis_from_mask, compute_structure_set, decentralized_mask, BlockPartition, StructureBasis,
    StructureSetDescription, ZeroPatternMask,
};

/// Spectral abscissa every accepted gain must stay below.
pub const HURWITZ_TOL: f64 = 1e-8;
/// Relative membership tolerance: residual ≤ tol·(1 + ‖K‖_F).
pub const MEMBERSHIP_TOL: f64 = 1e-7;

/// Linear time-invariant plant `ẋ = Ax + Bu`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plant {
    a: Mat,
    b: Mat,
}

impl Plant {
    pub fn new(a: Mat, b: Mat) -> Result<Self, Error> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "A must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != a.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "B has {} rows but A is {}x{}",
                b.nrows(),
                a.nrows(),
                a.ncols()
            )));
        }
        matops::ensure_finite(&a, "A")?;
        matops::ensure_finite(&b, "B")?;
        Ok(Plant { a, b })
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    /// `A + BK`.
    pub fn closed_loop(&self, k: &Mat) -> Result<Mat, Error> {
        if k.shape() != (self.m(), self.n()) {
            return Err(Error::DimensionMismatch(format!(
                "gain is {}x{}, expected {}x{}",
                k.nrows(),
                k.ncols(),
                self.m(),
                self.n()
            )));
        }
        Ok(&self.a + &self.b * k)
    }

    fn check_basis(&self, basis: &StructureBasis) -> Result<(), Error> {
        if (basis.m(), basis.n()) != (self.m(), self.n()) {
            return Err(Error::DimensionMismatch(format!(
                "structure is {}x{} but the plant gain is {}x{}",
                basis.m(),
                basis.n(),
                self.m(),
                self.n()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaMode {
    /// γ is a decision variable in `[ε, upper]`.
    Free { upper: f64 },
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions {
    /// Margin for strict inequalities.
    pub epsilon: f64,
    /// Margin for one automatic retry after an infeasible solve.
    pub retry_epsilon: Option<f64>,
    /// Relative rank threshold for the structure-set nullspace.
    pub structure_tol: f64,
    pub solve: SolveOptions,
    pub gamma: GammaMode,
    /// Certificates with cond(Λ) above this are rejected.
    pub lambda_cond_max: f64,
    /// cond(X) above this adds a warning to the certificate.
    pub x_cond_warn: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            epsilon: DEFAULT_EPSILON,
            retry_epsilon: Some(1e-9),
            structure_tol: matops::DEFAULT_RANK_TOL,
            solve: SolveOptions::default(),
            gamma: GammaMode::Free { upper: 1e6 },
            lambda_cond_max: 1e10,
            x_cond_warn: 1e12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Main,
    Prop1,
    Blanchini,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Main => "main",
            Method::Prop1 => "prop1",
            Method::Blanchini => "blanchini",
        }
    }
}

/// Solved variables of a successful synthesis together with their checks.
#[derive(Debug, Clone)]
pub struct SynthesisCertificate {
    pub method: Method,
    /// Gain projected onto the structure basis.
    pub k_gain: Mat,
    /// Lyapunov matrix (`P`, or `W` for the network-decentralized baseline).
    pub p: SymMat,
    /// Design matrix; only the main method has one.
    pub x: Option<Mat>,
    /// `R` (main) or `Y` (baselines) with `K = r_or_y · x⁻¹` (resp. `p⁻¹`).
    pub r_or_y: Mat,
    /// Coordinates of `r_or_y` in its basis.
    pub alpha: Vec<f64>,
    pub lambda: Option<Mat>,
    pub lambda_cond: Option<f64>,
    pub x_cond: Option<f64>,
    pub gamma: Option<f64>,
    /// `−max Re λ(A + BK)`.
    pub hurwitz_margin: f64,
    /// Distance of the unprojected product gain from the structure.
    pub membership_residual: f64,
    /// Margin the accepted program was solved with.
    pub epsilon: f64,
    pub warnings: Vec<String>,
    pub solver: SolveReport,
}

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Input(#[from] Error),

    /// The sufficient condition has no solution; the method is inconclusive.
    #[error("method inconclusive: the LMI is infeasible")]
    Infeasible(Box<SolveReport>),

    #[error("solver returned no certified answer ({})", .0.status.label())]
    Inconclusive(Box<SolveReport>),

    #[error("numerical failure in the solver")]
    NumericalFailure(Box<SolveReport>),

    #[error("structure certificate Λ is near-singular (cond {cond:.3e})")]
    DegenerateLambda { cond: f64, certificate: Box<SynthesisCertificate> },

    #[error("gain leaves the target structure (residual {residual:.3e})")]
    MembershipViolation { residual: f64, certificate: Box<SynthesisCertificate> },

    #[error("certificate rejected: {reason}")]
    VerificationFailed { reason: String, certificate: Box<SynthesisCertificate> },
}

impl SynthesisError {
    pub fn kind(&self) -> &'static str {
        match self {
            SynthesisError::Input(_) => "input_error",
            SynthesisError::Infeasible(_) => "infeasible",
            SynthesisError::Inconclusive(_) => "inconclusive",
            SynthesisError::NumericalFailure(_) => "numerical_failure",
            SynthesisError::DegenerateLambda { .. } => "degenerate_lambda",
            SynthesisError::MembershipViolation { .. } => "membership_violation",
            SynthesisError::VerificationFailed { .. } => "verification_failed",
        }
    }

    pub fn solve_report(&self) -> Option<&SolveReport> {
        match self {
            SynthesisError::Infeasible(r)
            | SynthesisError::Inconclusive(r)
            | SynthesisError::NumericalFailure(r) => Some(r),
            SynthesisError::DegenerateLambda { certificate, .. }
            | SynthesisError::MembershipViolation { certificate, .. }
            | SynthesisError::VerificationFailed { certificate, .. } => Some(&certificate.solver),
            SynthesisError::Input(_) => None,
        }
    }
}

type SynthResult<T> = Result<T, SynthesisError>;

/// Synthesis entry points bound to a particular SDP backend.
#[derive(Debug, Clone)]
pub struct Synthesizer<B> {
    backend: B,
    opts: SynthesisOptions,
}

impl Default for Synthesizer<ClarabelBackend> {
    fn default() -> Self {
        Synthesizer::new(ClarabelBackend, SynthesisOptions::default())
    }
}

/// Variables shared by the structured programs.
struct Built<V> {
    program: ProgramBuilder,
    vars: V,
}

impl<B: SdpBackend> Synthesizer<B> {
    pub fn new(backend: B, opts: SynthesisOptions) -> Self {
        Synthesizer { backend, opts }
    }

    pub fn options(&self) -> &SynthesisOptions {
        &self.opts
    }

    /// Solves the program produced by `build(ε)`, retrying once with the
    /// smaller margin when the first attempt is infeasible.
    fn solve_with_retry<V>(
        &self,
        build: impl Fn(f64) -> Result<Built<V>, Error>,
    ) -> SynthResult<(V, Vec<f64>, SolveReport, f64)> {
        let mut margins = vec![self.opts.epsilon];
        margins.extend(self.opts.retry_epsilon.filter(|&e| e < self.opts.epsilon));
        let mut last = None;
        for eps in margins {
            let built = build(eps)?;
            let compiled = built.program.compile()?;
            let report = self.backend.solve(&compiled, &self.opts.solve);
            match report.status {
                SolveStatus::Feasible => {
                    let coords = report.coords.clone().unwrap_or_default();
                    return Ok((built.vars, coords, report, eps));
                }
                SolveStatus::Infeasible => {
                    log::debug!("infeasible at margin {eps:e}");
                    last = Some(report);
                }
                SolveStatus::NumericalFailure(_) => {
                    return Err(SynthesisError::NumericalFailure(Box::new(report)))
                }
                SolveStatus::Inaccurate(_) | SolveStatus::TimedOut => {
                    return Err(SynthesisError::Inconclusive(Box::new(report)))
                }
            }
        }
        Err(SynthesisError::Infeasible(Box::new(last.expect("at least one attempt"))))
    }

    /// Structure-set + dilated-LMI synthesis.
    pub fn main(&self, plant: &Plant, basis: &StructureBasis) -> SynthResult<SynthesisCertificate> {
        plant.check_basis(basis)?;
        let desc = compute_structure_set(basis, self.opts.structure_tol)?;
        self.main_with_structure_set(plant, basis, &desc)
    }

    /// As [`Synthesizer::main`] with a precomputed structure set.
    pub fn main_with_structure_set(
        &self,
        plant: &Plant,
        basis: &StructureBasis,
        desc: &StructureSetDescription,
    ) -> SynthResult<SynthesisCertificate> {
        plant.check_basis(basis)?;
        let n = plant.n();
        let ((p, x, r), coords, report, eps) = self.solve_with_retry(|eps| {
            let mut prog = ProgramBuilder::new();
            let p = prog.add_var(VarKind::Sym(n))?;
            let x = prog.add_var(VarKind::Structured(desc.q_basis().to_vec()))?;
            let r = prog.add_var(VarKind::Structured(basis.mats().to_vec()))?;
            prog.constrain_posdef(AffineMatExpr::sym(&p.expr())?, 1.0)?;
            prog.constrain_negdef(dilated_lmi(plant.a(), plant.b(), &p, &x, Some(&r))?, eps)?;
            Ok(Built { program: prog, vars: (p, x, r) })
        })?;

        let p_val = SymMat::new(p.value(&coords))?;
        let x_val = x.value(&coords);
        let r_val = r.value(&coords);
        let lambda = desc.lambda_of_coords(x.coords(&coords));
        let lambda_cond = matops::condition_number(&lambda)?;
        let x_cond = matops::condition_number(&x_val)?;
        let raw_k = right_divide(&r_val, &x_val).ok_or_else(|| {
            SynthesisError::Input(Error::InvalidArgument("design matrix X is singular".into()))
        })?;

        let mut cert = SynthesisCertificate {
            method: Method::Main,
            k_gain: raw_k.clone(),
            p: p_val,
            x: Some(x_val.clone()),
            r_or_y: r_val,
            alpha: r.coords(&coords).to_vec(),
            lambda: Some(lambda),
            lambda_cond: Some(lambda_cond),
            x_cond: Some(x_cond),
            gamma: None,
            hurwitz_margin: f64::NAN,
            membership_residual: f64::NAN,
            epsilon: eps,
            warnings: Vec::new(),
            solver: report,
        };
        if x_cond > self.opts.x_cond_warn {
            cert.warnings.push(format!("design matrix X is ill-conditioned (cond {x_cond:.3e})"));
        }
        let he_x = SymMat::new(matops::he(&x_val))?;
        if he_x.min_eigenvalue() <= 0.0 {
            return Err(SynthesisError::VerificationFailed {
                reason: "X + Xᵀ is not positive definite".into(),
                certificate: Box::new(cert),
            });
        }
        if !(lambda_cond <= self.opts.lambda_cond_max) {
            return Err(SynthesisError::DegenerateLambda { cond: lambda_cond, certificate: Box::new(cert) });
        }
        finish(plant, basis, raw_k, cert)
    }

    /// Change-of-variables baseline `He(AP + BY) ≺ 0`, `P` restricted by
    /// `p_structure`, `Y ∈ span(y_basis)`. The caller vouches that
    /// `Y P⁻¹` lands in `target`; this is checked afterwards.
    pub fn prop1(
        &self,
        plant: &Plant,
        y_basis: &StructureBasis,
        p_structure: &ZeroPatternMask,
        target: &StructureBasis,
    ) -> SynthResult<SynthesisCertificate> {
        plant.check_basis(y_basis)?;
        plant.check_basis(target)?;
        let n = plant.n();
        if (p_structure.m(), p_structure.n()) != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "P pattern is {}x{}, expected {n}x{n}",
                p_structure.m(),
                p_structure.n()
            ))
            .into());
        }
        let p_basis = symmetric_pattern_basis(p_structure)?;
        let ((p, y), coords, report, eps) = self.solve_with_retry(|eps| {
            let mut prog = ProgramBuilder::new();
            let p = prog.add_var(VarKind::Structured(p_basis.clone()))?;
            let y = prog.add_var(VarKind::Structured(y_basis.mats().to_vec()))?;
            prog.constrain_posdef(AffineMatExpr::sym(&p.expr())?, 1.0)?;
            let ap_by = p.expr().left_mul(plant.a()) + y.expr().left_mul(plant.b());
            prog.constrain_negdef(AffineMatExpr::he(&ap_by)?, eps)?;
            Ok(Built { program: prog, vars: (p, y) })
        })?;

        let p_val = SymMat::new(p.value(&coords))?;
        let y_val = y.value(&coords);
        let raw_k = right_divide(&y_val, p_val.as_mat()).ok_or_else(|| {
            SynthesisError::Input(Error::InvalidArgument("Lyapunov matrix P is singular".into()))
        })?;
        let cert = SynthesisCertificate {
            method: Method::Prop1,
            k_gain: raw_k.clone(),
            p: p_val,
            x: None,
            r_or_y: y_val,
            alpha: y.coords(&coords).to_vec(),
            lambda: None,
            lambda_cond: None,
            x_cond: None,
            gamma: None,
            hurwitz_margin: f64::NAN,
            membership_residual: f64::NAN,
            epsilon: eps,
            warnings: Vec::new(),
            solver: report,
        };
        finish(plant, target, raw_k, cert)
    }

    /// Network-decentralized baseline with block-diagonal `W` and scalar γ.
    pub fn blanchini(&self, plant: &Plant, part: &BlockPartition) -> SynthResult<SynthesisCertificate> {
        let (n, m) = (plant.n(), plant.m());
        if part.n() != n || part.m() != m {
            return Err(Error::DimensionMismatch(format!(
                "partition describes {}x{} but B is {n}x{m}",
                part.n(),
                part.m()
            ))
            .into());
        }
        let w_mask = ZeroPatternMask::block_diagonal(part.state_dims())?;
        if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !w_mask.is_free(i, j) && plant.a()[(i, j)] != 0.0)
        {
            return Err(Error::InvalidStructure(format!(
                "A is not block-diagonal for the partition (entry ({i},{j}) is nonzero)"
            ))
            .into());
        }
        let target = basis_from_mask(&decentralized_mask(plant.b(), part)?)?;
        let w_basis = symmetric_pattern_basis(&w_mask)?;
        let bbt = plant.b() * plant.b().transpose();
        let gamma_mode = self.opts.gamma;
        if let GammaMode::Fixed(g) = gamma_mode {
            if !(g > 0.0) {
                return Err(Error::InvalidArgument(format!("fixed gamma must be positive, got {g}")).into());
            }
        }

        let ((w, gamma_var), coords, report, eps) = self.solve_with_retry(|eps| {
            let mut prog = ProgramBuilder::new();
            let w = prog.add_var(VarKind::Structured(w_basis.clone()))?;
            prog.constrain_posdef(AffineMatExpr::sym(&w.expr())?, 1.0)?;
            let aw = AffineMatExpr::he(&w.expr().left_mul(plant.a()))?;
            let (gamma_expr, gamma_var) = match gamma_mode {
                GammaMode::Fixed(g) => (LinExpr::constant(Mat::from_element(1, 1, g)), None),
                GammaMode::Free { upper } => {
                    let g = prog.add_var(VarKind::Scalar)?;
                    prog.constrain_posdef(AffineMatExpr::sym(&g.expr())?, eps)?;
                    let headroom = LinExpr::constant(Mat::from_element(1, 1, upper)) - g.expr();
                    prog.constrain_posdef(AffineMatExpr::sym(&headroom)?, eps)?;
                    (g.expr(), Some(g))
                }
            };
            let gamma_term = AffineMatExpr::sym(&gamma_expr.kron(&(&bbt * -2.0)))?;
            prog.constrain_negdef(aw + gamma_term, eps)?;
            Ok(Built { program: prog, vars: (w, gamma_var) })
        })?;

        let w_val = SymMat::new(w.value(&coords))?;
        let gamma = match (&gamma_var, gamma_mode) {
            (Some(g), _) => g.value(&coords)[(0, 0)],
            (None, GammaMode::Fixed(g)) => g,
            (None, GammaMode::Free { .. }) => unreachable!("free gamma always has a variable"),
        };
        let y_val = plant.b().transpose() * -gamma;
        let raw_k = right_divide(&y_val, w_val.as_mat()).ok_or_else(|| {
            SynthesisError::Input(Error::InvalidArgument("W is singular".into()))
        })?;
        let cert = SynthesisCertificate {
            method: Method::Blanchini,
            k_gain: raw_k.clone(),
            p: w_val,
            x: None,
            r_or_y: y_val,
            alpha: w.coords(&coords).to_vec(),
            lambda: None,
            lambda_cond: None,
            x_cond: None,
            gamma: Some(gamma),
            hurwitz_margin: f64::NAN,
            membership_residual: f64::NAN,
            epsilon: eps,
            warnings: Vec::new(),
            solver: report,
        };
        finish(plant, &target, raw_k, cert)
    }

    /// Dilated LMI in a free `X` for the fixed closed loop `A + BK` and
    /// fixed `P ≻ 0`.
    pub fn dilated_feasibility(&self, plant: &Plant, k_gain: &Mat, p: &SymMat) -> SynthResult<SolveReport> {
        let a_cl = plant.closed_loop(k_gain)?;
        let n = plant.n();
        if p.dim() != n {
            return Err(Error::DimensionMismatch(format!("P is {0}x{0}, expected {n}x{n}", p.dim())).into());
        }
        if p.min_eigenvalue() <= 0.0 {
            return Err(Error::NotPositiveDefinite("P".into()).into());
        }
        let mut prog = ProgramBuilder::new();
        let x = prog.add_var(VarKind::Free(n, n))?;
        let lmi = dilated_lmi_fixed_p(&a_cl, p.as_mat(), &x)?;
        prog.constrain_negdef(lmi, self.opts.epsilon)?;
        Ok(self.backend.solve(&prog.compile()?, &self.opts.solve))
    }
}

/// `He([[AX + BR, AX + BR + P], [−X, −X]])`, which equals
/// `[[0, P], [P, 0]] + He([[AX+BR, AX+BR], [−X, −X]])`.
pub fn dilated_lmi(a: &Mat, b: &Mat, p: &VarRef, x: &VarRef, r: Option<&VarRef>) -> Result<AffineMatExpr, Error> {
    let mut m = x.expr().left_mul(a);
    if let Some(r) = r {
        m = m + r.expr().left_mul(b);
    }
    let upper_right = m.clone() + p.expr();
    AffineMatExpr::he(&LinExpr::block(&[vec![m, upper_right], vec![-x.expr(), -x.expr()]])?)
}

fn dilated_lmi_fixed_p(a_cl: &Mat, p: &Mat, x: &VarRef) -> Result<AffineMatExpr, Error> {
    let m = x.expr().left_mul(a_cl);
    let upper_right = m.clone() + LinExpr::constant(p.clone());
    AffineMatExpr::he(&LinExpr::block(&[vec![m, upper_right], vec![-x.expr(), -x.expr()]])?)
}

/// Numeric value of the dilated LMI for given `P`, `X` and `M = AX + BR`.
pub fn dilated_lmi_value(m: &Mat, p: &Mat, x: &Mat) -> SymMat {
    let n = p.nrows();
    let mut z = Mat::zeros(2 * n, 2 * n);
    z.view_mut((0, 0), (n, n)).copy_from(m);
    z.view_mut((0, n), (n, n)).copy_from(&(m + p));
    z.view_mut((n, 0), (n, n)).copy_from(&(-x));
    z.view_mut((n, n), (n, n)).copy_from(&(-x));
    SymMat::new(matops::he(&z)).expect("square")
}

/// Basis of symmetric matrices supported on a symmetric zero pattern.
fn symmetric_pattern_basis(mask: &ZeroPatternMask) -> Result<Vec<Mat>, Error> {
    if !mask.is_symmetric() {
        return Err(Error::InvalidStructure("Lyapunov pattern must be symmetric".into()));
    }
    let n = mask.n();
    if let Some(i) = (0..n).find(|&i| !mask.is_free(i, i)) {
        return Err(Error::InvalidStructure(format!(
            "Lyapunov pattern forces diagonal entry {i} to zero"
        )));
    }
    let mut out = Vec::new();
    for j in 0..n {
        for i in j..n {
            if mask.is_free(i, j) {
                let mut e = Mat::zeros(n, n);
                e[(i, j)] = 1.0;
                e[(j, i)] = 1.0;
                out.push(e);
            }
        }
    }
    Ok(out)
}

/// `num · den⁻¹` via an LU solve of `denᵀ Kᵀ = numᵀ`.
fn right_divide(num: &Mat, den: &Mat) -> Option<Mat> {
    den.transpose()
        .lu()
        .solve(&num.transpose())
        .map(|kt| kt.transpose())
        .filter(|k| k.iter().all(|v| v.is_finite()))
}

/// Projects the gain onto the structure, then checks membership and stability.
fn finish(
    plant: &Plant,
    target: &StructureBasis,
    raw_k: Mat,
    mut cert: SynthesisCertificate,
) -> SynthResult<SynthesisCertificate> {
    let (coeffs, residual) = target.project(&raw_k).map_err(SynthesisError::Input)?;
    cert.membership_residual = residual;
    if residual > MEMBERSHIP_TOL * (1.0 + raw_k.norm()) {
        return Err(SynthesisError::MembershipViolation { residual, certificate: Box::new(cert) });
    }
    cert.k_gain = target.combine(coeffs.as_slice());
    let abscissa = matops::eig_max_real(&plant.closed_loop(&cert.k_gain)?).map_err(SynthesisError::Input)?;
    cert.hurwitz_margin = -abscissa;
    if abscissa > -HURWITZ_TOL {
        return Err(SynthesisError::VerificationFailed {
            reason: format!("closed loop is not Hurwitz (spectral abscissa {abscissa:.3e})"),
            certificate: Box::new(cert),
        });
    }
    Ok(cert)
}

/// [`Synthesizer::main`] with the default backend.
pub fn synthesize_main(
    plant: &Plant,
    basis: &StructureBasis,
    opts: &SynthesisOptions,
) -> SynthResult<SynthesisCertificate> {
    Synthesizer::new(ClarabelBackend, opts.clone()).main(plant, basis)
}

/// [`Synthesizer::prop1`] with the default backend.
pub fn synthesize_prop1(
    plant: &Plant,
    y_basis: &StructureBasis,
    p_structure: &ZeroPatternMask,
    target: &StructureBasis,
    opts: &SynthesisOptions,
) -> SynthResult<SynthesisCertificate> {
    Synthesizer::new(ClarabelBackend, opts.clone()).prop1(plant, y_basis, p_structure, target)
}

/// [`Synthesizer::blanchini`] with the default backend.
pub fn synthesize_blanchini(
    plant: &Plant,
    part: &BlockPartition,
    opts: &SynthesisOptions,
) -> SynthResult<SynthesisCertificate> {
    Synthesizer::new(ClarabelBackend, opts.clone()).blanchini(plant, part)
}

/// [`Synthesizer::dilated_feasibility`] with the default backend.
pub fn dilated_feasibility(
    plant: &Plant,
    k_gain: &Mat,
    p: &SymMat,
    opts: &SynthesisOptions,
) -> SynthResult<SolveReport> {
    Synthesizer::new(ClarabelBackend, opts.clone()).dilated_feasibility(plant, k_gain, p)
}
