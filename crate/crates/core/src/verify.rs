//! Solver-independent checks of gains and certificates.
//!
//! Nothing here calls the SDP backend; stability is judged from the
//! closed-loop spectrum, membership from a least-squares fit, Lyapunov
//! inequalities from symmetric eigenvalues.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matops::{self, Mat, SymMat};
use crate::structure::{StructureBasis, StructureSetDescription};
use crate::synthesis::{dilated_lmi_value, Plant, MEMBERSHIP_TOL};

/// Absolute tolerance on the spectral abscissa.
pub const STABILITY_TOL: f64 = 1e-9;
/// Absolute tolerance for the Lyapunov eigenvalue checks.
pub const LYAPUNOV_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Hurwitz,
    /// Spectral abscissa within the tolerance of zero.
    Marginal,
    Unstable,
}

impl Stability {
    pub fn label(self) -> &'static str {
        match self {
            Stability::Hurwitz => "hurwitz",
            Stability::Marginal => "marginal",
            Stability::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainReport {
    pub hurwitz: bool,
    pub stability: Stability,
    /// `−max Re λ(A + BK)`.
    pub margin: f64,
    pub membership_residual: f64,
    pub membership_ok: bool,
    /// Real parts of the closed-loop eigenvalues, descending.
    pub spectral_abscissa_list: Vec<f64>,
    pub eigenvalues: Vec<Complex<f64>>,
}

impl GainReport {
    pub fn passed(&self) -> bool {
        self.hurwitz && self.membership_ok
    }
}

pub fn verify_gain(plant: &Plant, k_gain: &Mat, basis: &StructureBasis) -> Result<GainReport> {
    let a_cl = plant.closed_loop(k_gain)?;
    let (_, membership_residual) = basis.project(k_gain)?;
    let mut eigenvalues = matops::eigenvalues(&a_cl)?;
    eigenvalues.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    let spectral_abscissa_list: Vec<f64> = eigenvalues.iter().map(|z| z.re).collect();
    let margin = -spectral_abscissa_list[0];
    let stability = if margin > STABILITY_TOL {
        Stability::Hurwitz
    } else if margin >= -STABILITY_TOL {
        Stability::Marginal
    } else {
        Stability::Unstable
    };
    Ok(GainReport {
        hurwitz: stability == Stability::Hurwitz,
        stability,
        margin,
        membership_residual,
        membership_ok: membership_residual <= MEMBERSHIP_TOL * (1.0 + k_gain.norm()),
        spectral_abscissa_list,
        eigenvalues,
    })
}

/// `P ≻ 0` and `(A+BK)P + P(A+BK)ᵀ ≺ 0`, both by eigenvalues.
pub fn verify_lyapunov(plant: &Plant, k_gain: &Mat, p: &SymMat) -> bool {
    let Ok(a_cl) = plant.closed_loop(k_gain) else {
        return false;
    };
    if p.dim() != plant.n() || p.min_eigenvalue() <= LYAPUNOV_TOL {
        return false;
    }
    let lyap = SymMat::new(matops::he(&(&a_cl * p.as_mat()))).expect("square");
    lyap.max_eigenvalue() < -LYAPUNOV_TOL
}

/// Largest eigenvalue of `[[0,P],[P,0]] + He([[AX+BR, AX+BR],[−X,−X]])`.
pub fn dilated_max_eigenvalue(plant: &Plant, p: &SymMat, x: &Mat, r: &Mat) -> f64 {
    let m = plant.a() * x + plant.b() * r;
    dilated_lmi_value(&m, p.as_mat(), x).max_eigenvalue()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub trials: usize,
    /// Samples that were numerically nonsingular (with nonsingular Λ).
    pub tested: usize,
    pub passed: usize,
    pub failed: usize,
    /// Worst `dist(X⁻¹, hull) / ‖X⁻¹‖_F` over tested samples.
    pub worst_relative_residual: f64,
    /// No sample was usable; the pass is vacuous.
    pub vacuous: bool,
}

impl ClosureReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Samples hull elements and checks that their inverses stay in the hull.
pub fn check_inversion_closure(
    desc: &StructureSetDescription,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<ClosureReport> {
    const COND_LIMIT: f64 = 1e6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ClosureReport {
        trials,
        tested: 0,
        passed: 0,
        failed: 0,
        worst_relative_residual: 0.0,
        vacuous: false,
    };
    for _ in 0..trials {
        let coords: Vec<f64> = (0..desc.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = desc.element(&coords);
        if matops::condition_number(&x)? > COND_LIMIT
            || matops::condition_number(&desc.lambda_of_coords(&coords))? > COND_LIMIT
        {
            continue;
        }
        let Some(inv) = matops::inverse(&x) else { continue };
        report.tested += 1;
        let rel = desc.projection_residual(&inv) / inv.norm();
        report.worst_relative_residual = report.worst_relative_residual.max(rel);
        if rel <= tol {
            report.passed += 1;
        } else {
            report.failed += 1;
        }
    }
    if report.tested == 0 {
        log::warn!("inversion closure: no nonsingular samples in {trials} trials");
        report.vacuous = true;
    }
    Ok(report)
}
