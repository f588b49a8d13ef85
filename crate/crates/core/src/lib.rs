//! Structured static state-feedback synthesis.
//!
//! Given a plant `ẋ = Ax + Bu` and a linear subspace 𝒮 of admissible gains,
//! find `K ∈ 𝒮` with `A + BK` Hurwitz. The main route computes the structure
//! set of 𝒮 (square matrices whose right action keeps 𝒮 invariant), searches
//! the design matrix `X` in it, and solves a dilated Lyapunov LMI so that the
//! Lyapunov matrix itself stays unstructured. Two block-diagonal-Lyapunov
//! baselines are included for comparison, and every result is re-verified
//! without the solver.

// Links the system OpenBLAS used by the PSD cones.
use openblas_src as _;

pub mod error;
pub mod lmi;
pub mod matops;
pub mod random;
pub mod sdp;
pub mod structure;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use matops::{Mat, SymMat, Vector};
pub use sdp::{ClarabelBackend, SdpBackend, SolveOptions, SolveReport, SolveStatus};
pub use structure::{
    basis_from_mask, compute_structure_set, coordinated_basis, decentralized_mask, BlockPartition,
    StructureBasis, StructureSetDescription, ZeroPatternMask,
};
pub use synthesis::{
    dilated_feasibility, synthesize_blanchini, synthesize_main, synthesize_prop1, GammaMode,
    Plant, SynthesisCertificate, SynthesisError, SynthesisOptions,
};
pub use verify::{check_inversion_closure, verify_gain, verify_lyapunov, ClosureReport, GainReport, Stability};
