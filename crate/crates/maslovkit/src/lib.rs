//! Index theory for the standard linear symplectic space: Robbin–Salamon style
//! Maslov and Conley–Zehnder indices computed from crossing forms, phase lifts
//! to N-fold Maslov coverings with absolute Z/N-valued indices, a symbolic
//! graded Dehn-twist calculus, and monodromy shift numbers.
//!
//! Conventions (shared by every module): the symplectic form on R^{2n} is
//! ω₀(u,v) = ⟨J₀u, v⟩ with J₀(x,y) = (−y,x) in (u,v)-block coordinates, and
//! R^{2n} ≅ C^n via z = u + iv.

pub mod covering;
pub mod gradedcalc;
pub mod index;
pub mod monodromy;
mod par;
pub mod symcore;
pub mod tol;

use thiserror::Error;

/// Execution mode for grid-scan heavy operations. `Auto` uses the data-parallel
/// path when the `parallel` feature is enabled; `Sequential` forces the serial
/// code path (same results, deterministic either way).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Auto,
    Sequential,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix columns are not a Lagrangian frame: {0}")]
    NotLagrangian(String),
    #[error("matrix is not symplectic (||MᵀJ₀M − J₀|| = {0:.3e})")]
    NotSymplectic(f64),
    #[error("rank deficient input (smallest singular value {0:.3e})")]
    RankDeficient(f64),
    #[error("path sampling too coarse for unambiguous phase tracking: {0}")]
    PathTooCoarse(String),
    #[error("crossing form singular on the intersection after perturbation retries (t = {0})")]
    DegenerateCrossing(f64),
    #[error("underlying subspaces are not transverse")]
    NotTransverse,
    #[error("absolute index n/2 − μ is not an integer (convention bug): {0}")]
    NonIntegralIndex(String),
    #[error("theta_start inconsistent with det² of the initial frame")]
    InconsistentStart,
    #[error("det(1 − Φ) ≈ 0: degenerate fixed point")]
    DegenerateFixedPoint,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(String, String),
    #[error("twist-word rewriting is stuck: {0}")]
    StuckRewrite(String),
    #[error("malformed configuration: {0}")]
    MalformedConfig(String),
    #[error("malformed profile: {0}")]
    MalformedProfile(String),
    #[error("declared bounding triple violates the rotation-number sum rule")]
    NoBoundingTriple,
    #[error("monomial {0:?} violates quasi-homogeneity")]
    NotQuasiHomogeneous(Vec<u64>),
    #[error("malformed data: {0}")]
    MalformedData(String),
    #[error("path is not a loop")]
    NotALoop,
    #[error("winding number {0} is not within 1e-3 of an integer")]
    NonIntegralWinding(f64),
    #[error("cross-check mismatch: crossing-form {0} vs eigenvalue-winding {1}")]
    CrossCheckMismatch(String, String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
}

impl Error {
    /// Stable machine-readable error name (used by the CLI JSON contract).
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotLagrangian(_) => "NotLagrangian",
            Error::NotSymplectic(_) => "NotSymplectic",
            Error::RankDeficient(_) => "RankDeficient",
            Error::PathTooCoarse(_) => "PathTooCoarse",
            Error::DegenerateCrossing(_) => "DegenerateCrossing",
            Error::NotTransverse => "NotTransverse",
            Error::NonIntegralIndex(_) => "NonIntegralIndex",
            Error::InconsistentStart => "InconsistentStart",
            Error::DegenerateFixedPoint => "DegenerateFixedPoint",
            Error::ModulusMismatch(_, _) => "ModulusMismatch",
            Error::StuckRewrite(_) => "StuckRewrite",
            Error::MalformedConfig(_) => "MalformedConfig",
            Error::MalformedProfile(_) => "MalformedProfile",
            Error::NoBoundingTriple => "NoBoundingTriple",
            Error::NotQuasiHomogeneous(_) => "NotQuasiHomogeneous",
            Error::MalformedData(_) => "MalformedData",
            Error::NotALoop => "NotALoop",
            Error::NonIntegralWinding(_) => "NonIntegralWinding",
            Error::CrossCheckMismatch(_, _) => "CrossCheckMismatch",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
