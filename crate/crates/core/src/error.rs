//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by the CLI to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input: malformed labels, grids, cutoffs.
    InvalidInput,
    /// The physics is undefined for these parameters.
    PhysicalDomain,
    /// An iterative or series method failed to meet its own bound.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("creation operator maps total quanta {total} past cutoff {cutoff}")]
    CutoffOverflow { total: u32, cutoff: u32 },

    #[error("block dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid Dicke label: 2j = {two_j}, 2m = {two_m}")]
    InvalidDickeLabel { two_j: u32, two_m: i64 },

    #[error("invalid angles: theta = {theta}, phi = {phi}")]
    InvalidAngles { theta: f64, phi: f64 },

    #[error("tau must be finite, got ({re}, {im})")]
    NonFiniteTau { re: f64, im: f64 },

    #[error("theta = {theta} is at the south pole where tan(theta/2) diverges")]
    PoleAtSouthPole { theta: f64 },

    #[error("2j = {two_j} exceeds the supported maximum {max}")]
    CombinatoricsOverflow { two_j: u32, max: u32 },

    #[error("scaled Taylor series did not reach its remainder bound ({remainder:e} after {terms} terms)")]
    ExponentialNoConvergence { terms: usize, remainder: f64 },

    #[error("invalid Raman parameters: omega1 = {omega1}, omega2 = {omega2}, lambda = {lambda}")]
    InvalidParams { omega1: f64, omega2: f64, lambda: f64 },

    #[error("coupling lambda is zero; the Hamiltonian is already diagonal")]
    ZeroCoupling,

    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("grid too coarse for 2j = {two_j}: {theta_nodes} theta nodes (need {min_theta_nodes}), {phi_count} phi points (need {min_phi_count})")]
    GridTooCoarse {
        two_j: u32,
        theta_nodes: usize,
        min_theta_nodes: usize,
        phi_count: usize,
        min_phi_count: usize,
    },

    #[error("n_max = {n_max} exceeds max 2j = {max_two_j}")]
    CutoffAboveSum { n_max: u32, max_two_j: u32 },

    #[error("branch frequency {freq} is not positive; the partition sum diverges")]
    UnstableBranch { freq: f64 },

    #[error("inverse temperature must be positive and finite, got {beta}")]
    BadBeta { beta: f64 },

    #[error("unstable system: omega1*omega2 - lambda^2 = {gap} <= 0")]
    UnstableSystem { gap: f64 },

    #[error("spectral tail bound {bound:e} not met within 2j <= {cap}")]
    TailTooFat { cap: u32, bound: f64 },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CutoffOverflow { .. } => "CutoffOverflow",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidDickeLabel { .. } => "InvalidDickeLabel",
            Error::InvalidAngles { .. } => "InvalidAngles",
            Error::NonFiniteTau { .. } => "NonFiniteTau",
            Error::PoleAtSouthPole { .. } => "PoleAtSouthPole",
            Error::CombinatoricsOverflow { .. } => "CombinatoricsOverflow",
            Error::ExponentialNoConvergence { .. } => "ExponentialNoConvergence",
            Error::InvalidParams { .. } => "InvalidParams",
            Error::ZeroCoupling => "ZeroCoupling",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::CutoffAboveSum { .. } => "CutoffAboveSum",
            Error::UnstableBranch { .. } => "UnstableBranch",
            Error::BadBeta { .. } => "BadBeta",
            Error::UnstableSystem { .. } => "UnstableSystem",
            Error::TailTooFat { .. } => "TailTooFat",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::PoleAtSouthPole { .. }
            | Error::ZeroCoupling
            | Error::UnstableBranch { .. }
            | Error::UnstableSystem { .. } => ErrorClass::PhysicalDomain,
            Error::ExponentialNoConvergence { .. }
            | Error::NoConvergence { .. }
            | Error::TailTooFat { .. } => ErrorClass::Numerical,
            _ => ErrorClass::InvalidInput,
        }
    }
}
