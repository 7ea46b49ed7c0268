//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The laminar parameter lies below `s0 = sqrt(2 m omega)`.
    #[error("parameter s = {s} is below the critical value s0 = {s0}")]
    BelowCritical { s: f64, s0: f64 },

    #[error("Bernoulli value q = {q} lies outside the window ({qc}, {q0})")]
    OutOfWindow { q: f64, qc: f64, q0: f64 },

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// `delta_root` only covers `epsilon < sqrt(2)/2`; larger values take the direct branch.
    #[error("epsilon = {epsilon} is not below sqrt(2)/2; use the large-epsilon branch")]
    LargeEpsilon { epsilon: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("height function is not increasing in p at node (x index {ix}, p index {ip})")]
    Monotonicity { ix: usize, ip: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (interior {interior:e}, surface {surface:e})")]
    NoConvergence {
        iterations: usize,
        interior: f64,
        surface: f64,
    },

    #[error("no laminar parameter bifurcates at wavelength {wavelength}")]
    BifurcationNotFound { wavelength: f64 },

    #[error("branch terminated at amplitude {reached} before reaching {target}: {reason}")]
    BranchTerminated {
        reached: f64,
        target: f64,
        reason: String,
    },

    #[error(
        "wave is not converged (interior residual {interior:e}, surface residual {surface:e})"
    )]
    Unconverged { interior: f64, surface: f64 },

    #[error("decay fit needs at least {needed} rows, got {got}")]
    InsufficientRows { needed: usize, got: usize },

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
