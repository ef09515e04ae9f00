//! Best approximation by one-dimensional subspaces of Lorentz sequence
//! spaces d(w,1), plus a small laboratory for metric projections in
//! discretized function spaces.
//!
//! The crate has two arithmetic lanes. Finitely supported rational inputs
//! are handled exactly (`num_rational::BigRational`), which is what makes
//! flat minimizer intervals detectable as genuine ties rather than
//! float coincidences. Inputs with infinite support carry an analytic tail
//! rule; every quantity computed from them is returned as an [`Enclosure`]
//! (value plus proven absolute error bound).
//!
//! Overview of the modules:
//!
//! * [`enclosure`]: certified scalar arithmetic and compensated summation.
//! * [`weight`]: strictly decreasing, non-summable weight sequences.
//! * [`seq`]: sequences as exact heads plus analytic tails, with a JSON
//!   descriptor format.
//! * [`rearrange`]: decreasing rearrangements.
//! * [`norms`]: the d(w,1) norm, its Marcinkiewicz dual norm, and tail
//!   variation sums.
//! * [`projection`]: metric projection onto span{y}: an exact
//!   breakpoint solver, a certified solver for infinite support, dual
//!   optimality certificates, and strong unicity estimates.
//! * [`selection`]: non-Chebyshev certificates, continuous-selection
//!   verdicts, and separation witness packs, with four built-in presets.
//! * [`fspace`]: discretized F-norms on measured grids, maximal functions,
//!   metric projection sets onto constraint classes, and continuity
//!   experiments for set-valued projections.
//! * [`fuzz`]: seeded randomized invariant suites shared by the test suite
//!   and the CLI.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod enclosure;
pub mod fspace;
pub mod fuzz;
pub mod norms;
pub mod projection;
pub mod rearrange;
pub mod selection;
pub mod seq;
pub mod weight;

pub use enclosure::Enclosure;
pub use seq::Seq;
pub use weight::Weight;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid sequence: {0}")]
    InvalidSeq(String),
    #[error("unrearrangeable tail: {0}")]
    UnrearrangeableTail(String),
    #[error("tolerance unreachable: {0}")]
    ToleranceUnreachable(String),
    #[error("norm diverges: {0}")]
    DivergentNorm(String),
    #[error("exact arithmetic unavailable: {0}")]
    ExactUnavailable(String),
    #[error("degenerate subspace: {0}")]
    DegenerateSubspace(String),
    #[error("infinite variation: {0}")]
    InfiniteVariation(String),
    #[error("not strongly unique: {0}")]
    NotStronglyUnique(String),
    #[error("support too large: {0}")]
    SupportTooLarge(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid norm spec: {0}")]
    InvalidNormSpec(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
