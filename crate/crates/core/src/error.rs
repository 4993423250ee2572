use alloc::string::String;

use thiserror::Error;

/// Errors raised by the numerical kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("log-gamma pole at nonpositive integer {0}")]
    GammaPole(f64),
    #[error("Jacobi recurrence denominator {0:e} is too close to zero")]
    NearPoleParameters(f64),
    #[error("division by a jet with zero leading coefficient")]
    DivisionByZero,
    #[error("real power of a jet whose leading coefficient is not a positive real")]
    NonPositiveBase,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("trigonometric potential evaluated at domain endpoint x = {0}")]
    EndpointEvaluation(f64),
    #[error("excitation {n} is outside the admissible range 0..={max}")]
    ExcitationOutOfRange { n: usize, max: usize },
    #[error("the intertwiner annihilates the ground state; there is no partner state")]
    AnnihilatedState,
    #[error("shifted parameters (lambda = {lambda}, s = {s}) have no normalizable ground state")]
    InvalidShiftedParams { lambda: f64, s: f64 },
    #[error("seed polynomial changes sign near z = {0}")]
    SeedHasNode(f64),
    #[error("no ladder operator acts on the added ground level")]
    AddedLevelLadder,
    #[error("jet order {required} exceeds the evaluator limit {available}")]
    InsufficientJetOrder { required: usize, available: usize },
    #[error("coherent series not truncated within {0} terms")]
    TruncationNotReached(usize),
    #[error("quadrature grid does not cover the state (edge amplitude ratio {0:e})")]
    GridCoverage(f64),
    #[error("unbounded motion: x = {x} left the well [{lo}, {hi}]")]
    UnboundedMotion { x: f64, lo: f64, hi: f64 },
    #[error("no bounded well at energy {0}")]
    NoBoundedWell(f64),
    #[error("mismatched input: {0}")]
    Mismatch(&'static str),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
