use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::Admissibility;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation point {point} is within {distance:e} of pole {pole}")]
    PoleProximity {
        point: Complex64,
        pole: Complex64,
        distance: f64,
    },

    #[error("point {point} is not on the contour (deviation {deviation:e})")]
    OffContour { point: Complex64, deviation: f64 },

    #[error("invalid pole configuration: {0}")]
    InvalidConfig(String),

    #[error("joukowski preimage of {pole} is ambiguous: |v| = {modulus} is too close to 1")]
    BranchAmbiguity { pole: Complex64, modulus: f64 },

    #[error("node {index} has residual {residual:e} above the 1e-11 limit")]
    NodeResidual { index: usize, residual: f64 },

    #[error("phi = {phi} is a multiple of 2π; the node equation on the real line then has a node at infinity")]
    PhiAtInfinityNode { phi: f64 },

    #[error("function is not admissible for this rule: {0}")]
    NotAdmissible(Admissibility),

    #[error("oracle did not converge after {evaluations} evaluations (error estimate {error_estimate:e})")]
    NonConvergence {
        evaluations: usize,
        error_estimate: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
