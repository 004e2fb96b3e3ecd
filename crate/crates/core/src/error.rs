use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The (phi, jz) chart is singular at the poles of the pseudo-spin sphere.
    #[error("flow is singular at the pole jz = {jz}")]
    PoleSingularity { jz: f64 },

    #[error("square-root argument {value:e} is negative beyond rounding")]
    SqrtDomain { value: f64 },

    #[error("energy epsilon = {epsilon} lies below the classical minimum {epsilon0}")]
    ForbiddenEnergy { epsilon: f64, epsilon0: f64 },

    #[error("eigensolver did not converge ({context})")]
    NoConvergence { context: String },

    #[error(
        "spectrum incomplete: lowest level of block lambda_max = {lambda_max} is {min_energy}, \
         not above the reference energy {reference_energy}; increase lambda_max"
    )]
    IncompleteSpectrum {
        lambda_max: u32,
        min_energy: f64,
        reference_energy: f64,
    },

    #[error("query epsilon = {epsilon} is beyond the completeness certificate {certificate}")]
    BeyondCertificate { epsilon: f64, certificate: f64 },

    #[error("matrix dimension {dim} exceeds the configured limit {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("displaced-number overlap overflowed for N = {row}, {col}, beta = {beta}")]
    OverlapOverflow { row: usize, col: usize, beta: f64 },

    #[error(
        "truncation budget exhausted at N_max = {n_max}: {unconverged} states below the \
         reference energy still have delta_p >= {tolerance:e} (first at index {first_index})"
    )]
    ConvergenceBudget {
        n_max: usize,
        tolerance: f64,
        unconverged: usize,
        first_index: usize,
    },

    #[error("eigenvector {index} mixes symmetry sectors (weight {weight:e} outside its sector)")]
    MixedSector { index: usize, weight: f64 },

    #[error("spectrum length mismatch: need {needed} levels, have {available}")]
    LengthMismatch { needed: usize, available: usize },
}
