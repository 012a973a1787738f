use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {0} is below the minimum of 2")]
    DimensionTooSmall(usize),
    #[error("generator is not symmetric: max |m - m^T| = {0:e}")]
    NotSymmetric(f64),
    #[error("time step must be finite and non-negative, got {0}")]
    NegativeTimeStep(f64),
    #[error("eigenvalue {index} ({value}) is not strictly positive")]
    NonPositiveSpectrum { index: usize, value: f64 },
    #[error("no feasible weight: lower bound {lower} exceeds upper bound {upper}")]
    InfeasibleWindow { lower: f64, upper: f64 },
    #[error(
        "weight {gamma} is outside the feasible window: negative radicand {radicand:e} \
         at eigenvalue {index} (|delta| = {delta})"
    )]
    NegativeRadicand {
        index: usize,
        delta: f64,
        gamma: f64,
        radicand: f64,
    },
    #[error("weight must be finite and non-negative, got {0}")]
    InvalidWeight(f64),
    #[error("spectral norm {norm} exceeds 1 + gamma = {bound}")]
    NormExceedsBound { norm: f64, bound: f64 },
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
    #[error("operator is not diagonalizable in a well-conditioned basis (cond = {0:e})")]
    IllConditioned(f64),
    #[error("substep count must be positive")]
    ZeroSubsteps,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("lattice became unstable at step {step}: |f| = {value:e}")]
    Unstable { step: usize, value: f64 },
    #[error("spin operator must be Hermitian with squared identity (residual {0:e})")]
    NotInvolution(f64),
    #[error("Fock truncation leaks {leaked:e} of the norm (limit {limit:e}); cutoff {required} or more is needed")]
    CutoffLeakage {
        leaked: f64,
        limit: f64,
        required: usize,
    },
    #[error("grid [{min}, {max}] exceeds the Hermite validity range +/-{limit}")]
    GridOutOfRange { min: f64, max: f64, limit: f64 },
    #[error("operator dimension {op} does not act on a state with cutoff {cutoff}")]
    DimensionMismatch { op: usize, cutoff: usize },
    #[error("herald success probability {0:e} is degenerate")]
    DegenerateHerald(f64),
    #[error("collision substep dt = {dt} has no feasible weight; dt <= {max_dt:.6} is feasible")]
    InfeasibleStep { dt: f64, max_dt: f64 },
    #[error("decomposition is not unitary (residual {0:e}); it cannot drive a circuit")]
    NotUnitary(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
