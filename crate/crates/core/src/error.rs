use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty coefficient list")]
    EmptyCoefficients,
    #[error("singular matrix ({detail})")]
    SingularMatrix { detail: String },
    #[error("root iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("operation is not supported on the exact backend")]
    ExactBackendUnsupported,
    #[error("matrix dimension {0} exceeds the eigenvalue solver bound 32")]
    DimensionTooLarge(usize),
    #[error("[P,Q] - I is not rank one (relative residual {residual:.3e})")]
    NotRankOne { residual: f64 },
    #[error("spectral points are not pairwise distinct")]
    DegenerateSpectrum,
    #[error("Q has a repeated eigenvalue (particle collision)")]
    NonSemisimpleQ,
    #[error("z lies at an eigenvalue of Q")]
    PoleInZ,
    #[error("x lies at a zero of tau (eigenvalue of Q-hat transpose)")]
    PoleInX,
    #[error("Q is singular")]
    SingularQ,
    #[error("rho(r QP) is singular; the Bessel involution is undefined here")]
    SingularRho,
    #[error("condition system is singular at this x")]
    SingularSystem,
    #[error("unsupported particle count {0}")]
    UnsupportedParticleCount(usize),
    #[error("rho index j={j} out of range for order r={r}")]
    RhoIndexOutOfRange { j: usize, r: usize },
    #[error("invalid rho polynomial: {0}")]
    InvalidRho(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
