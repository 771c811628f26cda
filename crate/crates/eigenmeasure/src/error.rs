use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("radicand mismatch: sqrt({0}) and sqrt({1}) do not live in a common quadratic field")]
    RadicandMismatch(u64, u64),
    #[error("modulus must be positive")]
    NonPositiveModulus,
    #[error("ambient mismatch: {0} vs {1} (rebase explicitly)")]
    AmbientMismatch(String, String),
    #[error("ambient alpha^2 = {actual} does not equal {p}/{q}")]
    BadRebase { p: u64, q: u64, actual: String },
    #[error("n must be positive")]
    ZeroAmbient,
    #[error("the zero measure has no eigenvalue")]
    ZeroMeasure,
    #[error("vector is not a DFT eigenvector (residual {residual:.3e} > {tol:.3e})")]
    NotEigenvector { residual: f64, tol: f64 },
    #[error("Hermite degree {0} exceeds the stability cap of {1}")]
    DegreeCap(usize, usize),
    #[error("window must be positive")]
    NonPositiveWindow,
    #[error("lattice angle has no exact rational tangent")]
    NonRationalLattice,
    #[error("{0} is not a transform eigenfunction")]
    NotEigenfunction(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
