use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigenvalue iteration did not converge")]
    NonConvergence,

    #[error("matrices do not commute: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotCommuting { residual: f64, tol: f64 },

    #[error("Koszul operator size {size} exceeds cap {cap}")]
    KoszulSizeCap { size: usize, cap: usize },

    #[error("numerical rank is ambiguous at this tolerance (singular-value gap too small)")]
    RankIndeterminate,

    #[error("gcd degree is ambiguous at tolerance {tol:.3e}")]
    GcdIndeterminate { tol: f64 },

    #[error("polynomial degree bound {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("not an orthogonal projection: residual {0:.3e}")]
    NotProjection(f64),

    #[error("not unitary: residual {0:.3e}")]
    NotUnitary(f64),

    #[error("not unimodular: |{0:.6}| != 1")]
    NotUnimodular(f64),

    #[error("BCL product law violated: max grid residual {0:.3e}")]
    ProductLawViolation(f64),

    #[error("purity indicators disagree (borderline input): nu = {nu:.8}, power norm = {power_norm:.3e}")]
    PurityInconclusive { nu: f64, power_norm: f64 },

    #[error("denominator too close to zero at a grid point: |q| = {0:.3e}")]
    DenominatorVanishes(f64),

    #[error("symbol is not contractive on the grid: max norm {0:.6}")]
    NotContractive(f64),

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("{0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
