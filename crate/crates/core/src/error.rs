use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("sequence is not invertible under binomial convolution (leading entry is zero)")]
    NotInvertibleSeq,

    #[error("power series has zero constant term and cannot be inverted")]
    NonUnitSeries,

    #[error("power series is not compositionally invertible: {0}")]
    NotInvertibleSeries(&'static str),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("polynomial degree {degree} exceeds level {level}")]
    DegreeExceedsLevel { degree: usize, level: usize },

    #[error("polynomial must vanish at 0")]
    ConstantTermNonzero,

    #[error("wrong degree: expected {expected}, found {found:?}")]
    WrongDegree { expected: usize, found: Option<usize> },

    #[error("polynomial of degree {found:?} is not invertible for the level-{level} additive convolution")]
    NotInvertiblePoly { level: usize, found: Option<usize> },

    #[error("pairing polynomial is not constant")]
    NonConstantPairing,

    #[error("expected {expected} roots, got {found}")]
    RootCountMismatch { expected: usize, found: usize },

    #[error("supplied roots are not the simple roots of S_n: {0}")]
    BadRoots(String),

    #[error("polynomials are not apolar (pairing = {0})")]
    NotApolar(String),

    #[error("root finder did not converge in {max_iter} iterations (max residual {residual:e})")]
    NoConvergence { max_iter: usize, residual: f64 },

    #[error("invalid delta operator: {0}")]
    InvalidDelta(String),

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("identity check failed: {0}")]
    IdentityViolation(String),
}

impl Error {
    /// Short machine-readable code, used for JSON error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::LevelMismatch { .. } => "level_mismatch",
            Error::NotInvertibleSeq => "not_invertible_seq",
            Error::NonUnitSeries => "non_unit_series",
            Error::NotInvertibleSeries(_) => "not_invertible_series",
            Error::SingularMatrix => "singular_matrix",
            Error::DegreeExceedsLevel { .. } => "degree_exceeds_level",
            Error::ConstantTermNonzero => "constant_term_nonzero",
            Error::WrongDegree { .. } => "wrong_degree",
            Error::NotInvertiblePoly { .. } => "not_invertible_poly",
            Error::NonConstantPairing => "non_constant_pairing",
            Error::RootCountMismatch { .. } => "root_count_mismatch",
            Error::BadRoots(_) => "bad_roots",
            Error::NotApolar(_) => "not_apolar",
            Error::NoConvergence { .. } => "no_convergence",
            Error::InvalidDelta(_) => "invalid_delta",
            Error::UnknownOperator(_) => "unknown_operator",
            Error::Invalid(_) => "invalid_input",
            Error::IdentityViolation(_) => "identity_violation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
