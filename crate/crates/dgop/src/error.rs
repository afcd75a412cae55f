use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("d^2 != 0: {0}")]
    NotAComplex(String),
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),
    #[error("no stabilization within the truncation: {0}")]
    NonStabilization(String),
    #[error("boundary is not a cycle: {0}")]
    NotACycle(String),
    #[error("boundary condition violated: {0}")]
    BoundaryViolation(String),
    #[error("not a quasi-isomorphism: {0}")]
    NotQuasiIso(String),
    #[error("no section within the degree window: {0}")]
    NoSection(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("simplicial identity violated: {0}")]
    SimplicialIdentity(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::DivisionByZero => "division_by_zero",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NotAComplex(_) => "not_a_complex",
            Error::TruncationOverflow(_) => "truncation_overflow",
            Error::NonStabilization(_) => "non_stabilization",
            Error::NotACycle(_) => "not_a_cycle",
            Error::BoundaryViolation(_) => "boundary_violation",
            Error::NotQuasiIso(_) => "not_a_quasi_isomorphism",
            Error::NoSection(_) => "no_section",
            Error::NotACocycle(_) => "not_a_cocycle",
            Error::SimplicialIdentity(_) => "simplicial_identity",
            Error::Parse { .. } => "parse",
        }
    }
}
