use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields or rings")]
    SpecMismatch,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: u64 },
    #[error("tuple is not p-independent")]
    NotPIndependent,
    #[error("element is not in the p-span of the tuple")]
    NotInSpan,
    #[error("separability precondition failed: {0}")]
    NotSeparableBase(String),
    #[error("jacobian is not a unit at the expansion point")]
    NonUnitJacobian,
    #[error("newton iteration stalled at residual valuation {valuation}")]
    NoConvergence { valuation: usize },
    #[error("denominator vanishes at every candidate center")]
    DenominatorVanishes,
    #[error("parse error at {position}: {message} (expected one of: {})", expected.join(", "))]
    Parse {
        position: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::SpecMismatch => "spec_mismatch",
            Error::UnsupportedField(_) => "unsupported_field",
            Error::ExponentOverflow => "exponent_overflow",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::NotPIndependent => "not_p_independent",
            Error::NotInSpan => "not_in_span",
            Error::NotSeparableBase(_) => "not_separable_base",
            Error::NonUnitJacobian => "non_unit_jacobian",
            Error::NoConvergence { .. } => "no_convergence",
            Error::DenominatorVanishes => "denominator_vanishes",
            Error::Parse { .. } => "parse_error",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }

    /// Input or configuration problems, as opposed to domain outcomes.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::UnknownVariable(_) | Error::UnsupportedField(_) | Error::InvalidArgument(_)
        )
    }
}
