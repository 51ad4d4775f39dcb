use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Each variant maps to a stable machine-readable code via [`Error::code`],
/// which the command-line front end reports verbatim.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported algebra {0:?}")]
    UnsupportedAlgebra(String),
    #[error("Weyl group order {order} exceeds the cap {cap}")]
    WeylCapExceeded { order: u128, cap: u128 },
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("Weyl denominator vanishes at the evaluation point")]
    DenominatorZero,
    #[error("invalid level {0}; the level must be a positive integer")]
    InvalidLevel(i64),
    #[error("modular identities fail for both exponent signs (S^2 dev {s2:e}, (ST)^3 dev {st3:e})")]
    ModularIdentityFailure { s2: f64, st3: f64 },
    #[error("weight {0:?} is not in the level-k alcove")]
    NotInAlcove(Vec<i64>),
    #[error("weight {0:?} shifted by rho lies on an affine wall")]
    OnWall(Vec<i64>),
    #[error("fusion value {value} is not within tolerance of an integer")]
    NonIntegerFusion { value: f64 },
    #[error("quantum Racah sum returned the negative value {0}")]
    NegativeFusion(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("the forest model needs genus 0, got genus {0}")]
    ForestGenusMismatch(u32),
    #[error("Euler characteristics sum to {got}, expected {expected}")]
    EulerMismatch { got: i64, expected: i64 },
    #[error("inconsistent side data: {0}")]
    SideInconsistent(String),
    #[error("color {0:?} is not in the level-k alcove")]
    ColorNotInAlcove(Vec<i64>),
    #[error("alpha0 {0:?} is not in rho + alcove")]
    BadAlpha0(Vec<i64>),
    #[error("alpha {alpha:?} is not a weight of loop {loop_index}")]
    AlphaNotInSupport { loop_index: usize, alpha: Vec<i64> },
    #[error("face field is not regular")]
    InvalidField,
    #[error("vertical loops must wind once, got winding {0}")]
    VerticalWinding(i64),
}

impl Error {
    /// Stable identifier used in machine-readable error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedAlgebra(_) => "UnsupportedAlgebra",
            Error::WeylCapExceeded { .. } => "WeylCapExceeded",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotDominant(_) => "NotDominant",
            Error::DenominatorZero => "DenominatorZero",
            Error::InvalidLevel(_) => "InvalidLevel",
            Error::ModularIdentityFailure { .. } => "ModularIdentityFailure",
            Error::NotInAlcove(_) => "NotInAlcove",
            Error::OnWall(_) => "OnWall",
            Error::NonIntegerFusion { .. } => "NonIntegerFusion",
            Error::NegativeFusion(_) => "NegativeFusion",
            Error::Parse(_) => "ParseError",
            Error::DuplicateId(_) => "DuplicateId",
            Error::ForestGenusMismatch(_) => "ForestGenusMismatch",
            Error::EulerMismatch { .. } => "EulerMismatch",
            Error::SideInconsistent(_) => "SideInconsistent",
            Error::ColorNotInAlcove(_) => "ColorNotInAlcove",
            Error::BadAlpha0(_) => "BadAlpha0",
            Error::AlphaNotInSupport { .. } => "AlphaNotInSupport",
            Error::InvalidField => "InvalidField",
            Error::VerticalWinding(_) => "VerticalWinding",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
