use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("Graver basis exceeds the size guard of {limit} elements")]
    BasisTooLarge { limit: usize },

    #[error("lifting would emit {needed} placements, above the guard of {limit}")]
    LiftTooLarge { needed: u128, limit: usize },

    #[error("enumeration needs {needed} points, above the budget of {limit}")]
    BudgetExceeded { needed: u128, limit: u64 },

    #[error("zonotope dimension {dim} exceeds the guard of {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid instance: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

impl Error {
    /// Resource guards (as opposed to malformed input or internal bugs).
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::BasisTooLarge { .. }
                | Error::LiftTooLarge { .. }
                | Error::BudgetExceeded { .. }
                | Error::DimensionGuard { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
