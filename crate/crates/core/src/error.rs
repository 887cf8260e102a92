use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::natset::{NatSet, NatSetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    /// No product intersection set can omit 1.
    #[error("target {0} does not contain 1 and cannot be realized")]
    Infeasible(NatSet),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    NatSet(#[from] NatSetError),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Algebra(AlgebraError::TupleBudget { .. } | AlgebraError::TableBudget { .. })
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(msg()))
    }
}
