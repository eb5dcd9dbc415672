use std::fmt;

use nfold_core::Error;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Internal,
    Infeasible,
    Unbounded,
    Guard,
    Usage,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Internal => 1,
            Status::Infeasible => 2,
            Status::Unbounded => 3,
            Status::Guard => 4,
            Status::Usage => 5,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input.
    Usage(String),
    Core(Error),
    /// Output could not be written, or an invariant broke.
    Internal(String),
}

impl Failure {
    pub fn status(&self) -> Status {
        match self {
            Failure::Usage(_) => Status::Usage,
            Failure::Core(e) if e.is_guard() => Status::Guard,
            Failure::Core(Error::Inconsistent(_)) => Status::Internal,
            Failure::Core(_) => Status::Usage,
            Failure::Internal(_) => Status::Internal,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => f.write_str(m),
            Failure::Core(e) => e.fmt(f),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome<T = Status> = Result<T, Failure>;
