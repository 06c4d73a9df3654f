use alloc::string::String;

/// Failure modes of the pipeline, grouped by the stage that detects them.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("group not finite or bound too small (bound {0})")]
    GroupClosure(usize),
    #[error("group of order {order} exceeds the character table cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("action not cellular: {0}")]
    NotCellular(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported dimension {0}")]
    Dimension(usize),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($t:tt)*) => { $crate::error::Error::Invalid(alloc::format!($($t)*)) };
}
macro_rules! violated {
    ($($t:tt)*) => { $crate::error::Error::Invariant(alloc::format!($($t)*)) };
}
pub(crate) use invalid;
pub(crate) use violated;
