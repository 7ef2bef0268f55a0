use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("element {element} is outside the ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("invalid ground set: {0}")]
    InvalidGround(String),

    #[error("undefined kernel: the family is empty")]
    UndefinedKernel,

    #[error("target width {requested} is below the maximum member size {max}")]
    WidthTooSmall { requested: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} cap exceeded: limit {limit}, got {actual}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("weight profile has {len} entries but the family has width {w}")]
    ProfileTooShort { len: usize, w: usize },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
