use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-physical monomial u^{k} v^{l} t^[{profile}]: {reason}")]
    NonPhysical {
        k: u32,
        l: u32,
        profile: String,
        reason: String,
    },

    #[error("weight {requested} is beyond the computed truncation degree {dmax}")]
    OutOfTruncation { requested: u32, dmax: u32 },

    #[error("marked count for d={d}, g={g} is not an integer: {value}")]
    Integrality { d: u32, g: u32, value: String },

    #[error("brute-force enumeration at d={d} exceeds the supported bound d <= {max}")]
    OracleBudget { d: u32, max: u32 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
