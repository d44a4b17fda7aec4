use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter combination violates a structural constraint of a scheme.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("library of {files} files cannot serve {users} distinct demands")]
    LibraryTooSmall { users: usize, files: usize },

    #[error("demand vector has length {got}, expected {expected}")]
    DemandLength { expected: usize, got: usize },

    #[error("demand {file} out of range for a library of {files} files")]
    DemandOutOfRange { file: usize, files: usize },

    #[error("duplicate demand for file {0} while distinct demands are required")]
    DuplicateDemand(usize),

    #[error("packet set Z[{row},{col}] is not cached by any user")]
    UncachedPacketSet { row: usize, col: usize },

    #[error("packetization mismatch: placement uses K={placement}, schedule uses K={schedule}")]
    PacketizationMismatch { placement: u64, schedule: u64 },

    #[error("declared cache size {declared} does not match the graph requirement {required}")]
    MemoryMismatch { declared: String, required: String },

    #[error("{what} of size {size} exceeds the enumeration cap {cap}")]
    TooLarge {
        what: &'static str,
        size: String,
        cap: u64,
    },

    #[error("malformed message: {0}")]
    MalformedMessage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
