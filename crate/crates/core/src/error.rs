use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no sequences given")]
    EmptyInput,

    #[error("sequence {sequence}: {found} tags for {expected} characters")]
    LengthMismatch {
        sequence: usize,
        expected: usize,
        found: usize,
    },

    #[error("sequence {sequence}: reserved byte 0x{byte:02x} at offset {offset}")]
    ReservedByte {
        sequence: usize,
        offset: usize,
        byte: u8,
    },

    #[error("pattern contains reserved byte 0x{byte:02x} at offset {offset}")]
    ReservedPatternByte { offset: usize, byte: u8 },

    #[error("frequency threshold must be at least 1, got {0}")]
    InvalidFrequency(usize),

    #[error("substring [{i}..{j}] is not valid for a pattern of length {m}")]
    InvalidSubstring { i: usize, j: usize, m: usize },

    #[error("position {pos} out of range (length {len})")]
    OutOfRange { pos: usize, len: usize },

    #[error("malformed index file: {0}")]
    Format(String),

    #[error("unsupported index format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
