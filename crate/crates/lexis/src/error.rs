use std::io;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("position {pos} outside {lo}..={hi}")]
    Position { pos: usize, lo: usize, hi: usize },
    #[error("table for length {0} would exceed its load limit")]
    Capacity(usize),
    #[error("index is compacted and read-only")]
    Compacted,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown word: {0}")]
    NotFound(String),
    #[error("bad index file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
