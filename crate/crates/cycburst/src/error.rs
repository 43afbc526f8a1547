//! Error type shared across the crate.

use std::fmt;
use std::io;

/// Errors produced by validation, parsing, sampling, and reconstruction.
#[derive(Debug)]
pub enum Error {
    /// Parameters fail a validity or regime precondition (e.g. `q < 2`,
    /// `n < 2tb` for ball enumeration).
    InvalidParams(String),
    /// Two operands disagree on length or alphabet.
    Mismatch(String),
    /// A file or word string could not be parsed.
    Parse(String),
    /// The request is well-formed but outside the tractable regime
    /// (e.g. an enumeration that would exceed the configured cap).
    Infeasible(String),
    /// Rejection sampling exhausted its retry budget.
    SamplingExhausted(String),
    /// The reads are mutually inconsistent: no codeword lies in every
    /// read's error ball.
    InconsistentReads,
    /// Too many undecided positions for candidate enumeration; carries the
    /// observed count, the configured cap (in candidate bits), and the
    /// theoretical ceiling `b*t*((t-s+h+1)*b+1)`.
    StarOverflow {
        stars: usize,
        cap_bits: u32,
        theoretical: usize,
    },
    /// Underlying I/O failure.
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::Mismatch(msg) => write!(f, "operand mismatch: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible request: {msg}"),
            Error::SamplingExhausted(msg) => write!(f, "sampling exhausted: {msg}"),
            Error::InconsistentReads => {
                write!(f, "no codeword is consistent with every read")
            }
            Error::StarOverflow {
                stars,
                cap_bits,
                theoretical,
            } => write!(
                f,
                "{stars} undecided positions exceed the enumeration cap of \
                 {cap_bits} candidate bits (theoretical ceiling {theoretical})"
            ),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
