use thiserror::Error;

use crate::parse::Location;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: Location, message: String },

    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("word uses generator {letter} but the alphabet has {size} generators")]
    AlphabetMismatch { letter: usize, size: usize },

    #[error("Groebner basis is not certified complete (truncated at degree {0})")]
    NotComplete(usize),

    #[error("dimension is infinite or could not be certified: {0}")]
    UnknownDimension(String),

    #[error("algebra is not local: {0}")]
    NotLocal(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
