use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A check ran and did not hold.
    Mismatch,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 1,
            Status::Inconclusive => 3,
        }
    }
}

/// What a subcommand produced, before timing is attached.
pub struct Outcome {
    pub status: Status,
    pub digest: String,
    pub result: Value,
    pub certificate: Value,
    pub human: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub result: Value,
    pub certificate: Value,
    pub timing_ms: f64,
}

/// SHA-256 over the inputs, each prefixed by its length.
pub fn digest<I, B>(inputs: I) -> String
where
    I: IntoIterator<Item = B>,
    B: AsRef<[u8]>,
{
    let mut h = Sha256::new();
    for chunk in inputs {
        let bytes = chunk.as_ref();
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

/// Exit code for an error: 2 for malformed input, 3 when no answer could be
/// certified, 1 otherwise.
pub fn error_code(e: &anyhow::Error) -> u8 {
    use flopcheck::Error as E;
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<E>() {
            return match err {
                E::NotComplete(_) | E::UnknownDimension(_) => 3,
                E::Parse { .. }
                | E::Alphabet(_)
                | E::AlphabetMismatch { .. }
                | E::Shape(_)
                | E::NotLocal(_)
                | E::Invalid(_) => 2,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}
