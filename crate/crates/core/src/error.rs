//! Crate-level error type: one enum wrapping each subsystem's errors, with a
//! stable short code per class for CLI diagnostics.

use thiserror::Error;

use crate::chunkstore::ChunkStoreError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chunkstore: {0}")]
    ChunkStore(#[from] ChunkStoreError),
}

impl Error {
    /// Stable `module/class` code for one-line CLI diagnostics.
    pub fn code(&self) -> String {
        match self {
            Error::ChunkStore(e) => format!("chunkstore/{}", chunkstore_code(e)),
        }
    }
}

fn chunkstore_code(e: &ChunkStoreError) -> &'static str {
    match e {
        ChunkStoreError::UnknownColumn(_) | ChunkStoreError::Schema(_) => "schema",
        ChunkStoreError::Format(_) => "format",
        ChunkStoreError::Parse { .. } => "parse",
        ChunkStoreError::RowOutOfRange { .. } => "bounds",
        ChunkStoreError::KindMismatch { .. } | ChunkStoreError::LengthMismatch { .. } => "type",
        ChunkStoreError::BudgetTooSmall { .. } | ChunkStoreError::OverCommit { .. } => "budget",
        ChunkStoreError::Checkpoint { .. } => "checkpoint",
        ChunkStoreError::Manifest(_) => "manifest",
        ChunkStoreError::AlreadyMasked { .. } => "amputation",
        ChunkStoreError::Internal(_) => "internal",
        ChunkStoreError::Io(_) => "io",
    }
}
