use std::path::PathBuf;

use crate::ids::{ActionId, ControlId, ToolbarId};

/// Errors produced by engine operations.
///
/// Per-event failures during replay (`UnknownControl`, `InvalidOption`, ...)
/// are logged into the snapshot; malformed or out-of-order input, unreadable
/// profiles and I/O failures abort.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("control id {0} is already registered on this toolbar")]
    DuplicateControlId(ControlId),
    #[error("action {0} is already bound on this toolbar")]
    DuplicateAction(ActionId),
    #[error("unknown control {0}")]
    UnknownControl(ControlId),
    #[error("unknown toolbar {0}")]
    UnknownToolbar(ToolbarId),
    #[error("boundary {boundary} out of range for a row of {sections} sections")]
    BadBoundary { boundary: usize, sections: usize },
    #[error("position {position} out of range for a chain of length {len}")]
    BadPosition { position: usize, len: usize },
    #[error("option {option:?} is not offered at position {position}")]
    InvalidOption { position: usize, option: String },
    #[error("unknown context {0:?}")]
    UnknownContext(String),
    #[error("no {0} is configured for this session")]
    NotConfigured(&'static str),
    #[error("invalid definition: {0}")]
    InvalidDefinition(String),
    #[error("trace parse error at line {line}: {message}")]
    TraceParse { line: usize, message: String },
    #[error("event seq {seq} does not follow {previous}")]
    SeqOrder { seq: u64, previous: u64 },
    #[error("malformed profile {path}: {message}")]
    ProfileParse { path: PathBuf, message: String },
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Errors that abort a replay rather than being logged per event.
    pub fn is_fatal(&self) -> bool {
        matches!(
            self,
            Error::TraceParse { .. } | Error::SeqOrder { .. } | Error::ProfileParse { .. } | Error::Io { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
