use std::io;

use thiserror::Error;

use crate::mtx::MtxError;

#[derive(Debug, Error)]
pub enum MspError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] msp_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Mtx(#[from] MtxError),
    #[error("invalid config file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Process exit codes of the `msp` binary.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const SOLVER: i32 = 3;
}

impl MspError {
    pub fn exit_code(&self) -> i32 {
        use msp_core::Error as E;
        match self {
            MspError::Core(
                E::NotPositiveDefinite { .. } | E::SchurNotPositiveDefinite { .. } | E::Breakdown { .. } | E::NoConvergence,
            ) => exit::SOLVER,
            _ => exit::CONFIG,
        }
    }
}

pub type Result<T, E = MspError> = std::result::Result<T, E>;
