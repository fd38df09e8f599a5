//! Command-line companion of `msp-core`: Matrix Market IO, experiment
//! configuration, iteration tables, spectra and the verification suite.

pub mod config;
mod error;
pub mod export;
pub mod mtx;
pub mod reference;
pub mod spectrum;
pub mod table;
pub mod verify;

pub use error::{exit, MspError, Result};
