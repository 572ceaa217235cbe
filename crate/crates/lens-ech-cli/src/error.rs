//! Failures of a command and their exit codes.

use std::path::PathBuf;

use lens_ech::complex::ComplexError;
use lens_ech::domain::{DecodeError, DomainError};
use lens_ech::index::IndexError;
use lens_ech::packing::PackingError;
use lens_ech::paths::PathError;
use lens_ech::spectrum::SpectrumError;
use thiserror::Error;

/// Exit code of a successful command.
pub const EXIT_SUCCESS: u8 = 0;
/// Exit code when a cross-check finds a disagreement.
pub const EXIT_VERIFICATION: u8 = 1;
/// Exit code for anything wrong with the input.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{}`: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{}`: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("domain file `{}`: {source}", path.display())]
    Domain { path: PathBuf, source: DecodeError },
    #[error("--{flag} is {value}, the largest accepted value is {max}")]
    Bound { flag: &'static str, value: usize, max: usize },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Frame(#[from] DomainError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Packing(#[from] PackingError),
}

/// Rejects `value` above `max` for the named flag.
pub fn check_bound(flag: &'static str, value: usize, max: usize) -> Result<(), CliError> {
    if value > max {
        Err(CliError::Bound { flag, value, max })
    } else {
        Ok(())
    }
}
