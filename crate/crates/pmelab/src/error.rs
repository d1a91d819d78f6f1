//! Crate-wide error type.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// A constructor or operation received values outside its domain.
    /// The message names the violated bound.
    Validation(String),
    /// Config-file syntax or semantics problem; the message names the key.
    Config(String),
    /// Time stepping could not proceed (CFL violation, step budget
    /// exhausted, requested window outside the available data).
    Solver(String),
    /// Filesystem failure, annotated with the path involved.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(msg) => write!(f, "validation: {msg}"),
            Error::Config(msg) => write!(f, "config: {msg}"),
            Error::Solver(msg) => write!(f, "solver: {msg}"),
            Error::Io(msg) => write!(f, "io: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
