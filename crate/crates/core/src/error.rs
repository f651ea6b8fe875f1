use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("component c{index} = {value} outside [-1, 1]")]
    ComponentOutOfRange { index: usize, value: f64 },

    #[error("state is not physical: eigenvalue {eigenvalue} is negative")]
    NonPhysical { eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("{name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid rotation axis {0}, expected 1, 2 or 3")]
    InvalidAxis(u8),

    #[error("invalid number of measurement settings {0}, expected 2 or 3")]
    InvalidSettings(usize),

    #[error("invalid Pauli index subset {0:?}, expected 2 or 3 distinct indices from {{1, 2, 3}}")]
    InvalidSubset(Vec<usize>),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no closed form for {0}")]
    Unsupported(String),

    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
