use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("not a unit: block {block} (residue {residue} mod {modulus})")]
    NotAUnit { block: usize, residue: u64, modulus: u64 },

    #[error("not a global action: {0}")]
    NotAGlobalAction(String),

    #[error("partial action is not transitive ({orbits} orbits)")]
    NotTransitive { orbits: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("not a cochain: {0}")]
    NotACochain(String),

    #[error("not a cocycle: coboundary differs from the identity at {tuple:?}")]
    NotACocycle { tuple: Vec<usize> },

    #[error("cocycles are not cohomologous")]
    NotCohomologous,

    #[error("too large: {0}")]
    TooLarge(String),

    /// A checked identity failed. These are theorem checks, so this signals a bug.
    #[error("internal error: {check} failed at {tuple:?}")]
    Internal { check: String, tuple: Vec<usize> },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn internal(check: &str, tuple: &[usize]) -> Self {
        Error::Internal { check: check.to_string(), tuple: tuple.to_vec() }
    }
}
