use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (unknown ids, bad JSON, decimals).
    #[error("input error: {0}")]
    Input(String),

    /// The operation is undefined for this game or profile
    /// (infeasible game, infeasible profile, wrong topology class).
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration would exceed its configured bound.
    #[error("resource error: {what} needs {required} items, cap is {cap}")]
    Resource {
        what: String,
        required: u128,
        cap: u128,
    },
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Domain(_) => "domain",
            Error::Resource { .. } => "resource",
        }
    }
}
