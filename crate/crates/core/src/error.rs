use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad coordinates, wave numbers or lattice sizes.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested Fock space exceeds the oracle cap.
    #[error("resource error: {sites} sites need a 2^{sites} = {dimension}-dimensional Fock space (cap is {cap} sites)")]
    Resource {
        sites: usize,
        dimension: u128,
        cap: usize,
    },

    /// A checked identity failed; carries the measured deviation.
    #[error("invariant `{invariant}` violated: deviation {deviation:e} ({detail})")]
    Invariant {
        invariant: &'static str,
        deviation: f64,
        detail: String,
    },

    #[error("eigensolver did not converge on a {dimension}x{dimension} matrix (max |entry| = {max_entry:e})")]
    NoConvergence { dimension: usize, max_entry: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, deviation: f64, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            deviation,
            detail: detail.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) | Error::Resource { .. } => 2,
            _ => 1,
        }
    }
}
