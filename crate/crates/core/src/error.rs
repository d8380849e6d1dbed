use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (bad permutation, element outside a group, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A desk-scale bound was exceeded.
    #[error("resource bound exceeded in {stage}: size {size} > bound {bound}")]
    Resource {
        stage: String,
        size: u64,
        bound: u64,
    },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(stage: impl Into<String>, size: u64, bound: u64) -> Self {
        Error::Resource {
            stage: stage.into(),
            size,
            bound,
        }
    }

    /// Process exit code: 2 for input problems, 3 for resource bounds.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Parse { .. } | Error::Io(_) => 2,
            Error::Resource { .. } => 3,
        }
    }
}
