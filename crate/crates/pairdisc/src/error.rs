use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("{source_name}, line {line}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        message: String,
    },
    #[error("{0}")]
    Input(String),
    #[error("degenerate data: {0}")]
    Degenerate(pairdisc_core::Error),
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_owned(),
            line,
            message: message.into(),
        }
    }

    /// Process exit status: 2 for bad input, 3 for degenerate data, 4 for
    /// output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Read { .. } | Error::Parse { .. } | Error::Input(_) => 2,
            Error::Degenerate(_) => 3,
            Error::Write(_) => 4,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Write(io),
            other => Error::Parse {
                source_name: "csv".into(),
                line,
                message: format!("{other:?}"),
            },
        }
    }
}
