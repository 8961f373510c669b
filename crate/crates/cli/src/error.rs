use std::fmt;
use std::path::Path;

use lsa_core::cimodel::{CiError, PropositionError};
use lsa_core::cooctrace::TraceError;
use lsa_core::corpusio::CorpusError;
use lsa_core::evalsuite::datasets::DatasetError;
use lsa_core::evalsuite::EvalError;
use lsa_core::vecspace::{FormatError, SpaceError};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERIC, message: message.into() }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::input(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Unreadable { .. } | CorpusError::Format { .. } => Self::input(e.to_string()),
            _ => Self::data(e.to_string()),
        }
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::RankOutOfRange { .. } => Self::input(e.to_string()),
            SpaceError::NoConvergence { .. } => Self::numeric(e.to_string()),
            _ => Self::data(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        Self::input(format!("space file: {e}"))
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Dataset(d) => d.into(),
            EvalError::InvalidItem { .. } => Self::input(e.to_string()),
            EvalError::TooFewItems { ref exclusions, .. } => {
                let mut msg = e.to_string();
                for x in exclusions.iter().take(10) {
                    msg.push_str(&format!("\n  {}: {}", x.item, x.reason));
                }
                if exclusions.len() > 10 {
                    msg.push_str(&format!("\n  ... {} more", exclusions.len() - 10));
                }
                Self::data(msg)
            }
        }
    }
}

impl From<TraceError> for CliError {
    fn from(e: TraceError) -> Self {
        match e {
            TraceError::Space { source, step } => {
                let inner: CliError = source.into();
                Self { code: inner.code, message: format!("step {step}: {}", inner.message) }
            }
            TraceError::MissingWord { .. } => Self::data(e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

impl From<PropositionError> for CliError {
    fn from(e: PropositionError) -> Self {
        Self::input(format!("propositions: {e}"))
    }
}

impl From<CiError> for CliError {
    fn from(e: CiError) -> Self {
        match e {
            CiError::NoPropositions => Self::data(e.to_string()),
            CiError::InvalidParams(_) => Self::input(e.to_string()),
        }
    }
}
