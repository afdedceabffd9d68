use qtm_core::circsim::SimError;
use qtm_core::decompose::DecomposeError;
use qtm_core::numerics::NumericsError;
use qtm_core::qtm::QtmError;
use qtm_core::yao::YaoError;
use thiserror::Error;

/// A malformed input file or argument, with its 1-based line when known.
#[derive(Debug, Error, PartialEq)]
#[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct FormatError {
    pub line: Option<usize>,
    pub message: String,
}

impl FormatError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn plain(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Qtm(QtmError),
    #[error("{0}")]
    Yao(YaoError),
    #[error("{0}")]
    Sim(SimError),
    #[error("{0}")]
    Decompose(DecomposeError),
    #[error("{0}")]
    Numerics(NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<QtmError> for CliError {
    fn from(e: QtmError) -> Self {
        Self::Qtm(e)
    }
}

impl From<YaoError> for CliError {
    fn from(e: YaoError) -> Self {
        Self::Yao(e)
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        Self::Sim(e)
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        Self::Decompose(e)
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        Self::Numerics(e)
    }
}
