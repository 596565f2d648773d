use bml::anticommutation::GraphError;
use bml::inequalities::ExprError;
use bml::networks::NetworkError;
use bml::nosignaling::NsError;
use bml::quantum::QuantumError;
use bml::randomness::RandomnessError;
use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    BadInput = 2,
    Impossible = 3,
    Inconclusive = 4,
    Numerical = 5,
}

impl Exit {
    pub fn as_str(self) -> &'static str {
        match self {
            Exit::Ok => "ok",
            Exit::BadInput => "bad_input",
            Exit::Impossible => "impossible",
            Exit::Inconclusive => "inconclusive",
            Exit::Numerical => "numerical_failure",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Numerical(_) => Exit::Numerical,
            _ => Exit::BadInput,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::BadInput(format!("invalid JSON: {e}"))
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::BadInput(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::BadInput(e.to_string())
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::NumericalFailure(_) => CliError::Numerical(e.to_string()),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::Quantum(q) => q.into(),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<NsError> for CliError {
    fn from(e: NsError) -> Self {
        match e {
            NsError::LpNumericalFailure(_) | NsError::Lp(_) => CliError::Numerical(e.to_string()),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<RandomnessError> for CliError {
    fn from(e: RandomnessError) -> Self {
        CliError::BadInput(e.to_string())
    }
}
