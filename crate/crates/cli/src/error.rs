use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {0}")]
    File(String),

    #[error("invalid box: {0}")]
    Invalid(String),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),

    #[error(transparent)]
    Core(nsmacro::Error),
}

impl From<nsmacro::Error> for CliError {
    fn from(e: nsmacro::Error) -> Self {
        use nsmacro::Error as E;
        match e {
            E::NonFinite { .. }
            | E::NegativeEntry { .. }
            | E::RowNotNormalized { .. }
            | E::SignalingDetected { .. }
            | E::NotNoSignaling { .. }
            | E::Format(_) => CliError::Invalid(e.to_string()),
            E::BadThreshold { .. }
            | E::BadParams(_)
            | E::BadFamily { .. }
            | E::OutOfRange { .. }
            | E::ZeroCopies
            | E::OddM(_)
            | E::TraceTooShort { .. }
            | E::WeightsNotNormalized { .. }
            | E::NegativeWeight { .. } => CliError::Usage(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Usage(_) | CliError::File(_) => 3,
            CliError::Output(_) | CliError::Core(_) => 1,
        }
    }
}
