use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure in {module}: {source}")]
    Numerical {
        module: &'static str,
        #[source]
        source: gravicol::Error,
    },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical { .. } => 3,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }

    /// Route a library error: bad inputs are usage errors, everything else
    /// is numerical.
    pub fn from_core(module: &'static str, e: gravicol::Error) -> Self {
        use gravicol::Error as E;
        match e {
            E::NonPositiveMass(_)
            | E::NonPositiveLength(_)
            | E::NegativeRadius(_)
            | E::NonPositiveInput { .. }
            | E::InvalidSpec(_) => CliError::Usage(e.to_string()),
            source => CliError::Numerical { module, source },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attach a module name to library results.
pub trait Context<T> {
    fn within(self, module: &'static str) -> CliResult<T>;
}

impl<T> Context<T> for gravicol::Result<T> {
    fn within(self, module: &'static str) -> CliResult<T> {
        self.map_err(|e| CliError::from_core(module, e))
    }
}
