use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Library(#[from] padic_spectrum::Error),

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// Configuration and library errors both mean the requested run cannot be
    /// carried out as configured.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
