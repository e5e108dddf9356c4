//! Error-to-exit-code mapping for scriptability: 0 success, 2 usage or
//! config error, 3 resource or budget error, 4 numeric failure.

use bosonic_core::CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation, unreadable input, or invalid configuration.
    Usage(String),
    /// Work refused because an enumeration or capacity budget would blow.
    Resource(String),
    /// A numeric routine failed or a validation suite found a violation.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Resource(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Budget(_) | CoreError::Capacity(_) => CliError::Resource(e.to_string()),
            CoreError::Numeric(_) => CliError::Numeric(e.to_string()),
            CoreError::Dimension(_) | CoreError::InvalidParameter(_) | CoreError::Parse(_) => {
                CliError::Usage(e.to_string())
            }
        }
    }
}

/// IO problems count as usage errors: the path or permissions were wrong.
pub fn io_usage(context: &str, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {}", context, e))
}

pub type CliResult<T> = Result<T, CliError>;
