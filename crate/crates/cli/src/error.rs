use sks_core::analytic::AnalyticError;
use sks_core::exact::ExactError;
use sks_core::kodaira::KodairaError;
use sks_core::modgroup::GroupError;
use sks_core::ng::NgError;

pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;
pub const EXIT_REJECTED: i32 = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("rejected: {0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Rejected(_) => EXIT_REJECTED,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            ref c if c.is_cap() => CliError::Cap(c.to_string()),
            GroupError::Parse(_) => CliError::Parse(e.to_string()),
            GroupError::Exact(x) => x.into(),
            _ => CliError::Rejected(e.to_string()),
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::Parse(_) => CliError::Parse(e.to_string()),
            _ => CliError::Rejected(e.to_string()),
        }
    }
}

impl From<KodairaError> for CliError {
    fn from(e: KodairaError) -> Self {
        match e {
            KodairaError::Group(g) => g.into(),
            KodairaError::InFiber { label, error } => match *error {
                KodairaError::Group(g) => g.into(),
                other => CliError::Rejected(format!("fiber {label}: {other}")),
            },
            KodairaError::UnknownType(_) => CliError::Parse(e.to_string()),
            _ => CliError::Rejected(e.to_string()),
        }
    }
}

impl From<NgError> for CliError {
    fn from(e: NgError) -> Self {
        match e {
            NgError::Group(g) => g.into(),
            NgError::Exact(x) => x.into(),
            NgError::ExponentTooLarge(_) => CliError::Rejected(e.to_string()),
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::InvalidModel(_) => CliError::Parse(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}
