use thiserror::Error;

/// Everything that stops a command before it can produce verdicts. All of these exit with 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{path} is invalid: {source}")]
    Invalid { path: String, source: localgpd::Error },
    #[error("resource cap: {0}")]
    ResourceCap(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn schema(path: impl Into<String>, msg: impl Into<String>) -> CliError {
        CliError::Schema { path: path.into(), msg: msg.into() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Schema { .. } => "SchemaError",
            CliError::Invalid { .. } => "InvalidStructure",
            CliError::ResourceCap(_) => "ResourceCap",
            CliError::Io(_) => "IoError",
        }
    }

    /// Sorts a library error raised while building the structure at `path`: dangling
    /// references are schema errors, broken laws make the structure invalid.
    pub fn classify(path: &str, e: localgpd::Error) -> CliError {
        use localgpd::Error as E;
        match e {
            E::TooLarge { .. } | E::ResourceCap(_) => CliError::ResourceCap(format!("{path}: {e}")),
            E::UnknownPoint(_)
            | E::UnknownArrow(_)
            | E::UnknownObject(_)
            | E::Duplicate(_)
            | E::NotOpen(_)
            | E::BadRestriction { .. }
            | E::ElementNotInSet { .. }
            | E::TopologyRequired
            | E::BaseMismatch => CliError::schema(path, e.to_string()),
            other => CliError::Invalid { path: path.to_string(), source: other },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
