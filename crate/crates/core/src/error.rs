use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input. `location` is a line number for CSV input and a JSON
    /// path for edition files.
    #[error("{source_name}: parse error at {location}: {message}")]
    Parse {
        source_name: String,
        location: String,
        message: String,
    },

    #[error("{source_name}: integrity error: {message}")]
    Integrity { source_name: String, message: String },

    #[error("{source_name}: {} validation error(s):\n  {}", .problems.len(), .problems.join("\n  "))]
    Validation {
        source_name: String,
        problems: Vec<String>,
    },

    #[error("unknown country code {country_code:?}{}", context_suffix(.context))]
    UnknownCountry {
        country_code: String,
        context: Option<String>,
    },

    #[error("unknown airport override {iata:?}{}", context_suffix(.context))]
    UnknownAirportOverride {
        iata: String,
        context: Option<String>,
    },

    #[error("no airports available for nearest-airport search")]
    EmptyDataset,

    #[error("no travelers to place a venue for")]
    EmptyTravelers,

    #[error("no candidate capitals")]
    EmptyCapitals,

    #[error("no paper records")]
    EmptyRecords,

    #[error("savings undefined: actual emissions are zero but the alternative emits {alternative_kg} kg")]
    UndefinedSavings { alternative_kg: f64 },

    #[error("invalid emission model: {0}")]
    InvalidModel(String),
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" ({c})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the filesystem rather than by the content
    /// of the inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }

    pub(crate) fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::UnknownCountry { country_code, .. } => Error::UnknownCountry {
                country_code,
                context: Some(ctx.into()),
            },
            Error::UnknownAirportOverride { iata, .. } => Error::UnknownAirportOverride {
                iata,
                context: Some(ctx.into()),
            },
            other => other,
        }
    }
}
