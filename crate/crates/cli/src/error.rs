use thiserror::Error;

/// Bad user input; the message names the offending field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid `{field}`: {reason}")]
pub struct UsageError {
    pub field: &'static str,
    pub reason: String,
}

impl UsageError {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Self {
            field,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error(transparent)]
    Usage(#[from] UsageError),

    #[error("at gT = {gt}: {source}")]
    Model {
        gt: f64,
        #[source]
        source: ico_cqed_core::Error,
    },
}
