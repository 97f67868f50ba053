use thiserror::Error;

/// Every failure the library reports.
///
/// [`Error::tag`] gives a stable machine-readable name for the variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0}")]
    Bounds(String),
    #[error("{what} exceeds the limit of {limit}")]
    Size { what: String, limit: u64 },
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    UnsupportedVariant(String),
    #[error("agent {agent} has zero total cost and cannot be normalized")]
    Normalization { agent: usize },
    #[error("{0} requires a normalized instance")]
    RequiresNormalization(String),
    #[error("{0}")]
    Partition(String),
    #[error("{0}")]
    Parse(String),
    #[error("no implied guarantee is recorded for {0}")]
    NotInTable(String),
    #[error("alpha {alpha} is outside the validity range {range} for {entry}")]
    AlphaOutOfRange {
        entry: String,
        alpha: String,
        range: String,
    },
    #[error("no allocation satisfies {0}")]
    NoFairAllocation(String),
    #[error("{family}: {constraint}")]
    FamilyParam { family: String, constraint: String },
    #[error("{0}")]
    Internal(String),
}

impl Error {
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Bounds(_) => "bounds",
            Error::Size { .. } => "size_guard",
            Error::Argument(_) => "argument",
            Error::UnsupportedVariant(_) => "unsupported_variant",
            Error::Normalization { .. } => "normalization",
            Error::RequiresNormalization(_) => "requires_normalization",
            Error::Partition(_) => "partition",
            Error::Parse(_) => "parse",
            Error::NotInTable(_) => "not_in_table",
            Error::AlphaOutOfRange { .. } => "alpha_out_of_range",
            Error::NoFairAllocation(_) => "no_fair_allocation",
            Error::FamilyParam { .. } => "family_param",
            Error::Internal(_) => "internal",
        }
    }

    /// Whether the error stems from bad input rather than a broken invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn size_guard(what: impl Into<String>, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        Err(Error::Size {
            what: format!("{} ({})", what.into(), value),
            limit,
        })
    } else {
        Ok(())
    }
}
