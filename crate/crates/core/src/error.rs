use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("label {label} out of range 1..={max}")]
    LabelOutOfRange { label: u32, max: u32 },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("generator {0} does not belong to this group")]
    ForeignGenerator(String),
    #[error("twisted data not allowed here: {0}")]
    InvalidTwist(String),
    #[error("element is not in the bracket kernel: {0}")]
    NotInKernel(String),
    #[error("lower order Milnor invariant does not vanish at order {order}")]
    LowerOrderNonvanishing { order: usize },
    #[error("invalid longitudes: {0}")]
    InvalidLongitudes(String),
    #[error("braid is not pure: {0}")]
    NotPure(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("tree has repeated labels: {0}")]
    RepeatedLabels(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Parse { .. } => "parse",
            Error::LabelOutOfRange { .. } => "label_out_of_range",
            Error::OrderMismatch { .. } => "order_mismatch",
            Error::ForeignGenerator(_) => "foreign_generator",
            Error::InvalidTwist(_) => "invalid_twist",
            Error::NotInKernel(_) => "not_in_kernel",
            Error::LowerOrderNonvanishing { .. } => "lower_order_nonvanishing",
            Error::InvalidLongitudes(_) => "invalid_longitudes",
            Error::NotPure(_) => "not_pure",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::RepeatedLabels(_) => "repeated_labels",
            Error::ResourceLimit(_) => "resource_limit",
            Error::Internal(_) => "internal",
        }
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Size bounds checked before large presentations are assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_generators: usize,
    pub max_relators: usize,
    /// Upper bound on generators × relators of a dense relator matrix.
    pub max_cells: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_generators: 20_000, max_relators: 200_000, max_cells: 60_000_000 }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits { max_generators: usize::MAX, max_relators: usize::MAX, max_cells: usize::MAX }
    }

    /// Derives a cell budget from a memory cap in megabytes (about 64 bytes per cell).
    pub fn from_megabytes(mb: usize) -> Self {
        let cells = mb.saturating_mul(1 << 20) / 64;
        Limits { max_cells: cells, ..Self::default() }
    }

    pub fn check(&self, what: &str, generators: usize, relators: usize) -> Result<()> {
        if generators > self.max_generators {
            return Err(Error::ResourceLimit(format!("{what}: {generators} generators exceed {}", self.max_generators)));
        }
        if relators > self.max_relators {
            return Err(Error::ResourceLimit(format!("{what}: {relators} relators exceed {}", self.max_relators)));
        }
        let cells = generators.saturating_mul(relators);
        if cells > self.max_cells {
            return Err(Error::ResourceLimit(format!("{what}: {cells} matrix cells exceed {}", self.max_cells)));
        }
        Ok(())
    }
}
