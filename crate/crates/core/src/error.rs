use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("unsupported dimension {got}: {what}")]
    UnsupportedDimension { got: usize, what: &'static str },

    /// A configured cap (point count, radius, symbol count) would be exceeded.
    #[error("resource cap exceeded: {what} (cap {cap}, would need radius {needed_radius:.4})")]
    Resource {
        what: &'static str,
        cap: usize,
        needed_radius: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("not a frame: {0}")]
    NotAFrame(String),

    #[error("duality precondition violated: density {density} must exceed 1")]
    DualityPrecondition { density: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("domain truncation: {0}")]
    DomainTruncation(String),

    #[error("theta table too short: tail bound {bound:e} exceeds tolerance {tol:e}")]
    TruncationWarning { bound: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
