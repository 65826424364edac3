use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("series needs at least {required} values, got {actual}")]
    TooShort { required: usize, actual: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    /// The regressor or a binned axis has zero range.
    #[error("constant variable")]
    ConstantVariable,
    /// The contingency table collapses to a single row or column.
    #[error("degenerate contingency table ({rows}x{cols} after dropping empty margins)")]
    DegenerateTable { rows: usize, cols: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("both samples have zero variance")]
    ZeroVariance,
    #[error("weights sum to {0}, expected 1")]
    WeightNormalization(f64),
}
