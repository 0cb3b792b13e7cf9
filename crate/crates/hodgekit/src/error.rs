use thiserror::Error;

/// Crate-wide error type.
///
/// `Structural` faults (malformed filtrations, dimension mismatches, bad
/// scalars) are kept distinct from mathematical verdicts: an input that is a
/// well-formed triple but fails the mixed Hodge axioms is reported through
/// [`Error::NotMixedHodge`], never through a structural variant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not a mixed Hodge structure: {0}")]
    NotMixedHodge(String),
    #[error("operation requires a pure Hodge structure: {0}")]
    NotPure(String),
    #[error("form is not positive definite on the relevant span")]
    NotPositiveDefinite,
    #[error("gradings split different weight filtrations")]
    DifferentWeightFiltrations,
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An invariant the theory guarantees failed to hold; indicates a bug.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
