//! hodgekit: exact computations with graded-polarized mixed Hodge structures.
//!
//! The crate is organized in layers:
//!
//! - [`scalar`], [`matrix`], [`subspace`], [`filtration`], [`lattice`]:
//!   exact linear algebra over `Q` and `Q(i)` and integer-lattice kernels,
//! - [`mhs`]: the mixed Hodge structure type, validation, Deligne
//!   bigradings, Weil operators, graded polarizations, tensor/dual/hom,
//!   morphisms and integral Hodge classes,
//! - [`splitting`]: grading operators, the nilpotent algebra `L^{-1,-1}`,
//!   the Deligne delta-splitting and the retractions onto the real-split
//!   locus,
//! - [`monodromy`]: weight filtrations of nilpotent operators, relative
//!   weight filtrations and limit mixed Hodge structures,
//! - [`admissibility`]: one-variable local models over the punctured disk,
//!   pre-admissibility verdicts and the vertical-strip boundedness probe,
//! - [`domains`]: period-domain membership, fundamental sets, reduction to
//!   fundamental domains and definable-structure comparison,
//! - [`loci`]: bounded-norm integral Hodge class enumeration,
//! - [`io`]: the JSON schemas shared with the command line tool.
//!
//! The `book/` directory of the repository walks through the same layers
//! with worked examples; its code blocks are doctested.

pub mod admissibility;
pub mod domains;
pub mod error;
pub mod filtration;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod loci;
pub mod matrix;
pub mod mhs;
pub mod monodromy;
pub mod scalar;
pub mod splitting;
pub mod subspace;

pub use admissibility::{
    check_orbit_transversality, check_preadmissible, strip_splitting_probe, LocalModel1D,
    PreadmissibilityVerdict, StripProbeReport, VerticalStrip,
};
pub use domains::{
    membership, real_split_coordinates, reduce_sl2, reduce_unipotent, same_definable_structure,
    verify_fundamental_set, FundamentalSetDescriptor, GroupAction, GroupElement, HodgeNumbers,
    MembershipReport, PeriodDomainSpec,
};
pub use error::{Error, Result};
pub use filtration::{DecreasingFiltration, IncreasingFiltration};
pub use lattice::{integer_kernel, IntMatrix, IntegerLattice};
pub use loci::{enumerate_hdg0_d, hdg_locus_indicator, HodgeClassQuery};
pub use matrix::Matrix;
pub use mhs::{
    deligne_bigrading, hodge_classes, validate_mhs, weil_operator, Bigrading, GradedPolarization,
    MhsMorphism, MixedHodgeStructure, ValidationReport,
};
pub use monodromy::{
    limit_mhs, relative_weight_filtration, weight_filtration_pure, LimitOutcome, NilpotentOperator,
    RelativeWeightFiltration,
};
pub use scalar::{GaussianRational, Rational};
pub use splitting::{
    delta_splitting, unipotent_transport, GradingOperator, RealSplitPoint, Retraction,
};
pub use subspace::Subspace;
