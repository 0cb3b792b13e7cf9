//! mdbook cannot run a book's code blocks as tests with dependencies, so
//! each chapter is included here as module documentation and `cargo test
//! --doc` does the work.  One module per chapter keeps failures traceable
//! to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
pub mod exact_arithmetic {}

#[doc = include_str!("../../../book/src/mixed-hodge-structures.md")]
pub mod mixed_hodge_structures {}

#[doc = include_str!("../../../book/src/splittings.md")]
pub mod splittings {}

#[doc = include_str!("../../../book/src/monodromy.md")]
pub mod monodromy {}

#[doc = include_str!("../../../book/src/admissibility.md")]
pub mod admissibility {}

#[doc = include_str!("../../../book/src/quotients.md")]
pub mod quotients {}

#[doc = include_str!("../../../book/src/hodge-classes.md")]
pub mod hodge_classes {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
