//! Exact truncated q-series engine.
//!
//! Series live in `Z((q^(1/4)))` with a per-value truncation order. On top of
//! that arithmetic sit the tetrahedral index, a suite of executable identity
//! checks, the 3D index of an ideal triangulation and the Dehn filling sum.

pub mod dehnfill;
pub mod error;
pub mod qlaurent;
pub mod relations;
pub mod tetindex;
pub mod triangulation;

pub use error::{Error, Result};
pub use qlaurent::{Monomial, QuarterExp, QuarterSeries, ZLaurentWindow};
pub use tetindex::IndexTable;
