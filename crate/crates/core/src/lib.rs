//! Exact mixing analysis for algebraic `Z^d`-actions presented by a single
//! Laurent polynomial `f` over a prime field.

pub mod budget;
pub mod error;
pub mod fraction;
pub mod fp_laurent;
pub mod quotient_ring;

pub use error::{Error, Result};
pub use fp_laurent::{ExponentVec, FieldSpec, LaurentPoly, SupportSet};
pub mod linalg;
pub mod mixing_analysis;
pub mod haar_measure;
pub mod newton_polytope;
pub mod parallel_redraw;
pub mod report;
pub mod sequence_geometry;
