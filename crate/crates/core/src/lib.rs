//! Exact computation of class numbers of norm-one tori and their duals.
//!
//! The library has three layers:
//! * integer linear algebra (`mat`, `presentation`, `abelian`),
//! * finite group machinery and G-lattices with Tate cohomology
//!   (`group`, `module`, `cohomology`),
//! * arithmetic inputs and the class number formulas themselves
//!   (`quadratic`, `dataset`, `formulas`).
//!
//! Every closed-form quantity the formulas consume can also be computed by
//! brute force from cochains, and the report types carry both values.

pub mod abelian;
pub mod cohomology;
pub mod dataset;
pub mod error;
pub mod formulas;
pub mod group;
pub mod mat;
pub mod module;
pub mod places;
pub mod presentation;
pub mod quadratic;

pub use abelian::FiniteAbelianGroup;
pub use error::Error;
