//! Colored Jones polynomials of the figure eight knot and its cables, their
//! recurrence annihilators in the quantum torus, cabled A-polynomials by
//! resultants, and the AJ comparison between the two.

pub mod ajcheck;
pub mod apoly;
pub mod error;
pub mod exact_poly;
pub mod jones;
pub mod qtorus;
pub mod recurrences;
pub mod serialize;

pub use error::{Error, Result};
