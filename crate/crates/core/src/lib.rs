//! Certified upper bounds on `A(n,d)` and `A(n,d,w)`.
//!
//! Bounds are built from hole-distance counting on top of exact Delsarte
//! linear programs. All arithmetic is exact; an integer bound is the floor of
//! a rational that can be re-derived from the recorded table inputs.

// Conditions are written as in the formulas, e.g. `2 * e + 1 <= n`.
#![allow(clippy::int_plus_one)]
// Matrix code indexes several arrays with one subscript.
#![allow(clippy::needless_range_loop)]

mod error;
pub mod scalar;
pub mod bounds;
pub mod cw;
pub mod holes;
pub mod lp;
pub mod oracle;
pub mod scheme;
pub mod table;

pub use error::Error;
pub use scalar::Rational;
