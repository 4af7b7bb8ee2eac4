//! Exact arithmetic substrate: rationals, the quadratic field Q(√3), sparse
//! polynomials in up to three variables, homogeneous slices and exact rank.

pub mod coeff;
pub mod error;
pub mod graded;
pub mod linalg;
pub mod mpoly;
pub mod qsqrt3;
pub mod rational;
pub mod serial;

pub use coeff::{Coeff, FLOAT_SNAP_EPS};
pub use error::{AlgebraError, Result};
pub use graded::{graded_rank, lex_index, monomials, slice_dim, GradedSlice, MonomialOrder};
pub use linalg::{bareiss_rank, clear_denominators, SparseEchelon};
pub use mpoly::{Exponents, FieldCoeff, MPoly};
pub use qsqrt3::QSqrt3;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use serial::{AnyPoly, JsonCoeff, PolyDoc};
