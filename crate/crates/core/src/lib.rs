//! Exact-arithmetic toolkit for pseudo-traces of finite-dimensional algebras,
//! Zhu-type mode algebras on truncated graded vertex algebras, and the
//! Weierstrass/Eisenstein q-expansion kernels that tie them together.
//!
//! Everything is computed over the ring `ℚ[κ, κ⁻¹]`, where the formal symbol
//! κ stands for 2πi; numeric evaluation substitutes the complex value only at
//! the very end.  All verification suites are coefficient-exact unless a check
//! is explicitly numeric (Eisenstein modularity).

pub mod error;
pub mod scalar;
pub mod series;

pub use error::Error;
pub use scalar::{Rational, Scalar};
pub use series::{LaurentSeries, QLogSeries};
