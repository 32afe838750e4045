//! Small-parameter asymptotics of the generalized Euler-Jacobi series
//!
//! ```text
//! S_p(a; w) = sum_{n >= 1} exp(-a n^p) / n^w
//! ```
//!
//! with the algebraic expansion, the exponentially small expansions for even
//! `p` and `w`, the inverse-factorial coefficients `c_j(w, p)` and a direct
//! summation oracle with a certified tail bound.

pub mod bigreal;
pub mod error;
pub mod expansions;
pub mod coeffgen;
pub mod format;
pub mod scalar;
pub mod oracle;
pub mod params;
pub mod series;
pub mod special;
pub mod tables;

use num_complex::Complex;

pub use bigreal::BigReal;
pub use error::{Error, Result};
pub use scalar::{ComplexExt, Field, PrecisionCtx, Real};
pub use series::FormalSeries;

pub type BigComplex = Complex<BigReal>;
