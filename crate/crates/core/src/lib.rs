//! Certified Mahler measures of integer polynomials, Salem and complex Salem
//! numbers, the trace field of a palindromic polynomial, and the diagonal
//! lattice elements whose powers approach the identity when measures are
//! small.
//!
//! Root locations are decided with exact arithmetic (Sturm and Schur–Cohn
//! counts); numeric roots carry a posteriori inclusion radii, so every
//! floating-point quantity in a report comes with an error bound.
//!
//! ```
//! use lehmer_core::{mahler_measure, IntPoly};
//!
//! let p: IntPoly = "1 1 0 -1 -1 -1 -1 -1 0 1 1".parse()?;
//! let m = mahler_measure(&p)?;
//! assert!((m.value - 1.17628).abs() < 1e-5);
//! # Ok::<(), lehmer_core::Error>(())
//! ```

mod bigserde;
pub mod adjoint;
pub mod cli;
pub mod error;
pub mod fields;
pub mod intpoly;
pub mod lattice;
pub mod linalg;
pub mod mahler;
pub mod roots;
pub mod salem;

pub use error::{Error, Result};
pub use intpoly::IntPoly;
pub use mahler::{kronecker_test, mahler_measure, MahlerCertificate};
pub use salem::{certify, SalemCertificate, SalemKind};
