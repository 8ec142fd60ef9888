//! Norm attainment (`M_T`) and minimum-norm attainment (`m_T`) sets of linear
//! operators between finite-dimensional real normed spaces, with
//! Birkhoff-James orthogonality tests, semi-inner-product certificates and
//! executable checks of the surrounding theory.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod attain;
pub mod error;
pub mod linalg;
pub mod norm;
pub mod ortho;
pub mod random;
pub mod search;
pub mod sip;
pub mod verify;

pub use attain::{attain, AttainOptions, AttainmentSet, Mode, Operator, SetForm};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use norm::{DualFunctional, Exponent, Gram, NormSpace, Polygon, SpaceProperties, SupportSet};
pub use ortho::{Cone, DerivativePair, Hyperspace, OrthogonalityCertificate};
pub use sip::{Selector, Sip, SipCertificate};
pub use verify::{TheoremId, TheoremReport, Witness};

/// Tolerance used for unit-norm and certificate checks unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;
