//! Numerical Laplace-transform toolkit.
//!
//! Forward transforms, truncated Bromwich inversion, numerical checks of the
//! conditions under which an analytic function is a Laplace transform, and a
//! Laplace-domain solver for the hypersingular equation
//! `h(t) = g(t) + ∫ (t−s)^{−5/4} h(s) ds`.

pub mod analytic;
pub mod catalog;
pub mod checks;
pub mod complex;
pub mod contour;
pub mod error;
pub mod hypersingular;
pub mod parse;
pub mod quadrature;
pub mod report;
pub mod signal;
pub mod special;
pub mod transform;

pub use analytic::AnalyticMap;
pub use catalog::{lookup, CatalogEntry};
pub use checks::CheckKind;
pub use complex::{principal_power, ComplexValue};
pub use error::{Error, Result};
pub use quadrature::QuadratureConfig;
pub use report::{CheckReport, Verdict};
pub use signal::{GridSignal, TimeFunction};
pub use transform::{bromwich_invert, forward_transform, InversionConfig, InversionResult};
