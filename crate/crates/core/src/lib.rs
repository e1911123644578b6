//! Curvature of Randers metrics `F = α + β`.
//!
//! The crate evaluates spray, Riemann and Ricci curvature, S-curvature,
//! distortion and projective Ricci curvature of Randers metrics given by
//! coefficient expressions, and checks the characterizing equations of
//! isotropic, flat, reversible and square projective Ricci curvature
//! pointwise, reporting residuals.
//!
//! All derivatives come from truncated Taylor arithmetic ([`jets`]); there is
//! no finite differencing outside the test oracles.

pub mod error;
pub mod exec;
pub mod expr;
pub mod finsler;
pub mod jets;
pub mod metric;
pub mod randers;
pub mod report;
pub mod riemann;
pub mod sampling;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};
pub use metric::{MetricSpec, MetricSpecFile};
