//! Curvature, ODE and residual machinery for vacuum static spaces built as
//! multiply warped products `ds² + Σ h_j(s)² g_j` over an interval.

pub mod curvature;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod ode;

pub use error::{Error, Result};
pub use jet::Jet;
pub mod verifier;
pub mod catalog;
pub mod report;
pub mod schema;

pub use catalog::{CatalogEntry, CatalogParams};
pub use geometry::{FiberBlock, FiberModel, LapseFunction, WarpedProductSpec, WarpingFunction};
pub use ode::{OdeTrajectory, WarpingOde, WarpingOdeParams};
pub use verifier::{classify, verify, Label, ResidualReport, Tier, TypeLabel};
