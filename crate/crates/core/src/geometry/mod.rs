//! Multiply warped-product metrics `ds² + Σ h_j(s)² g_j` in the adapted
//! orthonormal frame: warping and lapse profiles, fiber blocks, and spec
//! validation.

mod lapse;
mod profile;
mod spec;
mod warping;

pub use lapse::LapseFunction;
pub use profile::{AnalyticKind, AnalyticProfile, SampledProfile, MIN_SAMPLES};
pub use spec::{
    validate_pair, validate_spec, FiberBlock, FiberModel, ValidationReport, Violation,
    WarpedProductSpec, DEFAULT_GRID_POINTS, MARGIN_STEPS,
};
pub use warping::{make_analytic_warping, make_sampled_warping, WarpingFunction, WarpingKind};
