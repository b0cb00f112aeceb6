use std::sync::Arc;

use super::profile::{AnalyticKind, AnalyticProfile, SampledProfile};
use crate::error::Result;
use crate::jet::{Jet, MAX_ORDER};
use crate::ode::OdeTrajectory;

/// Reporting tag for the origin of a warping or lapse profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WarpingKind {
    Analytic(AnalyticKind),
    Sampled,
    OdeBacked,
}

impl WarpingKind {
    pub fn name(&self) -> &'static str {
        match self {
            WarpingKind::Analytic(kind) => kind.name(),
            WarpingKind::Sampled => "sampled",
            WarpingKind::OdeBacked => "ode",
        }
    }
}

/// Positive warping function `h(s)` of one fiber block.
#[derive(Clone, Debug)]
pub enum WarpingFunction {
    Analytic(AnalyticProfile),
    Sampled(Arc<SampledProfile>),
    OdeBacked(Arc<OdeTrajectory>),
}

impl WarpingFunction {
    pub fn constant(c: f64) -> Self {
        WarpingFunction::Analytic(AnalyticProfile::constant(c))
    }

    /// Value and derivatives up to [`derivative_order`](Self::derivative_order) at `s`.
    pub fn jet(&self, s: f64) -> Result<Jet> {
        match self {
            WarpingFunction::Analytic(p) => Ok(p.jet(s)),
            WarpingFunction::Sampled(p) => p.jet(s),
            WarpingFunction::OdeBacked(t) => t.jet(s),
        }
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        self.jet(s).map(|j| j.value())
    }

    pub fn derivative_order(&self) -> usize {
        // All three backends supply four derivatives: closed forms, 7-point
        // stencils, and repeated differentiation of the ODE right-hand side.
        MAX_ORDER
    }

    pub fn kind(&self) -> WarpingKind {
        match self {
            WarpingFunction::Analytic(p) => WarpingKind::Analytic(p.kind()),
            WarpingFunction::Sampled(_) => WarpingKind::Sampled,
            WarpingFunction::OdeBacked(_) => WarpingKind::OdeBacked,
        }
    }

    /// True when `h' ≡ 0` structurally (constant analytic profile).
    pub fn is_structurally_constant(&self) -> bool {
        matches!(self, WarpingFunction::Analytic(p) if p.kind() == AnalyticKind::Constant)
    }
}

pub fn make_analytic_warping(kind: AnalyticKind, params: &[f64]) -> Result<WarpingFunction> {
    AnalyticProfile::new(kind, params).map(WarpingFunction::Analytic)
}

/// Sampled warping starting at `start` with uniform spacing `step`.
pub fn make_sampled_warping(samples: &[f64], start: f64, step: f64) -> Result<WarpingFunction> {
    SampledProfile::new(samples, start, step, true).map(|p| WarpingFunction::Sampled(Arc::new(p)))
}
