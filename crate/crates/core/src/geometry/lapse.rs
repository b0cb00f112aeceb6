use std::sync::Arc;

use super::profile::{AnalyticProfile, SampledProfile};
use super::warping::WarpingFunction;
use crate::error::Result;
use crate::jet::Jet;

/// Candidate lapse (static potential) `f(s)`.
#[derive(Clone, Debug)]
pub enum LapseFunction {
    /// Sum of closed-form terms.
    Analytic(Vec<AnalyticProfile>),
    /// `f = scale * h'` for a warping function `h`; `block` records which
    /// block of the spec `h` belongs to when known.
    DerivedFromWarping {
        warping: WarpingFunction,
        scale: f64,
        block: Option<usize>,
    },
    Sampled(Arc<SampledProfile>),
}

impl LapseFunction {
    pub fn analytic(term: AnalyticProfile) -> Self {
        LapseFunction::Analytic(vec![term])
    }

    pub fn constant(c: f64) -> Self {
        LapseFunction::analytic(AnalyticProfile::constant(c))
    }

    pub fn jet(&self, s: f64) -> Result<Jet> {
        match self {
            LapseFunction::Analytic(terms) => Ok(terms.iter().map(|t| t.jet(s)).sum()),
            LapseFunction::DerivedFromWarping { warping, scale, .. } => {
                Ok(warping.jet(s)?.derivative().scale(*scale))
            }
            LapseFunction::Sampled(p) => p.jet(s),
        }
    }

    pub fn derivative_order(&self) -> usize {
        match self {
            LapseFunction::DerivedFromWarping { warping, .. } => warping.derivative_order() - 1,
            _ => crate::jet::MAX_ORDER,
        }
    }

    /// `c * f`.
    pub fn scaled(&self, c: f64) -> Self {
        match self {
            LapseFunction::Analytic(terms) => {
                LapseFunction::Analytic(terms.iter().map(|t| t.scaled(c)).collect())
            }
            LapseFunction::DerivedFromWarping {
                warping,
                scale,
                block,
            } => LapseFunction::DerivedFromWarping {
                warping: warping.clone(),
                scale: scale * c,
                block: *block,
            },
            LapseFunction::Sampled(p) => LapseFunction::Sampled(Arc::new(p.scaled(c))),
        }
    }

    pub fn is_ode_backed(&self) -> bool {
        matches!(
            self,
            LapseFunction::DerivedFromWarping {
                warping: WarpingFunction::OdeBacked(_),
                ..
            }
        )
    }

    pub fn is_sampled(&self) -> bool {
        matches!(
            self,
            LapseFunction::Sampled(_)
                | LapseFunction::DerivedFromWarping {
                    warping: WarpingFunction::Sampled(_),
                    ..
                }
        )
    }
}
