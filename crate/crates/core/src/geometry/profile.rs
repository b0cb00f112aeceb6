//! Scalar profiles of the base coordinate: closed-form kinds and sampled data.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnalyticKind {
    Constant,
    Linear,
    Polynomial,
    SinScaled,
    CosScaled,
    SinhScaled,
    CoshScaled,
}

impl AnalyticKind {
    pub fn name(&self) -> &'static str {
        match self {
            AnalyticKind::Constant => "constant",
            AnalyticKind::Linear => "linear",
            AnalyticKind::Polynomial => "polynomial",
            AnalyticKind::SinScaled => "sin",
            AnalyticKind::CosScaled => "cos",
            AnalyticKind::SinhScaled => "sinh",
            AnalyticKind::CoshScaled => "cosh",
        }
    }

    fn is_oscillatory(&self) -> bool {
        matches!(
            self,
            AnalyticKind::SinScaled
                | AnalyticKind::CosScaled
                | AnalyticKind::SinhScaled
                | AnalyticKind::CoshScaled
        )
    }
}

impl fmt::Display for AnalyticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnalyticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "constant" | "const" => AnalyticKind::Constant,
            "linear" => AnalyticKind::Linear,
            "polynomial" | "poly" => AnalyticKind::Polynomial,
            "sin" | "sin-scaled" => AnalyticKind::SinScaled,
            "cos" | "cos-scaled" => AnalyticKind::CosScaled,
            "sinh" | "sinh-scaled" => AnalyticKind::SinhScaled,
            "cosh" | "cosh-scaled" => AnalyticKind::CoshScaled,
            _ => return Err(Error::UnsupportedKind(s.to_string())),
        };
        Ok(kind)
    }
}

/// A closed-form profile.
///
/// Parameter conventions:
/// - `constant`: `[c]`
/// - `linear`: `[a, b]` for `a + b s`
/// - `polynomial`: `[c0, c1, ...]` for `sum c_i s^i`
/// - `sin`/`cos`/`sinh`/`cosh`: `[amplitude, frequency, phase?]` for
///   `amplitude * trig(frequency * s + phase)`
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticProfile {
    kind: AnalyticKind,
    params: Vec<f64>,
}

impl AnalyticProfile {
    pub fn new(kind: AnalyticKind, params: &[f64]) -> Result<Self> {
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite parameter for `{kind}`"
            )));
        }
        let arity_ok = match kind {
            AnalyticKind::Constant => params.len() == 1,
            AnalyticKind::Linear => params.len() == 2,
            AnalyticKind::Polynomial => !params.is_empty(),
            _ => params.len() == 2 || params.len() == 3,
        };
        if !arity_ok {
            return Err(Error::InvalidParameter(format!(
                "`{kind}` does not take {} parameters",
                params.len()
            )));
        }
        if kind.is_oscillatory() && params[1] == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "`{kind}` needs a nonzero frequency"
            )));
        }
        let mut params = params.to_vec();
        if kind.is_oscillatory() && params.len() == 2 {
            params.push(0.0);
        }
        Ok(Self { kind, params })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            kind: AnalyticKind::Constant,
            params: vec![c],
        }
    }

    pub fn kind(&self) -> AnalyticKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn jet(&self, s: f64) -> Jet {
        let p = &self.params;
        match self.kind {
            AnalyticKind::Constant => Jet::constant(p[0]),
            AnalyticKind::Linear => Jet::from_derivatives(&[p[0] + p[1] * s, p[1], 0.0, 0.0, 0.0]),
            AnalyticKind::Polynomial => {
                let mut d = [0.0; MAX_ORDER + 1];
                for (k, slot) in d.iter_mut().enumerate() {
                    // d^k/ds^k sum c_i s^i = sum_{i>=k} c_i i!/(i-k)! s^(i-k)
                    let mut acc = 0.0;
                    for (i, c) in p.iter().enumerate().skip(k) {
                        let falling: f64 = ((i - k + 1)..=i).map(|m| m as f64).product();
                        acc += c * falling * s.powi((i - k) as i32);
                    }
                    *slot = acc;
                }
                Jet::from_derivatives(&d)
            }
            AnalyticKind::SinScaled | AnalyticKind::CosScaled => {
                let (amp, freq, phase) = (p[0], p[1], p[2]);
                let x = freq * s + phase;
                let (sn, cs) = x.sin_cos();
                let cycle = match self.kind {
                    AnalyticKind::SinScaled => [sn, cs, -sn, -cs],
                    _ => [cs, -sn, -cs, sn],
                };
                let mut d = [0.0; MAX_ORDER + 1];
                let mut w = amp;
                for (k, slot) in d.iter_mut().enumerate() {
                    *slot = w * cycle[k % 4];
                    w *= freq;
                }
                Jet::from_derivatives(&d)
            }
            AnalyticKind::SinhScaled | AnalyticKind::CoshScaled => {
                let (amp, freq, phase) = (p[0], p[1], p[2]);
                let x = freq * s + phase;
                let (sh, ch) = (x.sinh(), x.cosh());
                let pair = match self.kind {
                    AnalyticKind::SinhScaled => [sh, ch],
                    _ => [ch, sh],
                };
                let mut d = [0.0; MAX_ORDER + 1];
                let mut w = amp;
                for (k, slot) in d.iter_mut().enumerate() {
                    *slot = w * pair[k % 2];
                    w *= freq;
                }
                Jet::from_derivatives(&d)
            }
        }
    }

    /// The same profile multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut params = self.params.clone();
        match self.kind {
            AnalyticKind::Constant | AnalyticKind::Linear | AnalyticKind::Polynomial => {
                params.iter_mut().for_each(|x| *x *= c)
            }
            _ => params[0] *= c,
        }
        Self {
            kind: self.kind,
            params,
        }
    }
}

/// Minimum number of samples: the 7-point stencils need three neighbours on
/// each side, plus a small interior.
pub const MIN_SAMPLES: usize = 9;

const HALF_STENCIL: usize = 3;

/// Uniformly sampled profile with finite-difference derivatives.
///
/// Orders 1-2 use 5-point central stencils, orders 3-4 use 7-point ones.
/// Evaluation is restricted to nodes where the 7-point stencil fits; between
/// nodes the nearest node's jet is Taylor-shifted.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledProfile {
    start: f64,
    step: f64,
    samples: Vec<f64>,
    node_jets: Vec<Jet>,
}

impl SampledProfile {
    /// `require_positive` is set for warping functions; lapse samples may
    /// change sign.
    pub fn new(samples: &[f64], start: f64, step: f64, require_positive: bool) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                got: samples.len(),
                need: MIN_SAMPLES,
            });
        }
        if !(step > 0.0 && step.is_finite()) || !start.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sample step must be positive and finite, got {step}"
            )));
        }
        for (index, &value) in samples.iter().enumerate() {
            if !value.is_finite() || (require_positive && value <= 0.0) {
                return Err(Error::NonPositiveSample { index, value });
            }
        }
        let node_jets = (HALF_STENCIL..samples.len() - HALF_STENCIL)
            .map(|i| stencil_jet(samples, i, step))
            .collect();
        Ok(Self {
            start,
            step,
            samples: samples.to_vec(),
            node_jets,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Closed interval on which the profile can be evaluated.
    pub fn interior(&self) -> (f64, f64) {
        let lo = self.start + HALF_STENCIL as f64 * self.step;
        let hi = self.start + (self.samples.len() - 1 - HALF_STENCIL) as f64 * self.step;
        (lo, hi)
    }

    pub fn jet(&self, s: f64) -> Result<Jet> {
        let (lo, hi) = self.interior();
        let slack = 1e-9 * self.step;
        if !(s >= lo - slack && s <= hi + slack) {
            return Err(Error::OutOfDomain { s, lo, hi });
        }
        let pos = ((s - self.start) / self.step).round() as isize;
        let node = pos.clamp(
            HALF_STENCIL as isize,
            (self.samples.len() - 1 - HALF_STENCIL) as isize,
        ) as usize;
        let ds = s - (self.start + node as f64 * self.step);
        let jet = self.node_jets[node - HALF_STENCIL];
        Ok(if ds == 0.0 { jet } else { jet.shifted(ds) })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            start: self.start,
            step: self.step,
            samples: self.samples.iter().map(|x| x * c).collect(),
            node_jets: self.node_jets.iter().map(|j| j.scale(c)).collect(),
        }
    }
}

fn stencil_jet(f: &[f64], i: usize, h: f64) -> Jet {
    let at = |o: isize| f[(i as isize + o) as usize];
    let d1 = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
    let d2 = (-at(-2) + 16.0 * at(-1) - 30.0 * at(0) + 16.0 * at(1) - at(2)) / (12.0 * h * h);
    let d3 = (at(-3) - 8.0 * at(-2) + 13.0 * at(-1) - 13.0 * at(1) + 8.0 * at(2) - at(3))
        / (8.0 * h * h * h);
    let d4 = (-at(-3) + 12.0 * at(-2) - 39.0 * at(-1) + 56.0 * at(0) - 39.0 * at(1)
        + 12.0 * at(2)
        - at(3))
        / (6.0 * h * h * h * h);
    Jet::from_derivatives(&[at(0), d1, d2, d3, d4])
}
