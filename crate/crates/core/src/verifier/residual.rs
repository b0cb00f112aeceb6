use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{covariant_derivative, PointCurvature, Tensor};
use crate::error::{Error, Result};
use crate::geometry::{validate_pair, LapseFunction, WarpedProductSpec, WarpingKind};
use crate::jet::Jet;

/// Tolerance tier, picked from how the warping and lapse derivatives are
/// obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Analytic,
    OdeBacked,
    Sampled,
}

impl Tier {
    pub fn tolerance(self) -> f64 {
        match self {
            Tier::Analytic => 1e-8,
            Tier::OdeBacked => 1e-5,
            Tier::Sampled => 1e-4,
        }
    }

    /// Worst tier over the warping functions and the lapse.
    pub fn for_pair(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Tier {
        let mut tier = Tier::Analytic;
        for kind in spec.warping_kinds() {
            tier = tier.max(match kind {
                WarpingKind::Analytic(_) => Tier::Analytic,
                WarpingKind::OdeBacked => Tier::OdeBacked,
                WarpingKind::Sampled => Tier::Sampled,
            });
        }
        if lapse.is_sampled() {
            tier = Tier::Sampled;
        } else if lapse.is_ode_backed() {
            tier = tier.max(Tier::OdeBacked);
        }
        tier
    }
}

/// Tolerance floor for the Bach identity, which involves fourth derivatives.
pub const DB_TOLERANCE: f64 = 1e-6;

/// Sup-norm of one residual channel and where it is attained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelValue {
    pub sup: f64,
    pub index: usize,
    pub s: f64,
}

impl ChannelValue {
    fn fold(self, value: f64, index: usize, s: f64) -> Self {
        // NaN residuals must surface as failures
        if value.is_nan() || value > self.sup {
            Self {
                sup: if value.is_nan() { f64::INFINITY } else { value },
                index,
                s,
            }
        } else {
            self
        }
    }

    fn start(index: usize, s: f64) -> Self {
        Self { sup: 0.0, index, s }
    }
}

/// Sup-norm residuals of a (spec, lapse) pair over the margin-shrunk grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub tier: Tier,
    pub tolerance: f64,
    pub static_11: ChannelValue,
    pub static_block: Vec<ChannelValue>,
    pub harmonic_block: Vec<ChannelValue>,
    pub scalar_drift: ChannelValue,
    pub integrability_block: Vec<ChannelValue>,
    pub dcw_block: Option<Vec<ChannelValue>>,
    pub db_block: Option<Vec<ChannelValue>>,
    pub lemma41_46: Option<ChannelValue>,
    pub lemma41_47: Option<ChannelValue>,
}

impl ResidualReport {
    /// Static and harmonic-curvature channels, the hypotheses of the
    /// classification.
    pub fn hypotheses_hold(&self, tol: f64) -> bool {
        self.static_11.sup <= tol
            && self.static_block.iter().all(|c| c.sup <= tol)
            && self.harmonic_block.iter().all(|c| c.sup <= tol)
            && self.scalar_drift.sup <= tol
    }

    /// Names of the channels exceeding their threshold; `tol` applies to all
    /// channels except the Bach identity, which uses `max(tol, DB_TOLERANCE)`.
    pub fn failures(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: String, c: &ChannelValue, t: f64| {
            if !(c.sup <= t) {
                out.push(name);
            }
        };
        check("static_11".into(), &self.static_11, tol);
        for (j, c) in self.static_block.iter().enumerate() {
            check(format!("static_block[{j}]"), c, tol);
        }
        for (j, c) in self.harmonic_block.iter().enumerate() {
            check(format!("harmonic_block[{j}]"), c, tol);
        }
        check("scalar_drift".into(), &self.scalar_drift, tol);
        for (j, c) in self.integrability_block.iter().enumerate() {
            check(format!("integrability_block[{j}]"), c, tol);
        }
        for (j, c) in self.dcw_block.iter().flatten().enumerate() {
            check(format!("dcw_block[{j}]"), c, tol);
        }
        for (j, c) in self.db_block.iter().flatten().enumerate() {
            check(format!("db_block[{j}]"), c, tol.max(DB_TOLERANCE));
        }
        if let Some(c) = &self.lemma41_46 {
            check("lemma41_46".into(), c, tol);
        }
        if let Some(c) = &self.lemma41_47 {
            check("lemma41_47".into(), c, tol);
        }
        out
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.failures(tol).is_empty()
    }
}

/// Everything the verifier and classifier need at one grid point.
#[derive(Clone, Debug)]
pub(crate) struct PointSample {
    pub index: usize,
    pub s: f64,
    pub lambda1: f64,
    pub lambda: Vec<f64>,
    pub scalar: f64,
    pub h: Vec<[f64; 3]>,
    pub xi: Vec<f64>,
    pub d_max: f64,
    pub static_11: f64,
    pub static_block: Vec<f64>,
    pub harmonic_block: Vec<f64>,
    pub scalar_drift: f64,
    pub integrability_block: Vec<f64>,
    pub dcw_block: Option<Vec<f64>>,
    pub db_block: Option<Vec<f64>>,
    pub lemma41: Option<(f64, f64)>,
}

fn entry_block(layout: &[Option<usize>], idx: &[usize]) -> Option<usize> {
    idx.iter().find_map(|&i| layout[i])
}

/// Per-block sup of `|t|`, attributing each entry to the block of its first
/// fiber index; entries along `E_1` only count for every block.
fn per_block_max(t: &Tensor<f64>, layout: &[Option<usize>], blocks: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; blocks];
    t.for_each(|idx, v| {
        let v = if v.is_nan() { f64::INFINITY } else { v.abs() };
        match entry_block(layout, idx) {
            Some(b) => out[b] = out[b].max(v),
            None => out.iter_mut().for_each(|o| *o = o.max(v)),
        }
    });
    out
}

fn dcw_residual(p: &PointCurvature, f: Jet) -> Result<Vec<f64>> {
    let layout = p.layout();
    let n = layout.len();
    let fv = f.value();
    let df = f.derivative().value();
    let c = p.cotton().map(|x| x.value()).materialize(layout);
    let w = p.weyl()?.map(|x| x.value()).materialize(layout);
    let d = p.d_tensor(f).map(|x| x.value()).materialize(layout);
    let r = Tensor::from_fn(n, 3, |i| {
        fv * c.get(i) - df * w.get(&[0, i[0], i[1], i[2]]) - d.get(i)
    });
    Ok(per_block_max(&r, layout, p.block_dims().len()))
}

fn db_residual(p: &PointCurvature, f: Jet) -> Result<Vec<f64>> {
    let layout = p.layout();
    let n = layout.len();
    let nf = n as f64;
    let fv = f.value();
    let df = f.derivative().value();
    let b = p.bach()?.map(|x| x.value()).materialize(layout);
    let c = p.cotton().map(|x| x.value()).materialize(layout);
    let d = p.d_tensor(f).materialize(layout);
    let dd = covariant_derivative(&d, &p.connection()).values();
    let r = Tensor::from_fn(n, 2, |ij| {
        let (i, j) = (ij[0], ij[1]);
        let div: f64 = (0..n).map(|k| dd.get(&[i, j, k, k])).sum();
        (nf - 2.0) * fv * b.get(ij) - div
            + df * (c.get(&[i, j, 0]) + (nf - 3.0) / (nf - 2.0) * c.get(&[j, i, 0]))
    });
    Ok(per_block_max(&r, layout, p.block_dims().len()))
}

/// The two-block warping identities (derivative of `X - Y`, and the
/// trace relation) multiplied through by `f`.
fn lemma41_residual(p: &PointCurvature, f: Jet, k: [f64; 2]) -> (f64, f64) {
    let dims = p.block_dims();
    let (x, y) = (p.xi()[0].value(), p.xi()[1].value());
    let (h1, h2) = (p.warping()[0].value(), p.warping()[1].value());
    let fv = f.value();
    let df = f.derivative().value();
    let sum = p.xi_trace().value();
    let intrinsic = |r: usize, k: f64, h: f64| (r as f64 - 1.0) * k / (h * h);
    let eq46 = (2.0 * df + fv * (sum - (x + y))) * (x - y)
        - fv * (intrinsic(dims[0], k[0], h1) - intrinsic(dims[1], k[1], h2));
    let mut sum_d = 0.0;
    let mut sum_sq = 0.0;
    for (xi, &r) in p.xi().iter().zip(dims) {
        sum_d += r as f64 * xi.derivative().value();
        sum_sq += r as f64 * xi.value() * xi.value();
    }
    let eq47 = -df * sum + fv * sum_d + 2.0 * fv * sum_sq - fv * (x + y) * sum;
    (eq46.abs(), eq47.abs())
}

pub(crate) fn sample_point(
    spec: &WarpedProductSpec,
    lapse: &LapseFunction,
    index: usize,
    full_fibers: bool,
) -> Result<PointSample> {
    let s = spec.grid_point(index);
    let p = PointCurvature::at(spec, s)?;
    let f = lapse.jet(s)?;
    let n = p.dim() as f64;
    let ric = p.ricci();
    let (fv, df, d2f) = (f.value(), f.raw(1), f.raw(2));
    let scalar = ric.scalar.value();
    let l1 = ric.lambda1.value();
    let shift = scalar / (n - 1.0);
    let blocks = p.block_dims().len();
    let xi: Vec<f64> = p.xi().iter().map(Jet::value).collect();
    let lambda: Vec<f64> = ric.lambda_block.iter().map(Jet::value).collect();
    let mut static_block = Vec::with_capacity(blocks);
    let mut harmonic_block = Vec::with_capacity(blocks);
    let mut integrability_block = Vec::with_capacity(blocks);
    for j in 0..blocks {
        static_block.push((df * xi[j] - fv * (lambda[j] - shift)).abs());
        harmonic_block
            .push((ric.lambda_block[j].raw(1) - (l1 - lambda[j]) * xi[j]).abs());
        let x = p.xi()[j];
        integrability_block.push((x.raw(1) + xi[j] * xi[j] - lambda[j] + shift).abs());
    }
    let (dcw_block, db_block) = if full_fibers {
        (Some(dcw_residual(&p, f)?), Some(db_residual(&p, f)?))
    } else {
        (None, None)
    };
    let lemma41 = (blocks == 2)
        .then(|| lemma41_residual(&p, f, [spec.block(0).k(), spec.block(1).k()]));
    Ok(PointSample {
        index,
        s,
        lambda1: l1,
        scalar,
        h: p
            .warping()
            .iter()
            .map(|h| [h.value(), h.raw(1), h.raw(2)])
            .collect(),
        d_max: p.d_tensor(f).block.iter().map(|d| d.value().abs()).fold(0.0, f64::max),
        static_11: (d2f - fv * (l1 - shift)).abs(),
        static_block,
        harmonic_block,
        scalar_drift: ric.scalar.raw(1).abs(),
        integrability_block,
        dcw_block,
        db_block,
        lemma41,
        lambda,
        xi,
    })
}

fn check_orders(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Result<()> {
    let available = spec.derivative_order();
    if available < 3 {
        return Err(Error::DerivativeOrderUnavailable {
            needed: 3,
            available,
        });
    }
    if lapse.derivative_order() < 2 {
        return Err(Error::DerivativeOrderUnavailable {
            needed: 2,
            available: lapse.derivative_order(),
        });
    }
    Ok(())
}

/// Samples every margin grid point, in parallel, in grid order.
pub(crate) fn sample_grid(
    spec: &WarpedProductSpec,
    lapse: &LapseFunction,
) -> Result<Vec<PointSample>> {
    let validation = validate_pair(spec, lapse);
    if !validation.ok {
        let first = &validation.violations[0];
        return Err(Error::InvalidSpec(format!(
            "{} ({} violation(s); first at index {:?}, value {})",
            first.constraint,
            validation.violations.len(),
            first.index,
            first.value
        )));
    }
    check_orders(spec, lapse)?;
    let full = spec.first_partial_fiber().is_none() && spec.derivative_order() >= 4;
    let indices: Vec<usize> = spec.margin_indices().collect();
    if indices.is_empty() {
        return Err(Error::InvalidSpec("grid has no interior points".into()));
    }
    indices
        .par_iter()
        .map(|&i| sample_point(spec, lapse, i, full))
        .collect()
}

fn reduce_scalar(samples: &[PointSample], pick: impl Fn(&PointSample) -> f64) -> ChannelValue {
    let first = &samples[0];
    samples
        .iter()
        .fold(ChannelValue::start(first.index, first.s), |acc, p| {
            acc.fold(pick(p), p.index, p.s)
        })
}

fn reduce_blocks(
    samples: &[PointSample],
    blocks: usize,
    pick: impl Fn(&PointSample) -> Option<&Vec<f64>>,
) -> Option<Vec<ChannelValue>> {
    pick(&samples[0])?;
    Some(
        (0..blocks)
            .map(|j| reduce_scalar(samples, |p| pick(p).map_or(f64::INFINITY, |v| v[j])))
            .collect(),
    )
}

pub(crate) fn build_report(
    spec: &WarpedProductSpec,
    tier: Tier,
    samples: &[PointSample],
) -> ResidualReport {
    let blocks = spec.blocks().len();
    let lemma = samples[0].lemma41.is_some() && lemma_applies(samples);
    ResidualReport {
        tier,
        tolerance: tier.tolerance(),
        static_11: reduce_scalar(samples, |p| p.static_11),
        static_block: reduce_blocks(samples, blocks, |p| Some(&p.static_block)).unwrap(),
        harmonic_block: reduce_blocks(samples, blocks, |p| Some(&p.harmonic_block)).unwrap(),
        scalar_drift: reduce_scalar(samples, |p| p.scalar_drift),
        integrability_block: reduce_blocks(samples, blocks, |p| Some(&p.integrability_block))
            .unwrap(),
        dcw_block: reduce_blocks(samples, blocks, |p| p.dcw_block.as_ref()),
        db_block: reduce_blocks(samples, blocks, |p| p.db_block.as_ref()),
        lemma41_46: lemma.then(|| reduce_scalar(samples, |p| p.lemma41.map_or(0.0, |l| l.0))),
        lemma41_47: lemma.then(|| reduce_scalar(samples, |p| p.lemma41.map_or(0.0, |l| l.1))),
    }
}

/// Relative gap below which two eigenvalue profiles count as equal.
pub const DEFAULT_GAP: f64 = 1e-6;

pub(crate) fn eigen_gap(samples: &[PointSample], relative: f64) -> f64 {
    let scale = samples
        .iter()
        .flat_map(|p| std::iter::once(p.lambda1).chain(p.lambda.iter().copied()))
        .fold(0.0f64, |a, l| a.max(l.abs()));
    relative * scale + 1e-12
}

pub(crate) fn profile_distance(samples: &[PointSample], j: usize, k: usize) -> f64 {
    samples
        .iter()
        .map(|p| (p.lambda[j] - p.lambda[k]).abs())
        .fold(0.0, f64::max)
}

/// The two-block identities only hold when the blocks carry distinct
/// eigenvalue profiles.
fn lemma_applies(samples: &[PointSample]) -> bool {
    profile_distance(samples, 0, 1) > eigen_gap(samples, DEFAULT_GAP)
}

/// Full residual report at the tier selected from the pair.
pub fn verify(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Result<ResidualReport> {
    let samples = sample_grid(spec, lapse)?;
    Ok(build_report(spec, Tier::for_pair(spec, lapse), &samples))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StaticChannels {
    pub static_11: ChannelValue,
    pub static_block: Vec<ChannelValue>,
}

/// Hessian form of the static equation, `Hess f = f(Ric - R/(n-1) g)`.
pub fn static_residual(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Result<StaticChannels> {
    let r = verify(spec, lapse)?;
    Ok(StaticChannels {
        static_11: r.static_11,
        static_block: r.static_block,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicChannels {
    pub harmonic_block: Vec<ChannelValue>,
    pub scalar_drift: ChannelValue,
}

/// Codazzi condition on the Ricci eigenvalues and constancy of `R`.
pub fn harmonic_residual(
    spec: &WarpedProductSpec,
    lapse: &LapseFunction,
) -> Result<HarmonicChannels> {
    let r = verify(spec, lapse)?;
    Ok(HarmonicChannels {
        harmonic_block: r.harmonic_block,
        scalar_drift: r.scalar_drift,
    })
}

/// `|ξ' + ξ² - λ + R/(n-1)|` per block; depends on the metric only.
pub fn integrability_residual(spec: &WarpedProductSpec) -> Result<Vec<ChannelValue>> {
    let r = verify(spec, &LapseFunction::constant(1.0))?;
    Ok(r.integrability_block)
}

fn require_full(spec: &WarpedProductSpec) -> Result<()> {
    if let Some(block) = spec.first_partial_fiber() {
        return Err(Error::InsufficientFiberData {
            block,
            dim: spec.block(block).dim(),
        });
    }
    Ok(())
}

/// `f C_{ijk} - f_l W_{lijk} - D_{ijk}` on dense frame tensors.
pub fn identity_dcw(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Result<Vec<ChannelValue>> {
    require_full(spec)?;
    let available = spec.derivative_order();
    if available < 4 {
        return Err(Error::DerivativeOrderUnavailable {
            needed: 4,
            available,
        });
    }
    Ok(verify(spec, lapse)?.dcw_block.unwrap())
}

/// `(n-2) f B_{ij} - D_{ijk,k} + f_k (C_{ijk} + (n-3)/(n-2) C_{jik})` on dense
/// frame tensors.
pub fn identity_db(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Result<Vec<ChannelValue>> {
    require_full(spec)?;
    let available = spec.derivative_order();
    if available < 4 {
        return Err(Error::DerivativeOrderUnavailable {
            needed: 4,
            available,
        });
    }
    Ok(verify(spec, lapse)?.db_block.unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lemma41Channels {
    pub lemma41_46: ChannelValue,
    pub lemma41_47: ChannelValue,
}

/// Both two-block identities with `X = ξ_0`, `Y = ξ_1`, multiplied by `f`.
pub fn check_lemma41(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Result<Lemma41Channels> {
    if spec.blocks().len() != 2 {
        return Err(Error::WrongBlockCount {
            expected: 2,
            got: spec.blocks().len(),
        });
    }
    let samples = sample_grid(spec, lapse)?;
    Ok(Lemma41Channels {
        lemma41_46: reduce_scalar(&samples, |p| p.lemma41.unwrap().0),
        lemma41_47: reduce_scalar(&samples, |p| p.lemma41.unwrap().1),
    })
}
