//! Frame-component curvature of `ds² + Σ h_j(s)² g_j`.
//!
//! Frame index 0 is `E_1 = ∂_s`; fiber directions follow block by block.
//! Sign conventions: `R_{ij} = Σ_k R_{ikjk}`, and the unit sphere has
//! `R_{1a1a} = +1`.

mod classes;
pub mod dense;
mod point;

pub use classes::{DiagonalTwoTensor, MixedThreeTensor, RicciSpectrum, RiemannClasses};
pub use dense::{covariant_derivative, trace_pair, trace_with_last, FrameConnection, Tensor};
pub use point::PointCurvature;

use crate::error::{Error, Result};
use crate::geometry::{LapseFunction, WarpedProductSpec};
use crate::jet::{Jet, Scalar};

fn require_order(spec: &WarpedProductSpec, needed: usize) -> Result<()> {
    let available = spec.derivative_order();
    if available < needed {
        Err(Error::DerivativeOrderUnavailable { needed, available })
    } else {
        Ok(())
    }
}

fn value(j: &Jet) -> f64 {
    j.value()
}

/// `ξ_j = h_j'/h_j` per block.
pub fn xi_profile(spec: &WarpedProductSpec, s: f64) -> Result<Vec<f64>> {
    require_order(spec, 1)?;
    Ok(PointCurvature::at(spec, s)?.xi().iter().map(value).collect())
}

pub fn ricci_spectrum(spec: &WarpedProductSpec, s: f64) -> Result<RicciSpectrum> {
    require_order(spec, 2)?;
    let r = PointCurvature::at(spec, s)?.ricci();
    Ok(RicciSpectrum {
        lambda1: r.lambda1.value(),
        lambda_block: r.lambda_block.iter().map(value).collect(),
        scalar: r.scalar.value(),
    })
}

/// Scalar curvature at each point of `grid`.
pub fn scalar_profile(spec: &WarpedProductSpec, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&s| ricci_spectrum(spec, s).map(|r| r.scalar))
        .collect()
}

pub fn riemann_classes(spec: &WarpedProductSpec, s: f64) -> Result<RiemannClasses> {
    require_order(spec, 2)?;
    Ok(PointCurvature::at(spec, s)?.riemann()?.map(value))
}

pub fn schouten_spectrum(spec: &WarpedProductSpec, s: f64) -> Result<DiagonalTwoTensor> {
    require_order(spec, 2)?;
    Ok(PointCurvature::at(spec, s)?.schouten().map(value))
}

pub fn weyl_classes(spec: &WarpedProductSpec, s: f64) -> Result<RiemannClasses> {
    require_order(spec, 2)?;
    Ok(PointCurvature::at(spec, s)?.weyl()?.map(value))
}

/// `C_{a1a}` per block; the Cotton tensor depends on the metric only.
pub fn cotton_classes(spec: &WarpedProductSpec, s: f64) -> Result<MixedThreeTensor> {
    require_order(spec, 3)?;
    Ok(PointCurvature::at(spec, s)?.cotton().map(value))
}

pub fn cotton_from_weyl_divergence(spec: &WarpedProductSpec, s: f64) -> Result<MixedThreeTensor> {
    require_order(spec, 3)?;
    Ok(PointCurvature::at(spec, s)?.cotton_from_weyl()?.map(value))
}

/// `D_{a1a}` per block for the lapse `f`.
pub fn d_tensor_classes(
    spec: &WarpedProductSpec,
    lapse: &LapseFunction,
    s: f64,
) -> Result<MixedThreeTensor> {
    require_order(spec, 2)?;
    let point = PointCurvature::at(spec, s)?;
    let f = lapse.jet(s)?;
    if f.get(1).is_none() {
        return Err(Error::DerivativeOrderUnavailable {
            needed: 1,
            available: lapse.derivative_order(),
        });
    }
    Ok(point.d_tensor(f).map(value))
}

pub fn bach_spectrum(spec: &WarpedProductSpec, s: f64) -> Result<DiagonalTwoTensor> {
    require_order(spec, 4)?;
    Ok(PointCurvature::at(spec, s)?.bach()?.map(value))
}

/// Class containers that expand to dense frame tensors.
pub trait Materialize<T: Scalar> {
    fn materialize(&self, layout: &[Option<usize>]) -> Tensor<T>;
}

impl<T: Scalar> Materialize<T> for RiemannClasses<T> {
    fn materialize(&self, layout: &[Option<usize>]) -> Tensor<T> {
        RiemannClasses::materialize(self, layout)
    }
}

impl<T: Scalar> Materialize<T> for DiagonalTwoTensor<T> {
    fn materialize(&self, layout: &[Option<usize>]) -> Tensor<T> {
        DiagonalTwoTensor::materialize(self, layout)
    }
}

impl<T: Scalar> Materialize<T> for MixedThreeTensor<T> {
    fn materialize(&self, layout: &[Option<usize>]) -> Tensor<T> {
        MixedThreeTensor::materialize(self, layout)
    }
}

/// Dense frame tensor of `classes` in the frame layout of `spec`.
pub fn materialize_full<C: Materialize<f64>>(classes: &C, spec: &WarpedProductSpec) -> Tensor {
    classes.materialize(&spec.frame_blocks())
}
