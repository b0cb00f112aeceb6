//! Constructors for the known vacuum static spaces with harmonic curvature,
//! each as a (spec, lapse) pair with its expected classification.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{
    make_analytic_warping, AnalyticKind, AnalyticProfile, FiberBlock, LapseFunction,
    WarpedProductSpec, WarpingFunction, DEFAULT_GRID_POINTS,
};
use crate::ode::{
    exceeds_threshold, find_periodic, integrate_warping, k0_threshold, lapse_from_warping,
    PeriodicSearch, WarpingOde, WarpingOdeParams,
};
use crate::verifier::{Label, Tier};

/// Stable catalog identifiers.
pub const NAMES: [&str; 10] = [
    "example1",
    "example2",
    "example3",
    "example4",
    "example5",
    "type_ii",
    "type_iii",
    "type_iv",
    "round_sphere",
    "flat",
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: WarpedProductSpec,
    pub lapse: LapseFunction,
    pub expected: Label,
    pub compact: bool,
    pub period: Option<f64>,
}

impl CatalogEntry {
    fn new(name: &str, spec: WarpedProductSpec, lapse: LapseFunction, expected: Label) -> Self {
        Self {
            name: name.to_string(),
            spec,
            lapse,
            expected,
            compact: false,
            period: None,
        }
    }

    fn compact(mut self, name: &str, period: f64) -> Self {
        self.name = name.to_string();
        self.compact = true;
        self.period = Some(period);
        self
    }

    pub fn tier(&self) -> Tier {
        Tier::for_pair(&self.spec, &self.lapse)
    }

    /// Same geometry with the lapse multiplied by `c`.
    pub fn with_lapse_scale(&self, c: f64) -> Self {
        Self {
            lapse: self.lapse.scaled(c),
            ..self.clone()
        }
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.spec = self.spec.with_grid_points(grid_points);
        self
    }
}

/// Optional parameters for [`build`]; unset fields take per-entry defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CatalogParams {
    pub n: Option<usize>,
    pub scalar: Option<f64>,
    pub k: Option<f64>,
    pub c0: Option<f64>,
    pub r: Option<usize>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub scale: Option<f64>,
    pub length: Option<f64>,
}

pub fn names() -> &'static [&'static str] {
    &NAMES
}

/// Builds a catalog entry by name.
pub fn build(name: &str, p: &CatalogParams) -> Result<CatalogEntry> {
    let scale = p.scale.unwrap_or(1.0);
    match name {
        "example1" => build_example1(
            p.n.unwrap_or(5),
            p.k.unwrap_or(1.0 / 3.0),
            p.c1.unwrap_or(1.0),
            p.c2.unwrap_or(0.0),
        ),
        "example2" => build_example2(
            p.n.unwrap_or(5),
            p.k.unwrap_or(1.0 / 3.0),
            p.c1.unwrap_or(1.0),
            p.c2.unwrap_or(0.0),
        ),
        "example3" => build_example3(
            p.n.unwrap_or(5),
            p.scalar.unwrap_or(20.0),
            p.c0.unwrap_or(1.0),
            p.k.unwrap_or(2.0),
            scale,
        ),
        "example4" => build_example4(
            p.n.unwrap_or(5),
            p.scalar.unwrap_or(20.0),
            p.c0.unwrap_or(1.0),
            p.k.unwrap_or(2.0),
            scale,
        ),
        "example5" => build_example5(
            p.n.unwrap_or(5),
            p.scalar.unwrap_or(-20.0),
            p.c0.unwrap_or(1.0),
            p.k.unwrap_or(1.0),
            scale,
            p.length.unwrap_or(1.0),
        ),
        "type_ii" => build_type_ii(p.n.unwrap_or(5), p.scalar.unwrap_or(8.0)),
        "type_iii" => build_type_iii(p.n.unwrap_or(5), p.scalar.unwrap_or(-8.0)),
        "type_iv" => build_type_iv(
            p.n.unwrap_or(6),
            p.r.unwrap_or(3),
            p.scalar.unwrap_or(5.0),
            p.c0.unwrap_or(1.0),
            p.k.unwrap_or(2.5),
            scale,
        ),
        "round_sphere" => build_round_sphere(p.n.unwrap_or(5)),
        "flat" => build_flat(p.n.unwrap_or(4)),
        other => Err(Error::UnknownEntry(other.to_string())),
    }
}

/// Every entry at its default parameters.
pub fn build_all() -> Result<Vec<CatalogEntry>> {
    NAMES
        .iter()
        .map(|name| build(name, &CatalogParams::default()))
        .collect()
}

fn require_dim(n: usize, needed: usize) -> Result<()> {
    if n < needed {
        Err(Error::DimensionTooLow { needed, got: n })
    } else {
        Ok(())
    }
}

fn trig(kind: AnalyticKind, amp: f64, freq: f64) -> Result<AnalyticProfile> {
    AnalyticProfile::new(kind, &[amp, freq])
}

/// `R × N^{n-1}(k)` with `f = c1 sin(ωs) + c2 cos(ωs)` (hyperbolic for
/// `k < 0`), `ω = sqrt((n-2)|k|)`.
pub fn build_example1(n: usize, k: f64, c1: f64, c2: f64) -> Result<CatalogEntry> {
    require_dim(n, 4)?;
    if k == 0.0 {
        return Err(Error::ZeroK);
    }
    if c1 == 0.0 && c2 == 0.0 {
        return Err(Error::ZeroScale);
    }
    let omega = ((n as f64 - 2.0) * k.abs()).sqrt();
    let (sin, cos, length) = if k > 0.0 {
        (AnalyticKind::SinScaled, AnalyticKind::CosScaled, 2.0 * PI / omega)
    } else {
        (AnalyticKind::SinhScaled, AnalyticKind::CoshScaled, 2.0 / omega)
    };
    let lapse = LapseFunction::Analytic(vec![trig(sin, c1, omega)?, trig(cos, c2, omega)?]);
    let spec = WarpedProductSpec::new(
        vec![FiberBlock::space_form(n - 1, k, WarpingFunction::constant(1.0))],
        (0.0, length),
        DEFAULT_GRID_POINTS,
    );
    Ok(CatalogEntry::new("example1", spec, lapse, Label::DFlatTypeI))
}

/// [`build_example1`] with `k > 0`, flagged compact with period `2π/ω`.
pub fn build_example2(n: usize, k: f64, c1: f64, c2: f64) -> Result<CatalogEntry> {
    if k < 0.0 {
        return Err(Error::BadRange(format!("compact quotient needs k > 0, got {k}")));
    }
    let entry = build_example1(n, k, c1, c2)?;
    let period = 2.0 * PI / ((n as f64 - 2.0) * k).sqrt();
    Ok(entry.compact("example2", period))
}

fn derived_lapse(h: &WarpingFunction, c: f64, block: usize) -> Result<LapseFunction> {
    match lapse_from_warping(h, c)? {
        LapseFunction::DerivedFromWarping { warping, scale, .. } => Ok(LapseFunction::DerivedFromWarping {
            warping,
            scale,
            block: Some(block),
        }),
        other => Ok(other),
    }
}

fn outer_turning_point(ode: &WarpingOde, k: f64) -> Option<f64> {
    ode.turning_points(k).last().copied()
}

/// `R ×_h N^{n-1}` with `h` the periodic solution of the D-flat warping
/// equation with forcing `a` and first integral `k`, and `f = c h'`. The
/// fiber carries sectional curvature `k`; the domain is one period starting
/// at the maximum of `h`.
pub fn build_example3(n: usize, scalar: f64, a: f64, k: f64, c: f64) -> Result<CatalogEntry> {
    require_dim(n, 4)?;
    let k0 = k0_threshold(n, scalar, a)?;
    if !exceeds_threshold(k, k0) {
        return Err(Error::BelowThreshold { k, k0 });
    }
    let ode = WarpingOde::dflat(n, scalar, a)?;
    let orbit = find_periodic(&PeriodicSearch::new(ode, k))?.ok_or(Error::BelowThreshold { k, k0 })?;
    let traj = integrate_warping(&WarpingOdeParams::new(ode, orbit.h_max, 0.0, 0.0, orbit.period))?;
    let h = traj.into_warping();
    let lapse = derived_lapse(&h, c, 0)?;
    let spec = WarpedProductSpec::new(
        vec![FiberBlock::space_form(n - 1, k, h)],
        (0.0, orbit.period),
        DEFAULT_GRID_POINTS,
    );
    let mut entry = CatalogEntry::new("example3", spec, lapse, Label::DFlatTypeI);
    entry.period = Some(orbit.period);
    Ok(entry)
}

/// [`build_example3`] flagged compact: `h` and `f = c h'` share the period.
pub fn build_example4(n: usize, scalar: f64, a: f64, k: f64, c: f64) -> Result<CatalogEntry> {
    let entry = build_example3(n, scalar, a, k, c)?;
    let period = entry.period.unwrap();
    Ok(entry.compact("example4", period))
}

/// Raw D-flat warped product: integrates the warping equation for arbitrary
/// `(R, c0, k)` on `[0, length]`, starting at a turning point of the first
/// integral when one exists and at `h = 1` otherwise.
pub fn build_example5(
    n: usize,
    scalar: f64,
    c0: f64,
    k: f64,
    c: f64,
    length: f64,
) -> Result<CatalogEntry> {
    require_dim(n, 4)?;
    let ode = WarpingOde::dflat(n, scalar, c0)?;
    let (h0, dh0) = match outer_turning_point(&ode, k) {
        Some(h) => (h, 0.0),
        None => {
            let v = ode.potential(1.0);
            if k < v {
                return Err(Error::BadRange(format!(
                    "first integral k = {k} below the potential {v} at h = 1"
                )));
            }
            (1.0, (k - v).sqrt())
        }
    };
    let traj = integrate_warping(&WarpingOdeParams::new(ode, h0, dh0, 0.0, length))?;
    let h = traj.into_warping();
    let lapse = derived_lapse(&h, c, 0)?;
    let spec = WarpedProductSpec::new(
        vec![FiberBlock::space_form(n - 1, k, h)],
        (0.0, length),
        DEFAULT_GRID_POINTS,
    );
    Ok(CatalogEntry::new("example5", spec, lapse, Label::DFlatTypeI))
}

fn two_dim_factor(n: usize, scalar: f64, positive: bool) -> Result<CatalogEntry> {
    require_dim(n, 4)?;
    if (positive && !(scalar > 0.0)) || (!positive && !(scalar < 0.0)) {
        return Err(Error::WrongSign(scalar));
    }
    let r0 = (scalar.abs() / (2.0 * (n as f64 - 1.0))).sqrt();
    let fiber_k = scalar / ((n as f64 - 1.0) * (n as f64 - 3.0));
    let delta = 0.01 / r0;
    let (warp, lapse, domain, name, label) = if positive {
        (
            AnalyticKind::SinScaled,
            AnalyticKind::CosScaled,
            (delta, PI / r0 - delta),
            "type_ii",
            Label::TypeII,
        )
    } else {
        (
            AnalyticKind::SinhScaled,
            AnalyticKind::CoshScaled,
            (delta, 3.0 / r0),
            "type_iii",
            Label::TypeIII,
        )
    };
    let spec = WarpedProductSpec::new(
        vec![
            FiberBlock::line(make_analytic_warping(warp, &[1.0, r0])?),
            FiberBlock::space_form(n - 2, fiber_k, WarpingFunction::constant(1.0)),
        ],
        domain,
        DEFAULT_GRID_POINTS,
    );
    let lapse = LapseFunction::analytic(trig(lapse, 1.0, r0)?);
    Ok(CatalogEntry::new(name, spec, lapse, label))
}

/// `S²`-type factor `ds² + sin²(r0 s) dθ²` times an Einstein space with
/// constant `R/(n-1)`, `f = cos(r0 s)`, `r0 = sqrt(R/(2(n-1)))`.
pub fn build_type_ii(n: usize, scalar: f64) -> Result<CatalogEntry> {
    two_dim_factor(n, scalar, true)
}

/// Hyperbolic counterpart of [`build_type_ii`] for `R < 0`.
pub fn build_type_iii(n: usize, scalar: f64) -> Result<CatalogEntry> {
    two_dim_factor(n, scalar, false)
}

/// Product `W^r × N^{n-r}`: `W = ds² + h² g_{r-1}` with `h` solving the
/// warped-factor equation (exponent `r - 1`) at first integral `k`, `N` an
/// Einstein space with constant `R/(n-1)` (a line when `r = n - 1`, which
/// forces `R = 0`), and `f = c h'`.
pub fn build_type_iv(
    n: usize,
    r: usize,
    scalar: f64,
    c0: f64,
    k: f64,
    c: f64,
) -> Result<CatalogEntry> {
    if r < 3 || r + 1 > n {
        return Err(Error::BadRange(format!("r = {r} outside 3..=n-1 for n = {n}")));
    }
    if r == n - 1 && scalar != 0.0 {
        return Err(Error::ZeroScalarRequired(scalar));
    }
    let ode = WarpingOde::product_factor(n, r - 1, scalar, c0)?;
    let Some(h0) = outer_turning_point(&ode, k) else {
        return Err(Error::BadRange(format!(
            "first integral k = {k} is never reached by the potential"
        )));
    };
    let periodic = find_periodic(&PeriodicSearch::new(ode, k))?;
    let length = periodic.as_ref().map_or(1.0, |p| p.period);
    let traj = integrate_warping(&WarpingOdeParams::new(ode, h0, 0.0, 0.0, length))?;
    let h = traj.into_warping();
    let lapse = derived_lapse(&h, c, 0)?;
    let second = if n - r == 1 {
        FiberBlock::line(WarpingFunction::constant(1.0))
    } else {
        let k2 = scalar / ((n as f64 - 1.0) * (n - r - 1) as f64);
        FiberBlock::space_form(n - r, k2, WarpingFunction::constant(1.0))
    };
    let spec = WarpedProductSpec::new(
        vec![FiberBlock::space_form(r - 1, k, h), second],
        (0.0, length),
        DEFAULT_GRID_POINTS,
    );
    let mut entry = CatalogEntry::new("type_iv", spec, lapse, Label::TypeIV);
    entry.period = periodic.map(|p| p.period);
    Ok(entry)
}

/// Unit sphere `ds² + sin² s g_{S^{n-1}}` with `f = cos s`.
pub fn build_round_sphere(n: usize) -> Result<CatalogEntry> {
    require_dim(n, 3)?;
    let spec = WarpedProductSpec::new(
        vec![FiberBlock::space_form(
            n - 1,
            1.0,
            make_analytic_warping(AnalyticKind::SinScaled, &[1.0, 1.0])?,
        )],
        (0.05, PI - 0.05),
        DEFAULT_GRID_POINTS,
    );
    let lapse = LapseFunction::analytic(trig(AnalyticKind::CosScaled, 1.0, 1.0)?);
    Ok(CatalogEntry::new("round_sphere", spec, lapse, Label::Einstein))
}

/// Euclidean space with `f ≡ 1`.
pub fn build_flat(n: usize) -> Result<CatalogEntry> {
    require_dim(n, 3)?;
    let spec = WarpedProductSpec::new(
        vec![FiberBlock::space_form(n - 1, 0.0, WarpingFunction::constant(1.0))],
        (0.0, 1.0),
        DEFAULT_GRID_POINTS,
    );
    Ok(CatalogEntry::new("flat", spec, LapseFunction::constant(1.0), Label::Einstein))
}
