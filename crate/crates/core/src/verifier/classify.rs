use serde::Serialize;

use super::residual::{
    build_report, eigen_gap, profile_distance, sample_grid, PointSample, ResidualReport, Tier,
    DEFAULT_GAP,
};
use crate::error::Result;
use crate::geometry::{LapseFunction, WarpedProductSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    Einstein,
    #[serde(rename = "DFlat_TypeI")]
    DFlatTypeI,
    TypeII,
    TypeIII,
    TypeIV,
    ViolatesThm42,
    Invalid,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Einstein => "Einstein",
            Label::DFlatTypeI => "DFlat_TypeI",
            Label::TypeII => "TypeII",
            Label::TypeIII => "TypeIII",
            Label::TypeIV => "TypeIV",
            Label::ViolatesThm42 => "ViolatesThm42",
            Label::Invalid => "Invalid",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification result with the numbers it was decided on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeLabel {
    pub label: Label,
    /// Number of distinct fiber eigenvalue profiles.
    pub m: usize,
    /// Total fiber dimension of each distinct profile, in block order.
    pub multiplicities: Vec<usize>,
    /// Block indices grouped by profile.
    pub groups: Vec<Vec<usize>>,
    /// `sup |ξ_J ξ_K|` over block pairs from different groups (two groups only).
    pub xy_sup: Option<f64>,
    pub d_sup: f64,
    pub scalar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Residual tolerance; defaults to the pair's tier.
    pub tolerance: Option<f64>,
    /// Profile gap relative to `sup |λ|`.
    pub relative_gap: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tolerance: None,
            relative_gap: DEFAULT_GAP,
        }
    }
}

fn sup(samples: &[PointSample], f: impl Fn(&PointSample) -> f64) -> f64 {
    samples.iter().map(f).fold(0.0, f64::max)
}

fn groups_by_profile(samples: &[PointSample], gap: f64) -> Vec<Vec<usize>> {
    let blocks = samples[0].lambda.len();
    let mut parent: Vec<usize> = (0..blocks).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..blocks {
        for k in j + 1..blocks {
            if profile_distance(samples, j, k) <= gap {
                let (a, b) = (root(&mut parent, j), root(&mut parent, k));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; blocks];
    for j in 0..blocks {
        let r = root(&mut parent, j);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(j);
    }
    groups
}

/// Checks that the single block `j` of the warped factor solves
/// `h'' + c1 h = c0 h^(-r1)` with constant `c0` and first integral equal to
/// the fiber curvature, `c1 = R/((n-1)(r1+1))`.
fn warped_factor_residual(
    spec: &WarpedProductSpec,
    samples: &[PointSample],
    j: usize,
    scalar: f64,
) -> f64 {
    let n = spec.frame_blocks().len() as f64;
    let r1 = spec.block(j).dim() as i32;
    let c1 = scalar / ((n - 1.0) * (r1 as f64 + 1.0));
    let k = spec.block(j).k();
    let c0: Vec<f64> = samples
        .iter()
        .map(|p| {
            let [h, _, d2] = p.h[j];
            h.powi(r1) * (d2 + c1 * h)
        })
        .collect();
    let mean = c0.iter().sum::<f64>() / c0.len() as f64;
    let c0_drift = c0.iter().map(|c| (c - mean).abs()).fold(0.0, f64::max);
    let energy = samples
        .iter()
        .map(|p| {
            let [h, d1, _] = p.h[j];
            let first = d1 * d1 + 2.0 * mean / (r1 as f64 - 1.0) * h.powi(-(r1 - 1)) + c1 * h * h;
            (first - k).abs()
        })
        .fold(0.0, f64::max);
    c0_drift.max(energy)
}

fn decide(
    spec: &WarpedProductSpec,
    report: &ResidualReport,
    samples: &[PointSample],
    tol: f64,
    relative_gap: f64,
) -> TypeLabel {
    let gap = eigen_gap(samples, relative_gap);
    let groups = groups_by_profile(samples, gap);
    let dims: Vec<usize> = spec.blocks().iter().map(|b| b.dim()).collect();
    let multiplicities = groups
        .iter()
        .map(|g| g.iter().map(|&j| dims[j]).sum())
        .collect();
    let scalar = samples.iter().map(|p| p.scalar).sum::<f64>() / samples.len() as f64;
    let xy_sup = (groups.len() == 2).then(|| {
        let mut worst = 0.0f64;
        for &j in &groups[0] {
            for &k in &groups[1] {
                worst = worst.max(sup(samples, |p| (p.xi[j] * p.xi[k]).abs()));
            }
        }
        worst
    });
    let mut out = TypeLabel {
        label: Label::Invalid,
        m: groups.len(),
        multiplicities,
        groups: groups.clone(),
        xy_sup,
        d_sup: sup(samples, |p| p.d_max),
        scalar,
        reason: None,
    };
    if !report.hypotheses_hold(tol) {
        let failed: Vec<String> = report
            .failures(tol)
            .into_iter()
            .filter(|c| {
                c.starts_with("static") || c.starts_with("harmonic") || c.starts_with("scalar")
            })
            .collect();
        out.reason = Some(format!("residuals above {tol:e}: {}", failed.join(", ")));
        return out;
    }
    let constant_group = |g: &Vec<usize>| {
        g.iter()
            .all(|&j| sup(samples, |p| p.xi[j].abs()) <= tol)
    };
    match groups.len() {
        1 => {
            let base_gap = sup(samples, |p| (p.lambda1 - p.lambda[0]).abs());
            out.label = if base_gap <= gap {
                Label::Einstein
            } else {
                Label::DFlatTypeI
            };
        }
        2 => {
            let Some(y) = groups.iter().position(constant_group) else {
                out.reason = Some("neither eigenvalue group has constant warping".into());
                return out;
            };
            let x = 1 - y;
            let x_dim: usize = groups[x].iter().map(|&j| dims[j]).sum();
            let y_dim: usize = groups[y].iter().map(|&j| dims[j]).sum();
            if x_dim == 1 {
                out.label = if scalar > tol {
                    Label::TypeII
                } else if scalar < -tol {
                    Label::TypeIII
                } else {
                    out.reason = Some("one-dimensional warped factor with zero scalar curvature".into());
                    Label::Invalid
                };
            } else if groups[x].len() != 1 {
                out.reason = Some("warped factor spans several blocks".into());
            } else {
                let residual = warped_factor_residual(spec, samples, groups[x][0], scalar);
                let scale = 1.0 + spec.block(groups[x][0]).k().abs();
                if residual > tol * scale {
                    out.reason = Some(format!("warped factor ODE residual {residual:e}"));
                } else if y_dim == 1 && scalar.abs() > tol {
                    out.reason = Some(format!("line factor requires R = 0, got {scalar}"));
                } else {
                    out.label = Label::TypeIV;
                }
            }
        }
        _ => out.label = Label::ViolatesThm42,
    }
    out
}

/// Classifies a pair by the number and shape of its distinct eigenvalue
/// profiles. Pairs whose static or harmonic residuals exceed the tolerance
/// are labelled [`Label::Invalid`].
pub fn classify_with(
    spec: &WarpedProductSpec,
    lapse: &LapseFunction,
    options: &ClassifyOptions,
) -> Result<TypeLabel> {
    let samples = sample_grid(spec, lapse)?;
    let tier = Tier::for_pair(spec, lapse);
    let tol = options.tolerance.unwrap_or(tier.tolerance());
    let report = build_report(spec, tier, &samples);
    Ok(decide(spec, &report, &samples, tol, options.relative_gap))
}

pub fn classify(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Result<TypeLabel> {
    classify_with(spec, lapse, &ClassifyOptions::default())
}

/// Report and label from a single sweep of the grid.
pub fn verify_and_classify(
    spec: &WarpedProductSpec,
    lapse: &LapseFunction,
    options: &ClassifyOptions,
) -> Result<(ResidualReport, TypeLabel)> {
    let samples = sample_grid(spec, lapse)?;
    let tier = Tier::for_pair(spec, lapse);
    let tol = options.tolerance.unwrap_or(tier.tolerance());
    let report = build_report(spec, tier, &samples);
    let label = decide(spec, &report, &samples, tol, options.relative_gap);
    Ok((report, label))
}
