use std::ops::Range;

use super::lapse::LapseFunction;
use super::warping::{WarpingFunction, WarpingKind};
use crate::error::{Error, Result};

/// Default number of grid points over the base interval.
pub const DEFAULT_GRID_POINTS: usize = 1024;

/// Grid steps removed at each end of the domain before residuals are taken.
pub const MARGIN_STEPS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FiberModel {
    /// One-dimensional fiber (circle or line); carries no curvature constant.
    Line,
    /// Space form of constant sectional curvature `k`.
    SpaceForm { k: f64 },
    /// Einstein manifold with Ricci curvature `(r - 1) k`; nothing else known.
    AbstractEinstein { k: f64 },
}

impl FiberModel {
    pub fn name(&self) -> &'static str {
        match self {
            FiberModel::Line => "line",
            FiberModel::SpaceForm { .. } => "space_form",
            FiberModel::AbstractEinstein { .. } => "abstract_einstein",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiberBlock {
    dim: usize,
    model: FiberModel,
    warping: WarpingFunction,
}

impl FiberBlock {
    /// One-dimensional blocks are normalized to [`FiberModel::Line`].
    pub fn new(dim: usize, model: FiberModel, warping: WarpingFunction) -> Self {
        let model = if dim == 1 { FiberModel::Line } else { model };
        Self {
            dim,
            model,
            warping,
        }
    }

    pub fn line(warping: WarpingFunction) -> Self {
        Self::new(1, FiberModel::Line, warping)
    }

    pub fn space_form(dim: usize, k: f64, warping: WarpingFunction) -> Self {
        Self::new(dim, FiberModel::SpaceForm { k }, warping)
    }

    pub fn abstract_einstein(dim: usize, k: f64, warping: WarpingFunction) -> Self {
        Self::new(dim, FiberModel::AbstractEinstein { k }, warping)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn model(&self) -> FiberModel {
        self.model
    }

    pub fn warping(&self) -> &WarpingFunction {
        &self.warping
    }

    /// Normalized curvature constant `k` (0 for lines).
    pub fn k(&self) -> f64 {
        match self.model {
            FiberModel::Line => 0.0,
            FiberModel::SpaceForm { k } | FiberModel::AbstractEinstein { k } => k,
        }
    }

    /// Ricci constant of the unwarped fiber, `(r - 1) k`.
    pub fn einstein_constant(&self) -> f64 {
        (self.dim as f64 - 1.0) * self.k()
    }

    /// Whether the fiber's full Riemann tensor is determined by the model.
    /// Two-dimensional Einstein manifolds have constant curvature.
    pub fn has_full_curvature(&self) -> bool {
        match self.model {
            FiberModel::Line | FiberModel::SpaceForm { .. } => true,
            FiberModel::AbstractEinstein { .. } => self.dim <= 2,
        }
    }
}

/// Multiply warped product `ds² + Σ h_j(s)² g_j` over `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct WarpedProductSpec {
    blocks: Vec<FiberBlock>,
    domain: (f64, f64),
    grid_points: usize,
    total_dim: usize,
}

impl WarpedProductSpec {
    pub fn new(blocks: Vec<FiberBlock>, domain: (f64, f64), grid_points: usize) -> Self {
        let total_dim = 1 + blocks.iter().map(FiberBlock::dim).sum::<usize>();
        Self {
            blocks,
            domain,
            grid_points,
            total_dim,
        }
    }

    /// Keeps a declared dimension (e.g. from a spec file) so that
    /// [`validate_spec`] can report a mismatch.
    pub fn with_declared_dim(mut self, n: usize) -> Self {
        self.total_dim = n;
        self
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn blocks(&self) -> &[FiberBlock] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &FiberBlock {
        &self.blocks[j]
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    fn computed_dim(&self) -> usize {
        1 + self.blocks.iter().map(FiberBlock::dim).sum::<usize>()
    }

    pub fn step(&self) -> f64 {
        let (lo, hi) = self.domain;
        (hi - lo) / (self.grid_points.max(2) - 1) as f64
    }

    pub fn grid_point(&self, i: usize) -> f64 {
        let (lo, hi) = self.domain;
        if i + 1 == self.grid_points {
            hi
        } else {
            lo + i as f64 * self.step()
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.grid_points).map(|i| self.grid_point(i)).collect()
    }

    /// Grid indices left after removing [`MARGIN_STEPS`] points at each end.
    pub fn margin_indices(&self) -> Range<usize> {
        if self.grid_points <= 2 * MARGIN_STEPS {
            return 0..0;
        }
        MARGIN_STEPS..self.grid_points - MARGIN_STEPS
    }

    pub fn check_in_domain(&self, s: f64) -> Result<()> {
        let (lo, hi) = self.domain;
        let slack = 1e-12 * (hi - lo).abs().max(1.0);
        if s >= lo - slack && s <= hi + slack {
            Ok(())
        } else {
            Err(Error::OutOfDomain { s, lo, hi })
        }
    }

    /// Block index of every frame direction; index 0 is the base direction `E_1`.
    pub fn frame_blocks(&self) -> Vec<Option<usize>> {
        let mut out = vec![None];
        for (j, b) in self.blocks.iter().enumerate() {
            out.extend(std::iter::repeat(Some(j)).take(b.dim()));
        }
        out
    }

    /// Smallest derivative order supplied by any warping function.
    pub fn derivative_order(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.warping().derivative_order())
            .min()
            .unwrap_or(crate::jet::MAX_ORDER)
    }

    pub fn warping_kinds(&self) -> Vec<WarpingKind> {
        self.blocks.iter().map(|b| b.warping().kind()).collect()
    }

    /// First block whose full fiber curvature is not known, if any.
    pub fn first_partial_fiber(&self) -> Option<usize> {
        self.blocks.iter().position(|b| !b.has_full_curvature())
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Violation {
    /// Grid index, absent for global constraints.
    pub index: Option<usize>,
    pub constraint: String,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, index: Option<usize>, constraint: impl Into<String>, value: f64) {
        self.violations.push(Violation {
            index,
            constraint: constraint.into(),
            value,
        });
        self.ok = false;
    }
}

/// Structural and positivity checks on the margin-shrunk grid.
pub fn validate_spec(spec: &WarpedProductSpec) -> ValidationReport {
    let mut report = ValidationReport {
        ok: true,
        violations: Vec::new(),
    };
    let n = spec.total_dim();
    if n < 3 {
        report.push(None, "total_dim < 3", n as f64);
    }
    if n != spec.computed_dim() {
        report.push(None, "total_dim mismatch", spec.computed_dim() as f64);
    }
    let (lo, hi) = spec.domain();
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        report.push(None, "domain not an increasing interval", hi - lo);
    }
    if spec.grid_points() <= 2 * MARGIN_STEPS {
        report.push(None, "grid too small for margin", spec.grid_points() as f64);
    }
    for (j, block) in spec.blocks().iter().enumerate() {
        if block.dim() == 0 {
            report.push(None, format!("block[{j}] dim < 1"), 0.0);
        }
        if !block.k().is_finite() {
            report.push(None, format!("block[{j}] k not finite"), block.k());
        }
    }
    if !report.ok {
        return report;
    }
    for i in spec.margin_indices() {
        let s = spec.grid_point(i);
        for (j, block) in spec.blocks().iter().enumerate() {
            match block.warping().value(s) {
                Ok(h) if h > 0.0 && h.is_finite() => {}
                Ok(h) => report.push(Some(i), format!("warping[{j}] <= 0"), h),
                Err(_) => report.push(Some(i), format!("warping[{j}] unavailable"), s),
            }
        }
    }
    report
}

/// [`validate_spec`] plus lapse availability and non-vanishing.
pub fn validate_pair(spec: &WarpedProductSpec, lapse: &LapseFunction) -> ValidationReport {
    let mut report = validate_spec(spec);
    if !report.ok {
        return report;
    }
    let mut sup = 0.0f64;
    for i in spec.margin_indices() {
        let s = spec.grid_point(i);
        match lapse.jet(s) {
            Ok(j) if j.value().is_finite() => sup = sup.max(j.value().abs()),
            Ok(j) => report.push(Some(i), "lapse not finite", j.value()),
            Err(_) => report.push(Some(i), "lapse unavailable", s),
        }
    }
    if report.ok && sup == 0.0 {
        report.push(None, "lapse identically zero", 0.0);
    }
    report
}
