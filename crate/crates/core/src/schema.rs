//! JSON spec files.
//!
//! ```json
//! {
//!   "n": 5,
//!   "domain": [0.01, 3.13],
//!   "grid": 1024,
//!   "blocks": [
//!     {"dim": 1, "model": "line", "warping": {"kind": "sin", "params": [1.0, 1.0]}},
//!     {"dim": 3, "model": "space_form", "k": 1.0, "warping": {"kind": "constant", "params": [1.0]}}
//!   ],
//!   "lapse": {"kind": "analytic", "terms": [{"kind": "cos", "params": [1.0, 1.0]}]}
//! }
//! ```
//!
//! Warping kinds: the analytic kinds (`constant`, `linear`, `polynomial`,
//! `sin`, `cos`, `sinh`, `cosh`), `sampled` (`params` are the samples, with
//! `start` and `step`) and `ode` (`params = [p, c1, c0, h0, dh0]` with
//! `start`, `end` and optional `steps`). Lapse kinds: `analytic` with
//! `terms`, `derived_from_warping` with `scale` and either `block` or an
//! inline `warping`, and `sampled`. `grid` is optional.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    make_analytic_warping, make_sampled_warping, AnalyticKind, AnalyticProfile, FiberBlock,
    FiberModel, LapseFunction, SampledProfile, WarpedProductSpec, WarpingFunction,
};
use crate::ode::{integrate_warping, WarpingOde, WarpingOdeParams, DEFAULT_STEPS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub n: usize,
    pub domain: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub blocks: Vec<BlockFile>,
    pub lapse: LapseFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    pub dim: usize,
    pub model: String,
    #[serde(default)]
    pub k: f64,
    pub warping: FunctionFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LapseFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<FunctionFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warping: Option<FunctionFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

fn missing(what: &str, kind: &str) -> Error {
    Error::Schema(format!("`{what}` is required for kind `{kind}`"))
}

fn build_function(f: &FunctionFile) -> Result<WarpingFunction> {
    match f.kind.as_str() {
        "sampled" => make_sampled_warping(
            &f.params,
            f.start.ok_or_else(|| missing("start", "sampled"))?,
            f.step.ok_or_else(|| missing("step", "sampled"))?,
        ),
        "ode" => {
            let [p, c1, c0, h0, dh0] = f.params[..] else {
                return Err(Error::Schema(format!(
                    "ode warping takes params [p, c1, c0, h0, dh0], got {} values",
                    f.params.len()
                )));
            };
            if p.fract() != 0.0 || p < 0.0 {
                return Err(Error::Schema(format!("ode exponent must be an integer, got {p}")));
            }
            let ode = WarpingOde::new(p as u32, c1, c0)?;
            let start = f.start.ok_or_else(|| missing("start", "ode"))?;
            let end = f.end.ok_or_else(|| missing("end", "ode"))?;
            let params = WarpingOdeParams::new(ode, h0, dh0, start, end)
                .with_steps(f.steps.unwrap_or(DEFAULT_STEPS));
            Ok(integrate_warping(&params)?.into_warping())
        }
        other => make_analytic_warping(other.parse()?, &f.params),
    }
}

fn build_lapse(l: &LapseFile, blocks: &[FiberBlock]) -> Result<LapseFunction> {
    match l.kind.as_str() {
        "analytic" => {
            let terms = l.terms.as_ref().ok_or_else(|| missing("terms", "analytic"))?;
            if terms.is_empty() {
                return Err(Error::Schema("analytic lapse needs at least one term".into()));
            }
            let terms = terms
                .iter()
                .map(|t| AnalyticProfile::new(t.kind.parse::<AnalyticKind>()?, &t.params))
                .collect::<Result<Vec<_>>>()?;
            Ok(LapseFunction::Analytic(terms))
        }
        "derived_from_warping" => {
            let scale = l.scale.unwrap_or(1.0);
            if scale == 0.0 {
                return Err(Error::ZeroScale);
            }
            let (warping, block) = match (l.block, &l.warping) {
                (Some(j), None) => {
                    let b = blocks.get(j).ok_or_else(|| {
                        Error::Schema(format!("lapse refers to block {j}, spec has {}", blocks.len()))
                    })?;
                    (b.warping().clone(), Some(j))
                }
                (None, Some(w)) => (build_function(w)?, None),
                _ => {
                    return Err(Error::Schema(
                        "derived_from_warping needs exactly one of `block` and `warping`".into(),
                    ))
                }
            };
            Ok(LapseFunction::DerivedFromWarping {
                warping,
                scale,
                block,
            })
        }
        "sampled" => Ok(LapseFunction::Sampled(Arc::new(SampledProfile::new(
            &l.params,
            l.start.ok_or_else(|| missing("start", "sampled"))?,
            l.step.ok_or_else(|| missing("step", "sampled"))?,
            false,
        )?))),
        other => Err(Error::UnsupportedKind(other.to_string())),
    }
}

fn build_block(b: &BlockFile) -> Result<FiberBlock> {
    let warping = build_function(&b.warping)?;
    let model = match b.model.as_str() {
        "line" | "circle" => {
            if b.dim != 1 {
                return Err(Error::Schema(format!("line block must have dim 1, got {}", b.dim)));
            }
            FiberModel::Line
        }
        "space_form" => FiberModel::SpaceForm { k: b.k },
        "abstract_einstein" => FiberModel::AbstractEinstein { k: b.k },
        other => return Err(Error::Schema(format!("unknown fiber model `{other}`"))),
    };
    if b.dim == 0 {
        return Err(Error::Schema("block dim must be >= 1".into()));
    }
    Ok(FiberBlock::new(b.dim, model, warping))
}

impl SpecFile {
    /// Builds the spec and lapse; `default_grid` applies when the file has no
    /// `grid` field.
    pub fn build(&self, default_grid: usize) -> Result<(WarpedProductSpec, LapseFunction)> {
        let blocks = self
            .blocks
            .iter()
            .map(build_block)
            .collect::<Result<Vec<_>>>()?;
        let lapse = build_lapse(&self.lapse, &blocks)?;
        let grid = self.grid.unwrap_or(default_grid);
        let spec = WarpedProductSpec::new(blocks, (self.domain[0], self.domain[1]), grid)
            .with_declared_dim(self.n);
        Ok((spec, lapse))
    }

    pub fn from_pair(spec: &WarpedProductSpec, lapse: &LapseFunction) -> Self {
        let (lo, hi) = spec.domain();
        SpecFile {
            n: spec.total_dim(),
            domain: [lo, hi],
            grid: Some(spec.grid_points()),
            blocks: spec
                .blocks()
                .iter()
                .map(|b| BlockFile {
                    dim: b.dim(),
                    model: b.model().name().to_string(),
                    k: b.k(),
                    warping: function_file(b.warping()),
                })
                .collect(),
            lapse: lapse_file(lapse),
        }
    }
}

fn plain(kind: &str, params: Vec<f64>) -> FunctionFile {
    FunctionFile {
        kind: kind.to_string(),
        params,
        start: None,
        step: None,
        end: None,
        steps: None,
    }
}

fn function_file(w: &WarpingFunction) -> FunctionFile {
    match w {
        WarpingFunction::Analytic(p) => plain(p.kind().name(), p.params().to_vec()),
        WarpingFunction::Sampled(p) => FunctionFile {
            start: Some(p.start()),
            step: Some(p.step()),
            ..plain("sampled", p.samples().to_vec())
        },
        WarpingFunction::OdeBacked(t) => {
            let ode = t.ode();
            let (h0, dh0) = t.initial_state();
            FunctionFile {
                start: Some(t.start()),
                end: Some(t.end()),
                steps: Some(t.steps()),
                ..plain(
                    "ode",
                    vec![
                        ode.exponent() as f64,
                        ode.linear_coeff(),
                        ode.forcing(),
                        h0,
                        dh0,
                    ],
                )
            }
        }
    }
}

fn lapse_file(l: &LapseFunction) -> LapseFile {
    let empty = LapseFile {
        kind: String::new(),
        terms: None,
        scale: None,
        block: None,
        warping: None,
        params: Vec::new(),
        start: None,
        step: None,
    };
    match l {
        LapseFunction::Analytic(terms) => LapseFile {
            kind: "analytic".into(),
            terms: Some(
                terms
                    .iter()
                    .map(|t| plain(t.kind().name(), t.params().to_vec()))
                    .collect(),
            ),
            ..empty
        },
        LapseFunction::DerivedFromWarping {
            warping,
            scale,
            block,
        } => LapseFile {
            kind: "derived_from_warping".into(),
            scale: Some(*scale),
            block: *block,
            warping: block.is_none().then(|| function_file(warping)),
            ..empty
        },
        LapseFunction::Sampled(p) => LapseFile {
            kind: "sampled".into(),
            params: p.samples().to_vec(),
            start: Some(p.start()),
            step: Some(p.step()),
            ..empty
        },
    }
}

/// Parses a spec file; malformed JSON and unknown kinds both surface as errors.
pub fn parse_spec(text: &str, default_grid: usize) -> Result<(WarpedProductSpec, LapseFunction)> {
    let file: SpecFile =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    file.build(default_grid)
}

/// Pretty JSON for a (spec, lapse) pair, readable by [`parse_spec`].
pub fn to_json(spec: &WarpedProductSpec, lapse: &LapseFunction) -> String {
    serde_json::to_string_pretty(&SpecFile::from_pair(spec, lapse))
        .expect("spec files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::geometry::DEFAULT_GRID_POINTS;

    #[test]
    fn catalog_round_trips() {
        for entry in catalog::build_all().unwrap() {
            let text = to_json(&entry.spec, &entry.lapse);
            let (spec, lapse) = parse_spec(&text, DEFAULT_GRID_POINTS).unwrap();
            assert_eq!(to_json(&spec, &lapse), text, "{}", entry.name);
            for s in [0.3, 0.9] {
                let (a, b) = (entry.lapse.jet(s).unwrap(), lapse.jet(s).unwrap());
                assert_eq!(a.value(), b.value(), "{}", entry.name);
            }
        }
    }

    #[test]
    fn grid_is_optional() {
        let text = r#"{"n": 4, "domain": [0, 1],
            "blocks": [{"dim": 3, "model": "space_form", "k": 0,
                        "warping": {"kind": "constant", "params": [1]}}],
            "lapse": {"kind": "analytic", "terms": [{"kind": "constant", "params": [1]}]}}"#;
        let (spec, _) = parse_spec(text, 77).unwrap();
        assert_eq!(spec.grid_points(), 77);
        assert_eq!(spec.total_dim(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_spec("{", 8), Err(Error::Schema(_))));
        let unknown = r#"{"n": 2, "domain": [0, 1],
            "blocks": [{"dim": 1, "model": "line", "warping": {"kind": "tanh", "params": [1]}}],
            "lapse": {"kind": "analytic", "terms": [{"kind": "constant", "params": [1]}]}}"#;
        assert!(matches!(parse_spec(unknown, 8), Err(Error::UnsupportedKind(_))));
        let extra = r#"{"n": 2, "domain": [0, 1], "bogus": 1, "blocks": [],
            "lapse": {"kind": "analytic", "terms": []}}"#;
        assert!(matches!(parse_spec(extra, 8), Err(Error::Schema(_))));
    }
}
