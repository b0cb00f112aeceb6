//! Per-grid-point profile tables.

use std::fmt::Write as _;

use serde::Serialize;

use crate::curvature::PointCurvature;
use crate::error::Result;
use crate::geometry::{LapseFunction, WarpedProductSpec};

/// One row per grid point. Points where evaluation fails (outside a sampled
/// profile's interior, say) are filled with NaN.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn columns(blocks: usize) -> Vec<String> {
    let mut c = vec!["s".to_string()];
    let per_block = |c: &mut Vec<String>, name: &str| {
        c.extend((1..=blocks).map(|j| format!("{name}_{j}")));
    };
    per_block(&mut c, "h");
    per_block(&mut c, "xi");
    c.push("lambda1".into());
    per_block(&mut c, "lambda");
    c.push("R".into());
    c.push("f".into());
    c.push("static_11".into());
    per_block(&mut c, "static");
    per_block(&mut c, "D");
    c
}

fn row(spec: &WarpedProductSpec, lapse: &LapseFunction, s: f64) -> Result<Vec<f64>> {
    let p = PointCurvature::at(spec, s)?;
    let f = lapse.jet(s)?;
    let ric = p.ricci();
    let n = p.dim() as f64;
    let scalar = ric.scalar.value();
    let shift = scalar / (n - 1.0);
    let (fv, df) = (f.value(), f.raw(1));
    let l1 = ric.lambda1.value();
    let mut out = vec![s];
    out.extend(p.warping().iter().map(|h| h.value()));
    out.extend(p.xi().iter().map(|x| x.value()));
    out.push(l1);
    out.extend(ric.lambda_block.iter().map(|l| l.value()));
    out.push(scalar);
    out.push(fv);
    out.push(f.raw(2) - fv * (l1 - shift));
    for (x, l) in p.xi().iter().zip(&ric.lambda_block) {
        out.push(df * x.value() - fv * (l.value() - shift));
    }
    out.extend(p.d_tensor(f).block.iter().map(|d| d.value()));
    Ok(out)
}

pub fn profile_table(spec: &WarpedProductSpec, lapse: &LapseFunction) -> ProfileTable {
    let columns = columns(spec.blocks().len());
    let width = columns.len();
    let rows = spec
        .grid()
        .into_iter()
        .map(|s| {
            row(spec, lapse, s).unwrap_or_else(|_| {
                let mut r = vec![f64::NAN; width];
                r[0] = s;
                r
            })
        })
        .collect();
    ProfileTable { columns, rows }
}

impl ProfileTable {
    /// CSV with 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            for (i, v) in r.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{v:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// JSON array of objects keyed by column; NaN becomes `null`.
    pub fn to_json(&self) -> String {
        let records: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .zip(r)
                    .map(|(c, &v)| (c.clone(), serde_json::json!(v)))
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&records).expect("rows serialize")
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn type_ii_scalar_column() {
        let e = catalog::build("type_ii", &Default::default()).unwrap();
        let t = profile_table(&e.spec, &e.lapse);
        assert_eq!(t.rows.len(), e.spec.grid_points());
        assert!(t.column("R").unwrap().iter().all(|r| (r - 8.0).abs() < 1e-10));
        assert_eq!(t.columns.len(), 1 + 2 * 2 + 1 + 2 + 2 + 1 + 2 + 2);
    }

    #[test]
    fn csv_header_order() {
        let e = catalog::build("flat", &Default::default()).unwrap();
        let csv = profile_table(&e.spec, &e.lapse).to_csv();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, "s,h_1,xi_1,lambda1,lambda_1,R,f,static_11,static_1,D_1");
    }
}
