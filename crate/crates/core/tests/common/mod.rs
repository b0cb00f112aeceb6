//! Independent oracles: dense index loops over the orthonormal frame, and
//! Riemann components from coordinate Christoffel symbols.
#![allow(dead_code)]

use staticgeo_core::catalog::{self, CatalogParams};
use staticgeo_core::curvature::{PointCurvature, Tensor};
use staticgeo_core::geometry::{
    make_analytic_warping, AnalyticKind, AnalyticProfile, FiberBlock, FiberModel, LapseFunction,
    WarpedProductSpec,
};
use staticgeo_core::Jet;

/// Frame data at one point: `c(m, i, l)` with `∇_{e_l} e_i = Σ_m c(m, i, l) e_m`.
pub struct Frame {
    pub n: usize,
    pub layout: Vec<Option<usize>>,
    pub xi: Vec<Jet>,
}

impl Frame {
    pub fn at(p: &PointCurvature) -> Self {
        Frame {
            n: p.dim(),
            layout: p.layout().to_vec(),
            xi: p.xi().to_vec(),
        }
    }

    fn xi_of(&self, i: usize) -> Jet {
        self.xi[self.layout[i].unwrap()]
    }

    pub fn c(&self, m: usize, i: usize, l: usize) -> Jet {
        if l == 0 {
            return Jet::zero();
        }
        if i == 0 && m == l {
            return self.xi_of(l);
        }
        if m == 0 && i == l {
            return -self.xi_of(l);
        }
        Jet::zero()
    }

    /// Appends the derivative index last.
    pub fn nabla(&self, t: &Tensor<Jet>) -> Tensor<Jet> {
        let n = self.n;
        let r = t.rank();
        Tensor::from_fn(n, r + 1, |idx| {
            let (base, l) = (&idx[..r], idx[r]);
            let mut out = if l == 0 {
                t.get(base).derivative()
            } else {
                Jet::zero()
            };
            let mut probe = base.to_vec();
            for p in 0..r {
                for m in 0..n {
                    let c = self.c(m, base[p], l);
                    if c.value() == 0.0 && c.raw(1) == 0.0 {
                        continue;
                    }
                    probe[p] = m;
                    out -= c * t.get(&probe);
                    probe[p] = base[p];
                }
            }
            out
        })
    }
}

pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

pub fn ricci(rm: &Tensor<Jet>) -> Tensor<Jet> {
    let n = rm.dim();
    Tensor::from_fn(n, 2, |ix| (0..n).map(|k| rm.get(&[ix[0], k, ix[1], k])).sum())
}

pub fn scalar(ric: &Tensor<Jet>) -> Jet {
    (0..ric.dim()).map(|i| ric.get(&[i, i])).sum()
}

pub fn schouten(ric: &Tensor<Jet>) -> Tensor<Jet> {
    let n = ric.dim();
    let r = scalar(ric);
    Tensor::from_fn(n, 2, |ix| {
        ric.get(ix) - r.scale(delta(ix[0], ix[1]) / (2.0 * (n as f64 - 1.0)))
    })
}

pub fn weyl(rm: &Tensor<Jet>, a: &Tensor<Jet>) -> Tensor<Jet> {
    let n = rm.dim();
    let c = 1.0 / (n as f64 - 2.0);
    Tensor::from_fn(n, 4, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let kn = a.get(&[i, k]).scale(delta(j, l)) + a.get(&[j, l]).scale(delta(i, k))
            - a.get(&[i, l]).scale(delta(j, k))
            - a.get(&[j, k]).scale(delta(i, l));
        rm.get(ix) - kn.scale(c)
    })
}

pub fn cotton(frame: &Frame, a: &Tensor<Jet>) -> Tensor<Jet> {
    let da = frame.nabla(a);
    Tensor::from_fn(a.dim(), 3, |ix| {
        da.get(&[ix[0], ix[1], ix[2]]) - da.get(&[ix[0], ix[2], ix[1]])
    })
}

/// `-(n-2)/(n-3) Σ_l W_{lijk,l}`.
pub fn cotton_from_weyl(frame: &Frame, w: &Tensor<Jet>) -> Tensor<Jet> {
    let n = w.dim();
    let dw = frame.nabla(w);
    let c = -(n as f64 - 2.0) / (n as f64 - 3.0);
    Tensor::from_fn(n, 3, |ix| {
        let s: Jet = (0..n).map(|l| dw.get(&[l, ix[0], ix[1], ix[2], l])).sum();
        s.scale(c)
    })
}

/// Frame gradient of a function of `s`.
pub fn gradient(n: usize, f: Jet) -> Vec<Jet> {
    (0..n)
        .map(|i| if i == 0 { f.derivative() } else { Jet::zero() })
        .collect()
}

pub fn d_tensor(ric: &Tensor<Jet>, f: Jet) -> Tensor<Jet> {
    let n = ric.dim();
    let nf = n as f64;
    let r = scalar(ric);
    let df = gradient(n, f);
    Tensor::from_fn(n, 3, |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let mut out = (ric.get(&[i, k]) * df[j] - ric.get(&[i, j]) * df[k]).scale((nf - 1.0) / (nf - 2.0));
        out += (r * (df[k].scale(delta(i, j)) - df[j].scale(delta(i, k)))).scale(1.0 / (nf - 2.0));
        for l in 0..n {
            out += (df[l]
                * (ric.get(&[l, j]).scale(delta(i, k)) - ric.get(&[l, k]).scale(delta(i, j))))
            .scale(1.0 / (nf - 2.0));
        }
        out
    })
}

/// `(C_{ijk,k} + R_{kl} W_{ikjl}) / (n-2)`.
pub fn bach(frame: &Frame, c: &Tensor<Jet>, ric: &Tensor<Jet>, w: &Tensor<Jet>) -> Tensor<Jet> {
    let n = c.dim();
    let dc = frame.nabla(c);
    Tensor::from_fn(n, 2, |ix| {
        let (i, j) = (ix[0], ix[1]);
        let mut out = Jet::zero();
        for k in 0..n {
            out += dc.get(&[i, j, k, k]);
            for l in 0..n {
                out += ric.get(&[k, l]) * w.get(&[i, k, j, l]);
            }
        }
        out.scale(1.0 / (n as f64 - 2.0))
    })
}

pub fn values(t: &Tensor<Jet>) -> Tensor<f64> {
    t.values()
}

/// Riemann components `R_ijkl` (sectional curvature `R_ijij`) in the
/// orthonormal frame at fiber coordinates `y = 0`, computed from Christoffel
/// symbols of the coordinate metric
/// `ds² + Σ h_J² |dy_J|² / (1 + k_J |y_J|²/4)²`.
/// `s`-derivatives of the Christoffel symbols use a 4th-order stencil on
/// the warping values; fiber derivatives are exact.
pub fn coordinate_riemann(spec: &WarpedProductSpec, s: f64) -> Tensor<f64> {
    let layout = spec.frame_blocks();
    let n = layout.len();
    let k: Vec<f64> = spec
        .blocks()
        .iter()
        .map(|b| match b.model() {
            FiberModel::Line => 0.0,
            FiberModel::SpaceForm { k } => k,
            FiberModel::AbstractEinstein { .. } => panic!("no coordinate model for abstract fibers"),
        })
        .collect();
    let hj = |s: f64, j: usize| -> (f64, f64) {
        let jet = spec.block(j).warping().jet(s).unwrap();
        (jet.value(), jet.raw(1))
    };
    // Christoffel symbols Γ^a_{bc} at (s, y) with y given per frame index.
    let gamma = |s: f64, y: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; n];
        let mut dg = vec![0.0; n * n]; // dg[a*n + c] = ∂_c g_aa
        g[0] = 1.0;
        for a in 1..n {
            let j = layout[a].unwrap();
            let (h, dh) = hj(s, j);
            let y2: f64 = (1..n).filter(|&b| layout[b] == Some(j)).map(|b| y[b] * y[b]).sum();
            let phi = 1.0 / (1.0 + k[j] * y2 / 4.0);
            g[a] = h * h * phi * phi;
            dg[a * n] = 2.0 * h * dh * phi * phi;
            for c in 1..n {
                if layout[c] == Some(j) {
                    let dphi = -0.5 * k[j] * y[c] * phi * phi;
                    dg[a * n + c] = 2.0 * h * h * phi * dphi;
                }
            }
        }
        let mut out = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut v = 0.0;
                    if a == c {
                        v += dg[a * n + b];
                    }
                    if a == b {
                        v += dg[a * n + c];
                    }
                    if b == c {
                        v -= dg[b * n + a];
                    }
                    out[(a * n + b) * n + c] = 0.5 * v / g[a];
                }
            }
        }
        out
    };
    let zero = vec![0.0; n];
    let g0 = gamma(s, &zero);
    let h_min = (0..spec.blocks().len()).map(|j| hj(s, j).0).fold(1.0, f64::min);
    let (lo, hi) = spec.domain();
    let eps = (1e-3 * h_min).min((s - lo).min(hi - s) / 3.0);
    // ∂_e Γ^a_{bc}, stored at [e][a][b][c].
    let mut dgamma = vec![0.0; n * n * n * n];
    for e in 0..n {
        let at = |t: f64| {
            let mut y = zero.clone();
            let ss = if e == 0 { s + t } else { s };
            if e > 0 {
                y[e] = t;
            }
            gamma(ss, &y)
        };
        let (m2, m1, p1, p2) = (at(-2.0 * eps), at(-eps), at(eps), at(2.0 * eps));
        for x in 0..n * n * n {
            dgamma[e * n * n * n + x] = (m2[x] - 8.0 * m1[x] + 8.0 * p1[x] - p2[x]) / (12.0 * eps);
        }
    }
    let gi = |a: usize, b: usize, c: usize| g0[(a * n + b) * n + c];
    let dgi = |e: usize, a: usize, b: usize, c: usize| dgamma[((e * n + a) * n + b) * n + c];
    let scale: Vec<f64> = (0..n)
        .map(|a| if a == 0 { 1.0 } else { hj(s, layout[a].unwrap()).0 })
        .collect();
    Tensor::from_fn(n, 4, |ix| {
        let (a, b, c, d) = (ix[0], ix[1], ix[2], ix[3]);
        // R^a_{bcd} = ∂_c Γ^a_{db} - ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} - Γ^a_{de} Γ^e_{cb}
        let mut up = dgi(c, a, d, b) - dgi(d, a, c, b);
        for e in 0..n {
            up += gi(a, c, e) * gi(e, d, b) - gi(a, d, e) * gi(e, c, b);
        }
        let lowered = scale[a] * scale[a] * up;
        lowered / (scale[a] * scale[b] * scale[c] * scale[d])
    })
}

pub fn interior_points(spec: &WarpedProductSpec, count: usize) -> Vec<f64> {
    let idx = spec.margin_indices();
    let span = idx.end - 1 - idx.start;
    (0..count)
        .map(|c| spec.grid_point(idx.start + (c * span) / (count - 1).max(1)))
        .collect()
}

/// Three blocks with unrelated warpings, so every class is populated.
pub fn three_block(n_fiber: [usize; 3]) -> WarpedProductSpec {
    let w = |kind, p: &[f64]| make_analytic_warping(kind, p).unwrap();
    WarpedProductSpec::new(
        vec![
            FiberBlock::space_form(n_fiber[0], 1.0, w(AnalyticKind::CoshScaled, &[1.0, 0.7])),
            FiberBlock::space_form(n_fiber[1], -0.5, w(AnalyticKind::Polynomial, &[1.0, 0.3, 0.2])),
            FiberBlock::line(w(AnalyticKind::SinhScaled, &[1.5, 0.9, 0.4])),
        ],
        (0.2, 1.4),
        64,
    )
}

pub fn specs_n4_n5() -> Vec<(String, WarpedProductSpec, LapseFunction)> {
    let mut out = Vec::new();
    for name in ["type_ii", "type_iii", "example1", "example3", "type_iv", "round_sphere", "flat"] {
        for n in [4usize, 5] {
            let p = CatalogParams {
                n: Some(n),
                r: (name == "type_iv").then_some(3),
                scalar: (name == "type_iv" && n == 4).then_some(0.0),
                ..Default::default()
            };
            if let Ok(e) = catalog::build(name, &p) {
                out.push((format!("{name}/n={}", e.spec.total_dim()), e.spec, e.lapse));
            }
        }
    }
    let lapse = LapseFunction::analytic(
        AnalyticProfile::new(AnalyticKind::CosScaled, &[1.0, 0.8, 0.3])
            .unwrap(),
    );
    out.push(("three_block/n=4".into(), three_block([1, 1, 1]), lapse.clone()));
    out.push(("three_block/n=5".into(), three_block([2, 1, 1]), lapse));
    out
}
