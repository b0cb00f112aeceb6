use super::classes::{DiagonalTwoTensor, MixedThreeTensor, RicciSpectrum, RiemannClasses};
use super::dense::FrameConnection;
use crate::error::{Error, Result};
use crate::geometry::WarpedProductSpec;
use crate::jet::Jet;

/// Jet-valued curvature data of a spec at one base point.
///
/// Everything is built from the warping jets by exact jet arithmetic, so each
/// quantity also carries its `s`-derivatives (one fewer per differentiation
/// of the warping functions it involves).
#[derive(Clone, Debug)]
pub struct PointCurvature {
    s: f64,
    n: usize,
    dims: Vec<usize>,
    k: Vec<f64>,
    full: Vec<bool>,
    layout: Vec<Option<usize>>,
    h: Vec<Jet>,
    xi: Vec<Jet>,
    sum_xi: Jet,
    lambda1: Jet,
    lambda: Vec<Jet>,
    scalar: Jet,
}

impl PointCurvature {
    pub fn at(spec: &WarpedProductSpec, s: f64) -> Result<Self> {
        spec.check_in_domain(s)?;
        let layout = spec.frame_blocks();
        let n = layout.len();
        let blocks = spec.blocks();
        let mut h = Vec::with_capacity(blocks.len());
        for (j, b) in blocks.iter().enumerate() {
            let hj = b.warping().jet(s)?;
            if !(hj.value() > 0.0) || !hj.is_finite() {
                return Err(Error::NonPositiveWarping {
                    block: j,
                    s,
                    value: hj.value(),
                });
            }
            h.push(hj);
        }
        let dims: Vec<usize> = blocks.iter().map(|b| b.dim()).collect();
        let k: Vec<f64> = blocks.iter().map(|b| b.k()).collect();
        let full = blocks.iter().map(|b| b.has_full_curvature()).collect();
        let xi: Vec<Jet> = h.iter().map(|hj| hj.derivative() / *hj).collect();
        let sum_xi: Jet = xi.iter().zip(&dims).map(|(x, &r)| *x * r as f64).sum();
        let lambda1: Jet = xi
            .iter()
            .zip(&dims)
            .map(|(x, &r)| -(x.derivative() + x.square()) * r as f64)
            .sum();
        let lambda: Vec<Jet> = (0..blocks.len())
            .map(|j| {
                let intrinsic = if dims[j] >= 2 {
                    h[j].square().recip() * ((dims[j] - 1) as f64 * k[j])
                } else {
                    Jet::zero()
                };
                -xi[j].derivative() - xi[j] * sum_xi + intrinsic
            })
            .collect();
        let scalar = lambda1
            + lambda
                .iter()
                .zip(&dims)
                .map(|(l, &r)| *l * r as f64)
                .sum::<Jet>();
        Ok(Self {
            s,
            n,
            dims,
            k,
            full,
            layout,
            h,
            xi,
            sum_xi,
            lambda1,
            lambda,
            scalar,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> &[Option<usize>] {
        &self.layout
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn warping(&self) -> &[Jet] {
        &self.h
    }

    pub fn xi(&self) -> &[Jet] {
        &self.xi
    }

    /// `Σ_i ξ_i` over all fiber directions (with multiplicity).
    pub fn xi_trace(&self) -> Jet {
        self.sum_xi
    }

    pub fn ricci(&self) -> RicciSpectrum<Jet> {
        RicciSpectrum {
            lambda1: self.lambda1,
            lambda_block: self.lambda.clone(),
            scalar: self.scalar,
        }
    }

    pub fn connection(&self) -> FrameConnection {
        FrameConnection::warped(&self.layout, &self.xi)
    }

    fn require_full_fibers(&self) -> Result<()> {
        match self.full.iter().position(|f| !f) {
            Some(block) => Err(Error::InsufficientFiberData {
                block,
                dim: self.dims[block],
            }),
            None => Ok(()),
        }
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn riemann(&self) -> Result<RiemannClasses<Jet>> {
        self.require_full_fibers()?;
        let m = self
            .xi
            .iter()
            .map(|x| -(x.derivative() + x.square()))
            .collect();
        let p = (0..self.dims.len())
            .map(|j| {
                (self.dims[j] >= 2).then(|| {
                    (Jet::constant(self.k[j]) - self.h[j].derivative().square())
                        / self.h[j].square()
                })
            })
            .collect();
        Ok(RiemannClasses::new(m, p, |a, b| -(self.xi[a] * self.xi[b])))
    }

    pub fn schouten(&self) -> DiagonalTwoTensor<Jet> {
        let shift = self.scalar * (1.0 / (2.0 * (self.nf() - 1.0)));
        DiagonalTwoTensor {
            first: self.lambda1 - shift,
            block: self.lambda.iter().map(|l| *l - shift).collect(),
        }
    }

    pub fn weyl(&self) -> Result<RiemannClasses<Jet>> {
        let riem = self.riemann()?;
        let a = self.schouten();
        let c = 1.0 / (self.nf() - 2.0);
        let m = (0..self.dims.len())
            .map(|j| riem.m_block[j] - (a.first + a.block[j]) * c)
            .collect();
        let p = (0..self.dims.len())
            .map(|j| riem.p_block[j].map(|pj| pj - a.block[j] * (2.0 * c)))
            .collect();
        Ok(RiemannClasses::new(m, p, |j, k| {
            riem.q(j, k) - (a.block[j] + a.block[k]) * c
        }))
    }

    /// `C_{a1a}` per block.
    pub fn cotton(&self) -> MixedThreeTensor<Jet> {
        let a = self.schouten();
        MixedThreeTensor {
            block: (0..self.dims.len())
                .map(|j| (a.first - a.block[j]) * self.xi[j] - a.block[j].derivative())
                .collect(),
        }
    }

    /// Cotton tensor recovered as `-(n-2)/(n-3)` times the divergence of Weyl
    /// on its first index.
    pub fn cotton_from_weyl(&self) -> Result<MixedThreeTensor<Jet>> {
        if self.n < 4 {
            return Err(Error::DimensionTooLow {
                needed: 4,
                got: self.n,
            });
        }
        let w = self.weyl()?;
        let factor = -(self.nf() - 2.0) / (self.nf() - 3.0);
        let blocks = self.dims.len();
        let block = (0..blocks)
            .map(|j| {
                let wm = w.m_block[j];
                let xi = self.xi[j];
                let mut div = wm.derivative() + wm * self.sum_xi - wm * xi;
                if let Some(wp) = w.p_block[j] {
                    div -= wp * xi * (self.dims[j] - 1) as f64;
                }
                for k in (0..blocks).filter(|&k| k != j) {
                    div -= w.q(j, k) * self.xi[k] * self.dims[k] as f64;
                }
                div * factor
            })
            .collect();
        Ok(MixedThreeTensor { block })
    }

    /// `D_{a1a}` per block for the lapse jet `f`.
    pub fn d_tensor(&self, f: Jet) -> MixedThreeTensor<Jet> {
        let n = self.nf();
        let df = f.derivative();
        MixedThreeTensor {
            block: self
                .lambda
                .iter()
                .map(|l| df * ((*l * (n - 1.0) - self.scalar + self.lambda1) * (1.0 / (n - 2.0))))
                .collect(),
        }
    }

    pub fn bach(&self) -> Result<DiagonalTwoTensor<Jet>> {
        let w = self.weyl()?;
        let c = self.cotton();
        let blocks = self.dims.len();
        let inv = 1.0 / (self.nf() - 2.0);
        let mut first = Jet::zero();
        for j in 0..blocks {
            let r = self.dims[j] as f64;
            first += (-(c.block[j] * self.xi[j]) + self.lambda[j] * w.m_block[j]) * r;
        }
        let block = (0..blocks)
            .map(|j| {
                let cj = c.block[j];
                let mut acc = -cj.derivative() + cj * self.xi[j] - cj * self.sum_xi
                    + self.lambda1 * w.m_block[j];
                if let Some(wp) = w.p_block[j] {
                    acc += self.lambda[j] * wp * (self.dims[j] - 1) as f64;
                }
                for k in (0..blocks).filter(|&k| k != j) {
                    acc += self.lambda[k] * w.q(j, k) * self.dims[k] as f64;
                }
                acc * inv
            })
            .collect();
        Ok(DiagonalTwoTensor {
            first: first * inv,
            block,
        })
    }

    /// Frame Hessian of the lapse: `f_{1,1} = f''`, `f_{a,a} = f' ξ_a`.
    pub fn hessian(&self, f: Jet) -> DiagonalTwoTensor<Jet> {
        let df = f.derivative();
        DiagonalTwoTensor {
            first: df.derivative(),
            block: self.xi.iter().map(|x| df * *x).collect(),
        }
    }
}
