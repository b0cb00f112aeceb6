//! Block-compressed frame tensors.
//!
//! In the adapted frame `{E_1 = ∂_s, fiber directions}` every curvature
//! quantity of a multiply warped product is determined by a handful of
//! per-block functions of `s`. These containers hold those functions and
//! expand them into dense frame tensors on demand.

use super::dense::Tensor;
use crate::jet::Scalar;

/// Ricci eigenvalues: `lambda1` along `E_1`, one per block, and their trace.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RicciSpectrum<T = f64> {
    pub lambda1: T,
    pub lambda_block: Vec<T>,
    pub scalar: T,
}

/// Sectional-curvature classes of a curvature-type 4-tensor.
///
/// - `m_block[J]` = `T_{1a1a}` for `a` in block `J`
/// - `p_block[J]` = `T_{abab}` for `a != b` in block `J` (absent when `r_J = 1`)
/// - `q(J, K)` = `T_{aαaα}` for `a` in `J`, `α` in `K != J`
///
/// Every other component not related to these by the curvature symmetries
/// vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannClasses<T = f64> {
    pub m_block: Vec<T>,
    pub p_block: Vec<Option<T>>,
    q_upper: Vec<T>,
}

fn pair_slot(blocks: usize, j: usize, k: usize) -> usize {
    let (a, b) = if j < k { (j, k) } else { (k, j) };
    debug_assert!(a != b && b < blocks);
    // row-major upper triangle without the diagonal
    a * blocks - a * (a + 1) / 2 + (b - a - 1)
}

impl<T: Scalar> RiemannClasses<T> {
    pub fn new(m_block: Vec<T>, p_block: Vec<Option<T>>, q: impl Fn(usize, usize) -> T) -> Self {
        let blocks = m_block.len();
        let mut q_upper = Vec::with_capacity(blocks * blocks.saturating_sub(1) / 2);
        for a in 0..blocks {
            for b in a + 1..blocks {
                q_upper.push(q(a, b));
            }
        }
        Self {
            m_block,
            p_block,
            q_upper,
        }
    }

    pub fn blocks(&self) -> usize {
        self.m_block.len()
    }

    pub fn q(&self, j: usize, k: usize) -> T {
        self.q_upper[pair_slot(self.blocks(), j, k)]
    }

    /// All unordered block pairs `(J, K, q)` with `J < K`.
    pub fn q_pairs(&self) -> Vec<(usize, usize, T)> {
        let b = self.blocks();
        let mut out = Vec::new();
        for j in 0..b {
            for k in j + 1..b {
                out.push((j, k, self.q(j, k)));
            }
        }
        out
    }

    /// `T_{ijij}` for frame directions `i != j` with the given block layout.
    pub fn sectional(&self, layout: &[Option<usize>], i: usize, j: usize) -> T {
        match (layout[i], layout[j]) {
            (None, Some(b)) | (Some(b), None) => self.m_block[b],
            (Some(a), Some(b)) if a == b => self.p_block[a].unwrap_or_else(T::zero),
            (Some(a), Some(b)) => self.q(a, b),
            (None, None) => T::zero(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RiemannClasses<U> {
        RiemannClasses {
            m_block: self.m_block.iter().map(&f).collect(),
            p_block: self.p_block.iter().map(|p| p.as_ref().map(&f)).collect(),
            q_upper: self.q_upper.iter().map(&f).collect(),
        }
    }

    pub fn materialize(&self, layout: &[Option<usize>]) -> Tensor<T> {
        let n = layout.len();
        let mut t = Tensor::zeros(n, 4);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let sec = self.sectional(layout, i, j);
                t.set(&[i, j, i, j], sec);
                t.set(&[i, j, j, i], -sec);
            }
        }
        t
    }

    /// Largest absolute class value.
    pub fn max_abs(&self) -> f64 {
        self.m_block
            .iter()
            .chain(self.p_block.iter().flatten())
            .chain(self.q_upper.iter())
            .map(|x| x.real().abs())
            .fold(0.0, f64::max)
    }
}

/// Symmetric 2-tensor diagonal in the adapted frame (Schouten, Bach, Hessian).
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DiagonalTwoTensor<T = f64> {
    pub first: T,
    pub block: Vec<T>,
}

impl<T: Scalar> DiagonalTwoTensor<T> {
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DiagonalTwoTensor<U> {
        DiagonalTwoTensor {
            first: f(&self.first),
            block: self.block.iter().map(f).collect(),
        }
    }

    pub fn entry(&self, layout: &[Option<usize>], i: usize) -> T {
        match layout[i] {
            None => self.first,
            Some(b) => self.block[b],
        }
    }

    pub fn materialize(&self, layout: &[Option<usize>]) -> Tensor<T> {
        let n = layout.len();
        let mut t = Tensor::zeros(n, 2);
        for i in 0..n {
            t.set(&[i, i], self.entry(layout, i));
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        std::iter::once(&self.first)
            .chain(self.block.iter())
            .map(|x| x.real().abs())
            .fold(0.0, f64::max)
    }
}

/// 3-tensor whose only nonzero components are `T_{a1a} = -T_{aa1} = t_J`
/// for `a` in block `J` (Cotton tensor, D-tensor).
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct MixedThreeTensor<T = f64> {
    pub block: Vec<T>,
}

impl<T: Scalar> MixedThreeTensor<T> {
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MixedThreeTensor<U> {
        MixedThreeTensor {
            block: self.block.iter().map(f).collect(),
        }
    }

    pub fn materialize(&self, layout: &[Option<usize>]) -> Tensor<T> {
        let n = layout.len();
        let mut t = Tensor::zeros(n, 3);
        for (a, slot) in layout.iter().enumerate() {
            if let Some(b) = slot {
                t.set(&[a, 0, a], self.block[*b]);
                t.set(&[a, a, 0], -self.block[*b]);
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.block
            .iter()
            .map(|x| x.real().abs())
            .fold(0.0, f64::max)
    }
}
