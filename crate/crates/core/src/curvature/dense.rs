//! Dense frame tensors and the frame covariant derivative of a warped product.

use crate::jet::{Jet, Scalar};

/// Rank-`r` array over `n` frame directions, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T = f64> {
    n: usize,
    rank: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(n: usize, rank: usize) -> Self {
        Self {
            n,
            rank,
            data: vec![T::zero(); n.pow(rank as u32)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.n;
            flat /= self.n;
        }
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: T) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor<U> {
        Tensor {
            n: self.n,
            rank: self.rank,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Calls `visit(index, value)` for every entry.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize], T)) {
        let mut idx = vec![0; self.rank];
        for (flat, v) in self.data.iter().enumerate() {
            self.unflatten(flat, &mut idx);
            visit(&idx, *v);
        }
    }

    /// Builds a tensor entry by entry.
    pub fn from_fn(n: usize, rank: usize, f: impl Fn(&[usize]) -> T) -> Self {
        let mut t = Self::zeros(n, rank);
        let mut idx = vec![0; rank];
        for flat in 0..t.data.len() {
            t.unflatten(flat, &mut idx);
            t.data[flat] = f(&idx);
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.real().abs()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.n, self.rank), (other.n, other.rank));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.real() - b.real()).abs())
            .fold(0.0, f64::max)
    }
}

impl Tensor<Jet> {
    pub fn values(&self) -> Tensor<f64> {
        self.map(Jet::value)
    }
}

/// Connection 1-forms of the adapted frame evaluated on frame vectors,
/// `Γ(m, i, l) = ω_{mi}(E_l)`, with `dω_i = -Σ_j ω_{ij} ∧ ω_j`.
///
/// For `ds² + Σ h_j² g_j` the only nonzero coefficients that act on
/// block-invariant tensors are `Γ(1, a, a) = ξ_a` and `Γ(a, 1, a) = -ξ_a`;
/// the fiber-internal connection is dropped.
#[derive(Clone, Debug)]
pub struct FrameConnection {
    n: usize,
    // per (i, l): list of (m, Γ(m, i, l))
    entries: Vec<Vec<(usize, Jet)>>,
}

impl FrameConnection {
    pub fn warped(layout: &[Option<usize>], xi: &[Jet]) -> Self {
        let n = layout.len();
        let mut entries = vec![Vec::new(); n * n];
        for (a, slot) in layout.iter().enumerate() {
            if let Some(b) = slot {
                entries[a * n + a].push((0, xi[*b]));
                entries[a].push((a, -xi[*b]));
            }
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, m: usize, i: usize, l: usize) -> Jet {
        self.entries[i * self.n + l]
            .iter()
            .find(|(mm, _)| *mm == m)
            .map(|(_, g)| *g)
            .unwrap_or_else(Jet::zero)
    }

    fn terms(&self, i: usize, l: usize) -> &[(usize, Jet)] {
        &self.entries[i * self.n + l]
    }
}

/// `T_{i_1 … i_r, l}` with the derivative index appended last.
///
/// `T_{i_1…i_r,l} = E_l(T_{i_1…i_r}) + Σ_p Σ_m T_{i_1…m…i_r} ω_{m i_p}(E_l)`,
/// where only `E_1 = ∂_s` differentiates (entries are functions of `s`).
pub fn covariant_derivative(t: &Tensor<Jet>, conn: &FrameConnection) -> Tensor<Jet> {
    let n = t.dim();
    assert_eq!(n, conn.dim());
    let rank = t.rank();
    Tensor::from_fn(n, rank + 1, |idx| {
        let (base, l) = (&idx[..rank], idx[rank]);
        let mut acc = if l == 0 {
            t.get(base).derivative()
        } else {
            Jet::zero()
        };
        let mut moved = base.to_vec();
        for p in 0..rank {
            for &(m, g) in conn.terms(base[p], l) {
                moved[p] = m;
                acc += t.get(&moved) * g;
            }
            moved[p] = base[p];
        }
        acc
    })
}

/// Contracts the last index with index `slot` of a tensor of rank >= 2.
pub fn trace_with_last<T: Scalar>(t: &Tensor<T>, slot: usize) -> Tensor<T> {
    let n = t.dim();
    let rank = t.rank();
    assert!(rank >= 2 && slot < rank - 1);
    Tensor::from_fn(n, rank - 2, |idx| {
        let mut full = Vec::with_capacity(rank);
        let mut acc = T::zero();
        for k in 0..n {
            full.clear();
            full.extend_from_slice(&idx[..slot]);
            full.push(k);
            full.extend_from_slice(&idx[slot..]);
            full.push(k);
            acc = acc + t.get(&full);
        }
        acc
    })
}

/// Contracts indices `a < b` of a tensor.
pub fn trace_pair<T: Scalar>(t: &Tensor<T>, a: usize, b: usize) -> Tensor<T> {
    let n = t.dim();
    let rank = t.rank();
    assert!(a < b && b < rank);
    Tensor::from_fn(n, rank - 2, |idx| {
        let mut full = vec![0; rank];
        let mut acc = T::zero();
        for k in 0..n {
            let mut src = idx.iter();
            for (p, slot) in full.iter_mut().enumerate() {
                *slot = if p == a || p == b {
                    k
                } else {
                    *src.next().unwrap()
                };
            }
            acc = acc + t.get(&full);
        }
        acc
    })
}
