//! Truncated derivative jets in one variable.
//!
//! A [`Jet`] stores a function value together with its first few derivatives
//! with respect to the base coordinate `s`. Arithmetic follows the Leibniz
//! rule, so any algebraic expression built from jets carries its exact
//! derivatives along with it. The `order` field records how many derivatives
//! are trustworthy; combining two jets keeps the smaller order, and
//! [`Jet::derivative`] drops one.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Highest derivative order a jet can carry.
pub const MAX_ORDER: usize = 4;

const SLOTS: usize = MAX_ORDER + 1;

const BINOMIAL: [[f64; SLOTS]; SLOTS] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    d: [f64; SLOTS],
    // -1 means not even the value is known (derivative of an order-0 jet).
    order: i8,
}

impl Jet {
    /// Jet of a constant: all derivatives are exactly zero.
    pub fn constant(value: f64) -> Self {
        let mut d = [0.0; SLOTS];
        d[0] = value;
        Self {
            d,
            order: MAX_ORDER as i8,
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// Builds a jet from `[f, f', f'', ...]`; the order is `derivs.len() - 1`
    /// (capped at [`MAX_ORDER`]).
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        assert!(!derivs.is_empty(), "a jet needs at least a value");
        let mut d = [0.0; SLOTS];
        let len = derivs.len().min(SLOTS);
        d[..len].copy_from_slice(&derivs[..len]);
        Self {
            d,
            order: (len - 1) as i8,
        }
    }

    /// The independent variable itself at `s`.
    pub fn variable(s: f64) -> Self {
        Self::from_derivatives(&[s, 1.0, 0.0, 0.0, 0.0])
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.d[0]
    }

    /// Number of trustworthy derivatives, `None` when even the value is unknown.
    pub fn order(&self) -> Option<usize> {
        usize::try_from(self.order).ok()
    }

    /// The `k`-th derivative if the jet carries it.
    pub fn get(&self, k: usize) -> Option<f64> {
        match self.order() {
            Some(order) if k <= order => Some(self.d[k]),
            _ => None,
        }
    }

    /// Raw derivative slot, regardless of order bookkeeping.
    pub fn raw(&self, k: usize) -> f64 {
        self.d[k]
    }

    pub fn derivative(&self) -> Self {
        let mut d = [0.0; SLOTS];
        d[..MAX_ORDER].copy_from_slice(&self.d[1..]);
        Self {
            d,
            order: self.order - 1,
        }
    }

    /// Caps the order, zeroing the discarded slots.
    pub fn truncate(mut self, order: usize) -> Self {
        let order = order.min(MAX_ORDER) as i8;
        if order < self.order {
            self.order = order;
        }
        for k in (self.order.max(-1) + 1) as usize..SLOTS {
            self.d[k] = 0.0;
        }
        self
    }

    pub fn recip(&self) -> Self {
        let mut g = [0.0; SLOTS];
        let f0 = self.d[0];
        g[0] = 1.0 / f0;
        // f g = 1  =>  g^(n) = -(1/f) * sum_{k=1..n} C(n,k) f^(k) g^(n-k)
        for n in 1..SLOTS {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += BINOMIAL[n][k] * self.d[k] * g[n - k];
            }
            g[n] = -acc / f0;
        }
        Self {
            d: g,
            order: self.order,
        }
    }

    pub fn powi(&self, exp: i32) -> Self {
        if exp < 0 {
            return self.recip().powi(-exp);
        }
        let mut acc = Jet::constant(1.0);
        for _ in 0..exp {
            acc = acc * *self;
        }
        acc
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    /// Shifts the expansion point by `ds` (Taylor re-expansion, truncated).
    pub fn shifted(&self, ds: f64) -> Self {
        let Some(order) = self.order() else {
            return *self;
        };
        let mut d = [0.0; SLOTS];
        for (k, slot) in d.iter_mut().enumerate().take(order + 1) {
            let mut term = 1.0;
            let mut acc = 0.0;
            for j in 0..=(order - k) {
                acc += self.d[k + j] * term;
                term *= ds / (j + 1) as f64;
            }
            *slot = acc;
        }
        Self {
            d,
            order: self.order,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut d = self.d;
        d.iter_mut().for_each(|x| *x *= c);
        Self {
            d,
            order: self.order,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self.order() {
            Some(order) => self.d[..=order].iter().all(|x| x.is_finite()),
            None => true,
        }
    }
}

impl Default for Jet {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(rhs.d) {
            *a += b;
        }
        Jet {
            d,
            order: self.order.min(rhs.order),
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut d = [0.0; SLOTS];
        for (n, slot) in d.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..=n {
                acc += BINOMIAL[n][k] * self.d[k] * rhs.d[n - k];
            }
            *slot = acc;
        }
        Jet {
            d,
            order: self.order.min(rhs.order),
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.d[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.d[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scale(1.0 / rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        (-rhs) + self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for Jet {
    fn sum<I: Iterator<Item = Jet>>(iter: I) -> Jet {
        iter.fold(Jet::zero(), |a, b| a + b)
    }
}

/// Minimal ring interface shared by `f64` and [`Jet`], so class containers and
/// dense tensors can be instantiated over either.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Send
    + Sync
    + std::fmt::Debug
{
    fn zero() -> Self;
    fn real(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn real(&self) -> f64 {
        *self
    }
}

impl Scalar for Jet {
    fn zero() -> Self {
        Jet::zero()
    }
    fn real(&self) -> f64 {
        self.value()
    }
}
