//! Warping-function ODEs of D-flat vacuum static factors.
//!
//! Both families have the form
//!
//! ```text
//! h'' + c1 h = c0 h^(-p)
//! ```
//!
//! with first integral `(h')² + 2 c0/(p-1) h^(-(p-1)) + c1 h² = k`.
//! For a D-flat warped product `p = n - 1`, `c1 = R/(n(n-1))`; for the
//! warped factor of a Riemannian product `p = r1`, `c1 = R/((n-1)(r1+1))`.
//! `c0` is the constant called `a` in the periodic (Ejiri) family.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{LapseFunction, WarpingFunction};
use crate::jet::Jet;

/// Default number of RK4 steps over the requested domain.
pub const DEFAULT_STEPS: usize = 4096;

/// Tolerance on `|h(T) - h0|` when closing a periodic orbit.
pub const RETURN_TOLERANCE: f64 = 1e-8;

const BLOWUP_HIGH: f64 = 1e12;

/// `h'' = c0 h^(-p) - c1 h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpingOde {
    exponent: u32,
    linear_coeff: f64,
    forcing: f64,
}

impl WarpingOde {
    pub fn new(exponent: u32, linear_coeff: f64, forcing: f64) -> Result<Self> {
        if exponent < 2 {
            return Err(Error::BadRange(format!(
                "ODE exponent must be >= 2, got {exponent}"
            )));
        }
        if !linear_coeff.is_finite() || !forcing.is_finite() {
            return Err(Error::InvalidParameter("non-finite ODE coefficient".into()));
        }
        Ok(Self {
            exponent,
            linear_coeff,
            forcing,
        })
    }

    /// Warping equation of an `n`-dimensional D-flat warped product with
    /// scalar curvature `scalar`.
    pub fn dflat(n: usize, scalar: f64, c0: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooLow { needed: 3, got: n });
        }
        let nf = n as f64;
        Self::new((n - 1) as u32, scalar / (nf * (nf - 1.0)), c0)
    }

    /// Warping equation of the `(r1 + 1)`-dimensional warped factor inside an
    /// `n`-dimensional Riemannian product.
    pub fn product_factor(n: usize, r1: usize, scalar: f64, c0: f64) -> Result<Self> {
        if r1 < 2 || r1 + 2 > n {
            return Err(Error::BadRange(format!(
                "fiber dimension r1 = {r1} outside 2..=n-2 for n = {n}"
            )));
        }
        let denom = (n as f64 - 1.0) * (r1 as f64 + 1.0);
        Self::new(r1 as u32, scalar / denom, c0)
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn linear_coeff(&self) -> f64 {
        self.linear_coeff
    }

    pub fn forcing(&self) -> f64 {
        self.forcing
    }

    /// Alias of [`forcing`](Self::forcing) under the periodic family's name.
    pub fn a(&self) -> f64 {
        self.forcing
    }

    pub fn acceleration(&self, h: f64) -> f64 {
        self.forcing * h.powi(-(self.exponent as i32)) - self.linear_coeff * h
    }

    /// `h` through `h''''` from `(h, h')`, differentiating the equation.
    pub fn jet(&self, h: f64, dh: f64) -> Jet {
        let p = self.exponent as i32;
        let pf = p as f64;
        let (c0, c1) = (self.forcing, self.linear_coeff);
        let hp = h.powi(-p);
        let d2 = c0 * hp - c1 * h;
        let d3 = -pf * c0 * hp / h * dh - c1 * dh;
        let d4 = pf * (pf + 1.0) * c0 * hp / (h * h) * dh * dh - pf * c0 * hp / h * d2 - c1 * d2;
        Jet::from_derivatives(&[h, dh, d2, d3, d4])
    }

    /// Effective potential `V(h) = c1 h² + 2 c0/(p-1) h^(-(p-1))`, so that the
    /// first integral reads `(h')² + V(h) = k`.
    pub fn potential(&self, h: f64) -> f64 {
        let p = self.exponent as i32;
        self.linear_coeff * h * h + 2.0 * self.forcing / (p as f64 - 1.0) * h.powi(-(p - 1))
    }

    pub fn first_integral(&self, h: f64, dh: f64) -> FirstIntegralValue {
        FirstIntegralValue(dh * dh + self.potential(h))
    }

    /// Location and value of the potential well bottom, present when both
    /// `c0 > 0` and `c1 > 0`.
    pub fn potential_minimum(&self) -> Option<(f64, f64)> {
        if self.forcing > 0.0 && self.linear_coeff > 0.0 {
            let h = (self.forcing / self.linear_coeff).powf(1.0 / (self.exponent as f64 + 1.0));
            Some((h, self.potential(h)))
        } else {
            None
        }
    }

    /// Positive roots of `V(h) = k` (turning points where `h' = 0`), ascending.
    pub fn turning_points(&self, k: f64) -> Vec<f64> {
        let g = |h: f64| self.potential(h) - k;
        let (lo, hi) = (1e-6f64, 1e6f64);
        let samples = 4000;
        let ratio = (hi / lo).powf(1.0 / samples as f64);
        let mut roots = Vec::new();
        let mut a = lo;
        let mut ga = g(a);
        for _ in 0..samples {
            let b = a * ratio;
            let gb = g(b);
            if ga == 0.0 {
                roots.push(a);
            } else if ga * gb < 0.0 {
                roots.push(bisect(g, a, b));
            }
            a = b;
            ga = gb;
        }
        roots
    }
}

fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if ga * gm < 0.0 {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    0.5 * (a + b)
}

/// Value of the conserved quantity `k`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, serde::Serialize)]
pub struct FirstIntegralValue(pub f64);

pub fn first_integral(ode: &WarpingOde, h: f64, dh: f64) -> FirstIntegralValue {
    ode.first_integral(h, dh)
}

/// Initial-value problem for [`integrate_warping`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpingOdeParams {
    pub ode: WarpingOde,
    pub h0: f64,
    pub dh0: f64,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl WarpingOdeParams {
    pub fn new(ode: WarpingOde, h0: f64, dh0: f64, start: f64, end: f64) -> Self {
        Self {
            ode,
            h0,
            dh0,
            start,
            end,
            steps: DEFAULT_STEPS,
        }
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / self.steps as f64
    }
}

/// Fixed-step RK4 trajectory of a warping ODE, usable as a warping function.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeTrajectory {
    ode: WarpingOde,
    start: f64,
    step: f64,
    states: Vec<[f64; 2]>,
}

fn rk4_step(ode: &WarpingOde, y: [f64; 2], dt: f64) -> [f64; 2] {
    let f = |y: [f64; 2]| [y[1], ode.acceleration(y[0])];
    let k1 = f(y);
    let k2 = f([y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]]);
    let k3 = f([y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]]);
    let k4 = f([y[0] + dt * k3[0], y[1] + dt * k3[1]]);
    [
        y[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn healthy(y: [f64; 2], floor: f64) -> bool {
    y[0].is_finite() && y[1].is_finite() && y[0] > floor && y[0] < BLOWUP_HIGH
}

/// Integrates the warping ODE with classic RK4 at fixed step.
///
/// Fails with [`Error::BlowUp`] when `h` collapses towards zero, escapes to
/// infinity or becomes non-finite inside the domain.
pub fn integrate_warping(params: &WarpingOdeParams) -> Result<OdeTrajectory> {
    let WarpingOdeParams {
        ode,
        h0,
        dh0,
        start,
        end,
        steps,
    } = *params;
    if !(end > start) || steps == 0 {
        return Err(Error::InvalidParameter(format!(
            "integration needs end > start and steps > 0 (got [{start}, {end}], {steps})"
        )));
    }
    if !(h0 > 0.0) || !dh0.is_finite() {
        return Err(Error::NonPositiveInput(format!("initial h0 = {h0}")));
    }
    let floor = 1e-9 * h0.min(1.0);
    let dt = params.step();
    let mut states = Vec::with_capacity(steps + 1);
    let mut y = [h0, dh0];
    states.push(y);
    for i in 0..steps {
        let next = rk4_step(&ode, y, dt);
        if !healthy(next, floor) {
            return Err(Error::BlowUp {
                last_valid_s: start + i as f64 * dt,
            });
        }
        y = next;
        states.push(y);
    }
    Ok(OdeTrajectory {
        ode,
        start,
        step: dt,
        states,
    })
}

impl OdeTrajectory {
    pub fn ode(&self) -> &WarpingOde {
        &self.ode
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + (self.states.len() - 1) as f64 * self.step
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn initial_state(&self) -> (f64, f64) {
        (self.states[0][0], self.states[0][1])
    }

    /// `(s, h, h')` at every RK4 node.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.states
            .iter()
            .enumerate()
            .map(|(i, y)| (self.start + i as f64 * self.step, y[0], y[1]))
    }

    /// State at `s`, continuing from the preceding node with one partial RK4 step.
    pub fn state(&self, s: f64) -> Result<(f64, f64)> {
        let (lo, hi) = (self.start, self.end());
        let slack = 1e-9 * self.step;
        if !(s >= lo - slack && s <= hi + slack) {
            return Err(Error::OutOfDomain { s, lo, hi });
        }
        let last = self.states.len() - 1;
        let i = (((s - self.start) / self.step).floor().max(0.0) as usize).min(last);
        let tau = s - (self.start + i as f64 * self.step);
        let y = if tau.abs() <= 1e-15 * self.step.max(1.0) {
            self.states[i]
        } else {
            rk4_step(&self.ode, self.states[i], tau)
        };
        Ok((y[0], y[1]))
    }

    pub fn jet(&self, s: f64) -> Result<Jet> {
        let (h, dh) = self.state(s)?;
        Ok(self.ode.jet(h, dh))
    }

    /// `max |k(s) - k(start)|` over the nodes.
    pub fn first_integral_drift(&self) -> f64 {
        let k0 = self.ode.first_integral(self.states[0][0], self.states[0][1]).0;
        self.states
            .iter()
            .map(|y| (self.ode.first_integral(y[0], y[1]).0 - k0).abs())
            .fold(0.0, f64::max)
    }

    pub fn into_warping(self) -> WarpingFunction {
        WarpingFunction::OdeBacked(Arc::new(self))
    }
}

/// `f = c h'`, which solves `h' f' - f h'' = 0` identically.
pub fn lapse_from_warping(h: &WarpingFunction, c: f64) -> Result<LapseFunction> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::ZeroScale);
    }
    Ok(LapseFunction::DerivedFromWarping {
        warping: h.clone(),
        scale: c,
        block: None,
    })
}

/// Energy threshold of the periodic D-flat family:
/// `k0 = R/((n-1)(n-2)) * (n(n-1)a/R)^(2/n)`.
pub fn k0_threshold(n: usize, scalar: f64, a: f64) -> Result<f64> {
    if !(scalar > 0.0) {
        return Err(Error::NonPositiveInput(format!("R = {scalar}")));
    }
    if !(a > 0.0) {
        return Err(Error::NonPositiveInput(format!("a = {a}")));
    }
    if n < 3 {
        return Err(Error::DimensionTooLow { needed: 3, got: n });
    }
    let nf = n as f64;
    Ok(scalar / ((nf - 1.0) * (nf - 2.0)) * (nf * (nf - 1.0) * a / scalar).powf(2.0 / nf))
}

/// Whether `k` is strictly above `threshold`; values within a relative
/// 1e-12 of the threshold count as equal.
pub fn exceeds_threshold(k: f64, threshold: f64) -> bool {
    k > threshold + 1e-12 * threshold.abs()
}

/// Search parameters for [`find_periodic`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicSearch {
    pub ode: WarpingOde,
    /// Target first-integral value `k`.
    pub energy: f64,
    pub step: f64,
    /// Give up when no period closes within this length.
    pub max_length: f64,
}

impl PeriodicSearch {
    pub fn new(ode: WarpingOde, energy: f64) -> Self {
        Self {
            ode,
            energy,
            step: 1e-3,
            max_length: 1e3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PeriodicSolution {
    pub period: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub energy: f64,
    /// `(s, h, h')` at the RK4 nodes of one period, starting at `h_max`.
    pub samples: Vec<(f64, f64, f64)>,
}

/// Finds the periodic orbit with first integral `energy`, starting from the
/// outer turning point. Returns `None` when no bounded oscillation exists at
/// that energy (no potential well, or `energy` not above its bottom) or when
/// the orbit fails to close within [`RETURN_TOLERANCE`].
pub fn find_periodic(search: &PeriodicSearch) -> Result<Option<PeriodicSolution>> {
    let ode = search.ode;
    let Some((h_star, v_min)) = ode.potential_minimum() else {
        return Ok(None);
    };
    if !exceeds_threshold(search.energy, v_min) {
        return Ok(None);
    }
    let mut hi = 2.0 * h_star;
    while ode.potential(hi) <= search.energy {
        hi *= 2.0;
        if hi > BLOWUP_HIGH {
            return Ok(None);
        }
    }
    let h_max = bisect(|h| ode.potential(h) - search.energy, h_star, hi);
    let dt = search.step;
    let floor = 1e-9 * h_max.min(1.0);

    // Locate the instant within [0, dt] after `y` where h' crosses zero.
    let crossing = |y: [f64; 2], next: [f64; 2]| -> (f64, [f64; 2]) {
        let (mut a, mut b) = (0.0, dt);
        let sign_a = y[1].signum();
        let mut at_b = next;
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            let ym = rk4_step(&ode, y, m);
            if ym[1] == 0.0 {
                return (m, ym);
            }
            if ym[1].signum() == sign_a {
                a = m;
            } else {
                b = m;
                at_b = ym;
            }
        }
        (b, at_b)
    };

    let mut y = [h_max, 0.0];
    let mut samples = vec![(0.0, y[0], y[1])];
    let mut s = 0.0;
    let mut crossings = 0;
    let mut h_min = h_max;
    // The orbit leaves h_max with h' < 0; skip the initial zero.
    let mut prev_sign = -1.0;
    while s < search.max_length {
        let next = rk4_step(&ode, y, dt);
        if !healthy(next, floor) {
            return Err(Error::BlowUp { last_valid_s: s });
        }
        let sign = if next[1] == 0.0 { prev_sign } else { next[1].signum() };
        if sign != prev_sign {
            let (tau, at) = crossing(y, next);
            crossings += 1;
            if crossings == 1 {
                h_min = at[0];
            } else {
                let period = s + tau;
                if (at[0] - h_max).abs() > RETURN_TOLERANCE {
                    return Ok(None);
                }
                return Ok(Some(PeriodicSolution {
                    period,
                    h_min,
                    h_max,
                    energy: search.energy,
                    samples,
                }));
            }
        }
        prev_sign = sign;
        y = next;
        s += dt;
        samples.push((s, y[0], y[1]));
    }
    Ok(None)
}
