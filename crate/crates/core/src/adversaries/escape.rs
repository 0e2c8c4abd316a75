//! Escaping to infinity along the geometric schedule
//! `x_0 = 0`, `x_i = x_{i-1} + c^i`.
//!
//! Each label is the previous one or the previous one plus `h`, whichever is
//! farther from the guess, so every round costs the learner at least `h/2`.
//! The segment ending at `x_i` has length `c^i` and slope at most
//! `h / c^i`, so the interpolant's q-action is at most
//! `h^q / (c^{q-1} - 1)`, which is at most 1 when
//! `h <= (c^{q-1} - 1)^{1/q}`. The gaps grow, so the sequence is not
//! radius-admissible.

use alloc::vec::Vec;

use super::{farther_of, Adversary, Certificate};
use crate::engine::{Scenario, WeightFunction};
use crate::pwl::{BreakpointFunction, Exponent};
use crate::{math, Error, Point, Result};

/// The first `len` schedule points. Fails when `c <= 1` or the schedule
/// overflows.
pub fn escape_schedule(c: f64, len: usize) -> Result<Vec<f64>> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::param("c", "geometric base must exceed 1"));
    }
    let mut xs = Vec::with_capacity(len);
    let mut x = 0.0f64;
    let mut step = 1.0f64;
    for i in 0..len {
        if i > 0 {
            step *= c;
            x += step;
        }
        if !x.is_finite() {
            return Err(Error::param(
                "N",
                alloc::format!("schedule overflows at step {i} for c = {c}"),
            ));
        }
        xs.push(x);
    }
    Ok(xs)
}

/// `(c^{q-1} - 1)^{1/q}`, the largest step height keeping the escape
/// interpolant inside `G_q`.
pub fn max_step_height(c: f64, q: f64) -> f64 {
    math::powf(math::powf(c, q - 1.0) - 1.0, 1.0 / q)
}

/// The geometric escape adversary.
#[derive(Debug, Clone)]
pub struct GeometricEscape {
    c: f64,
    h: f64,
    q: f64,
    schedule: Vec<f64>,
    values: Vec<f64>,
}

impl GeometricEscape {
    /// `steps` scored rounds after the round-0 input at the origin.
    pub fn new(c: f64, h: f64, q: f64, steps: usize) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidExponent(q));
        }
        if !(h > 0.0) {
            return Err(Error::param("h", "step height must be positive"));
        }
        let bound = max_step_height(c, q);
        if h > bound * (1.0 + 1e-12) {
            return Err(Error::param(
                "h",
                alloc::format!("exceeds the membership bound {bound}"),
            ));
        }
        Ok(Self {
            c,
            h,
            q,
            schedule: escape_schedule(c, steps + 1)?,
            values: Vec::new(),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn steps(&self) -> usize {
        self.schedule.len() - 1
    }

    pub fn schedule(&self) -> &[f64] {
        &self.schedule
    }
}

impl Adversary for GeometricEscape {
    fn name(&self) -> &str {
        "geometric_escape"
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        matches!(scenario, Scenario::Base | Scenario::S3(_))
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        Ok(self.schedule.get(t).map(|&x| alloc::vec![x]))
    }

    fn reveal(&mut self, t: usize, _x: &[f64], y_hat: f64) -> Result<f64> {
        let y = match (t, self.values.last()) {
            (0, _) | (_, None) => 0.0,
            (_, Some(&prev)) => farther_of(y_hat, prev, prev + self.h),
        };
        self.values.push(y);
        Ok(y)
    }

    fn certificate(&self) -> Certificate {
        let pts = self.schedule.iter().copied().zip(self.values.iter().copied()).collect();
        match BreakpointFunction::new(pts) {
            Ok(function) => Certificate::SmoothMember {
                function,
                q: Exponent::Finite(self.q),
            },
            Err(_) => Certificate::None,
        }
    }
}

/// Whether `sum_i g(c^i)` is expected to diverge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summability {
    Summable,
    Divergent,
    Unknown,
}

/// Geometric escape scored under a slowly decaying weight: round `i` has
/// `delta_i = c^i` and weight `g(c^i)`, so the weighted loss is at least
/// `(h/2)^p sum_{i <= N} g(c^i)`, unbounded whenever that series diverges.
#[derive(Debug, Clone)]
pub struct SlowDecayEscape {
    inner: GeometricEscape,
    weight: WeightFunction,
}

impl SlowDecayEscape {
    pub fn new(c: f64, h: f64, q: f64, steps: usize, weight: WeightFunction) -> Result<Self> {
        Ok(Self {
            inner: GeometricEscape::new(c, h, q, steps)?,
            weight,
        })
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    /// `sum_{i=1}^{n} g(c^i)`.
    pub fn weight_partial_sum(&self, n: usize) -> f64 {
        (1..=n)
            .map(|i| self.weight.evaluate(math::powf(self.inner.c, i as f64)))
            .sum()
    }

    /// `(h/2)^p sum_{i=1}^{N} g(c^i)`, the guaranteed weighted loss.
    pub fn forced_loss(&self, p: f64) -> f64 {
        math::powf(self.inner.h / 2.0, p) * self.weight_partial_sum(self.inner.steps())
    }

    /// Closed forms for registered weights; custom weights use a tail test on
    /// the terms `a_i = g(c^i)` at `i = M/2` and `i = M`, with `M <= 400`
    /// (smaller when `c^i` would overflow). `i a_i` holding steady means a
    /// harmonic-like tail; `i^2 a_i` shrinking means a tail summable like
    /// `1/i^2`.
    pub fn summability(&self) -> Summability {
        match &self.weight {
            WeightFunction::Identity | WeightFunction::Exponential { .. } | WeightFunction::Indicator => {
                Summability::Summable
            }
            WeightFunction::ConstantOne => Summability::Divergent,
            WeightFunction::Custom(_) => {
                let top = math::floor((1000.0 / math::log2(self.inner.c)).min(400.0)).max(4.0);
                let mid = math::floor(top / 2.0);
                let term = |i: f64| self.weight.evaluate(math::powf(self.inner.c, i));
                let (a_mid, a_top) = (term(mid), term(top));
                if top * a_top >= 0.9 * mid * a_mid {
                    Summability::Divergent
                } else if top * top * a_top <= mid * mid * a_mid {
                    Summability::Summable
                } else {
                    Summability::Unknown
                }
            }
        }
    }
}

impl Adversary for SlowDecayEscape {
    fn name(&self) -> &str {
        "slow_decay_escape"
    }
    fn supports(&self, scenario: &Scenario) -> bool {
        self.inner.supports(scenario)
    }
    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        self.inner.next_input(t)
    }
    fn reveal(&mut self, t: usize, x: &[f64], y_hat: f64) -> Result<f64> {
        self.inner.reveal(t, x, y_hat)
    }
    fn certificate(&self) -> Certificate {
        self.inner.certificate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{CustomKind, CustomWeight};
    use alloc::sync::Arc;

    #[test]
    fn schedule_and_bound() {
        assert_eq!(escape_schedule(2.0, 5).unwrap(), alloc::vec![0.0, 2.0, 6.0, 14.0, 30.0]);
        assert_eq!(max_step_height(2.0, 2.0), 1.0);
        assert!(escape_schedule(1.0, 3).is_err());
        assert!(escape_schedule(2.0, 2000).is_err());
        assert!(GeometricEscape::new(2.0, 1.01, 2.0, 10).is_err());
        assert!(GeometricEscape::new(2.0, 1.0, 2.0, 1000).is_ok());
    }

    #[test]
    fn summability_hints() {
        let mk = |w| SlowDecayEscape::new(2.0, 1.0, 2.0, 10, w).unwrap().summability();
        assert_eq!(mk(WeightFunction::Identity), Summability::Summable);
        assert_eq!(mk(WeightFunction::ConstantOne), Summability::Divergent);
        let log = CustomWeight::new(
            "inv_log2",
            CustomKind::Closure(Arc::new(|z: f64| 1.0 / libm::log2(1.0 + z))),
            true,
        )
        .unwrap();
        assert_eq!(mk(WeightFunction::Custom(log)), Summability::Divergent);
        let geo = CustomWeight::new("inv", CustomKind::Closure(Arc::new(|z: f64| 1.0 / z)), true).unwrap();
        assert_eq!(mk(WeightFunction::Custom(geo)), Summability::Summable);
    }

    #[test]
    fn inverse_log_partial_sums_dominate_shifted_harmonic() {
        let log = CustomWeight::new(
            "inv_log2",
            CustomKind::Closure(Arc::new(|z: f64| 1.0 / libm::log2(1.0 + z))),
            true,
        )
        .unwrap();
        let adv = SlowDecayEscape::new(2.0, 1.0, 2.0, 500, WeightFunction::Custom(log)).unwrap();
        // log2(1 + 2^i) <= i + 1, so each term is at least 1/(i+1).
        let harmonic_shift: f64 = (1..=500).map(|i| 1.0 / (i as f64 + 1.0)).sum();
        assert!(adv.weight_partial_sum(500) >= harmonic_shift);
    }
}
