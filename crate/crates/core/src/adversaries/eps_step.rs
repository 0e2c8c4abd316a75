use alloc::vec::Vec;

use super::{farther_of, Adversary, Certificate};
use crate::engine::Scenario;
use crate::pwl::{BreakpointFunction, Exponent};
use crate::{math, within_radius, Error, Point, Result};

/// Unit steps with slope `eps = N^{-1/q}`.
///
/// Inputs are `x_i = i` for `i = 0..=N`, labels start at 0 and move by
/// `+eps` or `-eps`, whichever is farther from the guess. The interpolant has
/// `|f'| = eps` on `[0, N]`, hence q-action `N eps^q = 1`, and every round
/// costs at least `(eps/2)^p`, for a total of at least `N^{1-p/q} / 2^p`.
#[derive(Debug, Clone)]
pub struct EpsStep {
    n: usize,
    q: f64,
    eps: f64,
    values: Vec<f64>,
}

impl EpsStep {
    pub fn new(n: usize, q: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("N", "need at least one step"));
        }
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidExponent(q));
        }
        Ok(Self {
            n,
            q,
            eps: math::powf(n as f64, -1.0 / q),
            values: Vec::new(),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `N (eps/2)^p`.
    pub fn forced_loss(&self, p: f64) -> f64 {
        self.n as f64 * math::powf(self.eps / 2.0, p)
    }
}

impl Adversary for EpsStep {
    fn name(&self) -> &str {
        "eps_step"
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        match scenario {
            Scenario::S1 { radius } => within_radius(1.0, *radius),
            _ => true,
        }
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        Ok((t <= self.n).then(|| alloc::vec![t as f64]))
    }

    fn reveal(&mut self, _t: usize, _x: &[f64], y_hat: f64) -> Result<f64> {
        let y = match self.values.last() {
            None => 0.0,
            Some(&prev) => farther_of(y_hat, prev + self.eps, prev - self.eps),
        };
        self.values.push(y);
        Ok(y)
    }

    fn certificate(&self) -> Certificate {
        let pts = self.values.iter().enumerate().map(|(i, &v)| (i as f64, v)).collect();
        match BreakpointFunction::new(pts) {
            Ok(function) => Certificate::SmoothMember {
                function,
                q: Exponent::Finite(self.q),
            },
            Err(_) => Certificate::None,
        }
    }
}
