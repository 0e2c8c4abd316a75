use super::{farther_of, Adversary, Certificate};
use crate::engine::{Scenario, WeightFunction};
use crate::pwl::{BreakpointFunction, Exponent};
use crate::{math, Error, Point, Result};

/// Two rounds under a distance weight `g`.
///
/// Round 0 asks 0 and reveals 0. Round 1 asks the probe `x_eps` and reveals
/// `+-x_eps^{(q-1)/q}` (that is `+-sqrt(x_eps)` for `q = 2`), whichever is
/// farther from the guess. The revealed interpolant has q-action exactly 1,
/// and the weighted loss is at least `g(x_eps) x_eps^{(q-1)p/q}`, which for
/// `p = q = 2` equals `x_eps g(x_eps)`. The probe defaults to the maximiser
/// of `z g(z)`, so the forced loss approaches `gamma = sup z g(z)`.
#[derive(Debug, Clone)]
pub struct TwoRoundWeighted {
    weight: WeightFunction,
    q: f64,
    probe: f64,
    magnitude: f64,
    label: Option<f64>,
}

impl TwoRoundWeighted {
    /// `probe` overrides the maximiser; it is required when `z g(z)` has no
    /// finite maximiser.
    pub fn new(weight: WeightFunction, q: f64, probe: Option<f64>) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidExponent(q));
        }
        let probe = match probe.or(weight.sup_z_times_g().argmax) {
            Some(x) if x > 0.0 && x.is_finite() => x,
            _ => {
                return Err(Error::param(
                    "x_eps",
                    "sup z g(z) is unbounded; supply a finite positive probe",
                ))
            }
        };
        let magnitude = math::powf(probe, (q - 1.0) / q);
        Ok(Self {
            weight,
            q,
            probe,
            magnitude,
            label: None,
        })
    }

    pub fn probe(&self) -> f64 {
        self.probe
    }

    /// `gamma = sup_{z>0} z g(z)` (possibly infinite).
    pub fn gamma(&self) -> f64 {
        self.weight.sup_z_times_g().value
    }

    /// `g(x_eps) |label|^p`, the loss forced on any learner.
    pub fn forced_loss(&self, p: f64) -> f64 {
        self.weight.evaluate(self.probe) * math::powf(self.magnitude, p)
    }
}

impl Adversary for TwoRoundWeighted {
    fn name(&self) -> &str {
        "two_round_weighted"
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        match scenario {
            Scenario::S1 { radius } | Scenario::S2 { radius } => crate::within_radius(self.probe, *radius),
            _ => true,
        }
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        Ok(match t {
            0 => Some(alloc::vec![0.0]),
            1 => Some(alloc::vec![self.probe]),
            _ => None,
        })
    }

    fn reveal(&mut self, t: usize, _x: &[f64], y_hat: f64) -> Result<f64> {
        if t == 0 {
            return Ok(0.0);
        }
        let y = farther_of(y_hat, self.magnitude, -self.magnitude);
        self.label = Some(y);
        Ok(y)
    }

    fn certificate(&self) -> Certificate {
        let mut pts = alloc::vec![(0.0, 0.0)];
        if let Some(y) = self.label {
            pts.push((self.probe, y));
        }
        match BreakpointFunction::new(pts) {
            Ok(function) => Certificate::SmoothMember {
                function,
                q: Exponent::Finite(self.q),
            },
            Err(_) => Certificate::None,
        }
    }
}
