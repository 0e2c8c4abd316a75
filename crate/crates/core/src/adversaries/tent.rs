use super::{farther_of, Adversary, Certificate};
use crate::classes::SeparableTentFunction;
use crate::engine::Scenario;
use crate::{within_radius, Point, Result};

/// Walks the unit-step diagonal in `R^2`, committing each tent bit after the
/// guess: `f(x_t)` is whichever of 0 and `a` is farther from `y_hat`, so the
/// error is at least `a/2` every round while every slice stays in `G_q`.
#[derive(Debug, Clone)]
pub struct TentAdversary {
    tent: SeparableTentFunction,
    steps: usize,
}

impl TentAdversary {
    pub fn new(q: f64, eta: f64, steps: usize) -> Result<Self> {
        Ok(Self {
            tent: SeparableTentFunction::new(q, eta)?,
            steps,
        })
    }

    pub fn tent(&self) -> &SeparableTentFunction {
        &self.tent
    }
}

impl Adversary for TentAdversary {
    fn name(&self) -> &str {
        "tent_2d"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        match scenario {
            Scenario::S1 { radius } => within_radius(1.0, *radius),
            _ => true,
        }
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        Ok((t <= self.steps).then(|| self.tent.query_point(t).to_vec()))
    }

    fn reveal(&mut self, t: usize, _x: &[f64], y_hat: f64) -> Result<f64> {
        if t == 0 {
            return Ok(0.0);
        }
        let a = self.tent.amplitude();
        let y = farther_of(y_hat, a, 0.0);
        self.tent.push_round(y == a);
        Ok(y)
    }

    fn certificate(&self) -> Certificate {
        Certificate::SliceMember(self.tent.clone())
    }
}
