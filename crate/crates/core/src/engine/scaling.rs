//! Coupling between the radius-1 game and the radius-R game.
//!
//! If an adversary at radius 1 plays inputs `z_t` and labels `y_t` against a
//! learner `A`, the dilated adversary plays `R z_t` with labels
//! `R^{(q-1)/q} y_t` (labels of `x -> R^{(q-1)/q} f(x / R)`, which has the
//! same q-action as `f`). The rescaled learner answers
//! `R^{(q-1)/q} A(x / R)`. Both games then see the same counted rounds and
//! every error is multiplied by `R^{(q-1)/q}`, so losses differ by exactly
//! `R^{(q-1)p/q}`.

use alloc::string::String;

use super::{GameConfig, Scenario};
use crate::adversaries::{Adversary, Certificate};
use crate::learners::Learner;
use crate::pwl::Exponent;
use crate::{math, Error, Point, Result};

/// `R^{(q-1)p/q}`.
pub fn radius_loss_factor(radius: f64, p: f64, q: f64) -> f64 {
    math::powf(radius, (q - 1.0) * p / q)
}

fn value_factor(radius: f64, q: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param("radius", "must be a positive finite real"));
    }
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::InvalidExponent(q));
    }
    Ok(math::powf(radius, (q - 1.0) / q))
}

fn shrink(x: &[f64], radius: f64) -> Point {
    x.iter().map(|v| v / radius).collect()
}

/// A radius-1 learner lifted to radius `R`.
#[derive(Debug, Clone)]
pub struct Rescaled<L> {
    inner: L,
    radius: f64,
    factor: f64,
}

impl<L> Rescaled<L> {
    pub fn new(inner: L, radius: f64, q: f64) -> Result<Self> {
        Ok(Self {
            inner,
            radius,
            factor: value_factor(radius, q)?,
        })
    }
}

impl<L: Learner> Learner for Rescaled<L> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self.factor * self.inner.predict(&shrink(x, self.radius))?)
    }
    fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        self.inner.observe(&shrink(x, self.radius), y / self.factor)
    }
}

/// A radius-1 adversary lifted to radius `R`.
#[derive(Debug, Clone)]
pub struct Dilated<A> {
    inner: A,
    radius: f64,
    q: f64,
    factor: f64,
    name: String,
}

impl<A: Adversary> Dilated<A> {
    pub fn new(inner: A, radius: f64, q: f64) -> Result<Self> {
        let name = alloc::format!("{}@R={radius}", inner.name());
        Ok(Self {
            factor: value_factor(radius, q)?,
            inner,
            radius,
            q,
            name,
        })
    }

    fn inner_scenario(&self, scenario: &Scenario) -> Scenario {
        match scenario {
            Scenario::S1 { radius } => Scenario::S1 {
                radius: radius / self.radius,
            },
            Scenario::S2 { radius } => Scenario::S2 {
                radius: radius / self.radius,
            },
            other => other.clone(),
        }
    }
}

impl<A: Adversary> Adversary for Dilated<A> {
    fn name(&self) -> &str {
        &self.name
    }

    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        self.inner.supports(&self.inner_scenario(scenario))
    }

    fn start(&mut self, config: &GameConfig) -> Result<()> {
        let inner = config.clone().with_scenario(self.inner_scenario(&config.scenario));
        self.inner.start(&inner)
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        Ok(self
            .inner
            .next_input(t)?
            .map(|z| z.iter().map(|v| v * self.radius).collect()))
    }

    fn reveal(&mut self, t: usize, x: &[f64], y_hat: f64) -> Result<f64> {
        Ok(self.factor * self.inner.reveal(t, &shrink(x, self.radius), y_hat / self.factor)?)
    }

    fn certificate(&self) -> Certificate {
        match self.inner.certificate() {
            Certificate::SmoothMember { function, q } => {
                match function.scale(1.0 / self.radius, Exponent::Finite(self.q)) {
                    Ok(function) => Certificate::SmoothMember { function, q },
                    Err(_) => Certificate::None,
                }
            }
            _ => Certificate::None,
        }
    }
}
