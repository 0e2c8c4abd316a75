//! Learner strategies.
//!
//! All learners are deterministic functions of the history they have
//! observed. Each one owns its state; the engine calls [`Learner::predict`]
//! then [`Learner::observe`] once per round, round 0 included.

mod linint;
mod midpoint;
mod span;

pub use linint::{linint_predict, linint_prime_predict, Linint, LinintPrime};
pub use midpoint::{EscapeVersionSpace, FeasibleMidpoint, FiniteVersionSpace, TentVersionSpace, VersionSpace};
pub use span::SpanLearner;

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::classes::SmoothClass;
use crate::pwl::BreakpointFunction;
use crate::{Error, Point, Result};

/// A prediction strategy.
pub trait Learner {
    fn name(&self) -> &str;
    fn predict(&mut self, x: &[f64]) -> Result<f64>;
    fn observe(&mut self, x: &[f64], y: f64) -> Result<()>;
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        (**self).predict(x)
    }
    fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        (**self).observe(x, y)
    }
}

/// Observed `(x, y)` pairs, plus their interpolant when inputs are scalar.
#[derive(Debug, Clone, Default)]
pub struct LearnerState {
    history: Vec<(Point, f64)>,
    interpolant: BreakpointFunction,
    class_info: Option<SmoothClass>,
}

impl LearnerState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_class(class: SmoothClass) -> Self {
        Self {
            class_info: Some(class),
            ..Self::default()
        }
    }

    /// Builds a state from one-dimensional history pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        let mut state = Self::new();
        for &(x, y) in pairs {
            state.record(&[x], y);
        }
        state
    }

    pub fn history(&self) -> &[(Point, f64)] {
        &self.history
    }

    pub fn class_info(&self) -> Option<&SmoothClass> {
        self.class_info.as_ref()
    }

    /// The interpolant `f_S` of the scalar history (a repeated input keeps its
    /// latest label).
    pub fn interpolant(&self) -> &BreakpointFunction {
        &self.interpolant
    }

    pub fn record(&mut self, x: &[f64], y: f64) {
        if x.len() == 1 {
            self.interpolant.upsert(x[0], y);
        }
        self.history.push((x.to_vec(), y));
    }
}

pub(crate) fn scalar(x: &[f64]) -> Result<f64> {
    match x {
        [v] => Ok(*v),
        _ => Err(Error::DimensionMismatch {
            expected: 1,
            got: x.len(),
        }),
    }
}

/// Always predicts 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroLearner;

impl Learner for ZeroLearner {
    fn name(&self) -> &str {
        "zero"
    }
    fn predict(&mut self, _x: &[f64]) -> Result<f64> {
        Ok(0.0)
    }
    fn observe(&mut self, _x: &[f64], _y: f64) -> Result<()> {
        Ok(())
    }
}

/// Runs a scalar learner on the first coordinate of its inputs.
#[derive(Debug, Clone)]
pub struct Projected<L> {
    inner: L,
}

impl<L> Projected<L> {
    pub fn new(inner: L) -> Self {
        Self { inner }
    }
}

impl<L: Learner> Learner for Projected<L> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        self.inner.predict(&x[..1])
    }
    fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        self.inner.observe(&x[..1], y)
    }
}
