//! The feasible-midpoint learner and the hypothesis sets it runs on.
//!
//! The learner predicts the midpoint of the smallest and largest value any
//! still-consistent hypothesis takes at the query. A [`VersionSpace`]
//! answers that range query and shrinks as labels arrive. Finite families
//! enumerate their members; the tent and escape constructions describe
//! their (exponentially large) hypothesis sets by the bits still open.

use alloc::vec::Vec;

use super::{scalar, Learner};
use crate::adversaries::escape_schedule;
use crate::classes::SeparableTentFunction;
use crate::pwl::BreakpointFunction;
use crate::{Error, Result};

/// Absolute tolerance when comparing a revealed label with a hypothesis.
const CONSISTENCY_TOLERANCE: f64 = 1e-9;

/// A set of hypotheses consistent with the history so far.
pub trait VersionSpace {
    /// `(min, max)` over consistent hypotheses of their value at `x`, or
    /// `None` when no hypothesis is left.
    fn range_at(&self, x: &[f64]) -> Option<(f64, f64)>;
    /// Discards hypotheses disagreeing with `y` at `x`.
    fn restrict(&mut self, x: &[f64], y: f64) -> Result<()>;
    /// Number of surviving hypotheses when it is meaningful to count them.
    fn remaining(&self) -> Option<usize> {
        None
    }
}

/// Feasible-midpoint learner over any [`VersionSpace`].
#[derive(Debug, Clone)]
pub struct FeasibleMidpoint<V> {
    space: V,
}

impl<V: VersionSpace> FeasibleMidpoint<V> {
    pub fn new(space: V) -> Self {
        Self { space }
    }

    pub fn space(&self) -> &V {
        &self.space
    }
}

impl FeasibleMidpoint<FiniteVersionSpace> {
    /// Midpoint learner over a finite family.
    pub fn finite(members: Vec<BreakpointFunction>) -> Result<Self> {
        Ok(Self::new(FiniteVersionSpace::new(members)?))
    }
}

impl<V: VersionSpace> Learner for FeasibleMidpoint<V> {
    fn name(&self) -> &str {
        "feasible_midpoint"
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        let (lo, hi) = self.space.range_at(x).ok_or(Error::InconsistentHistory)?;
        Ok(if lo == hi { lo } else { 0.5 * (lo + hi) })
    }

    fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        self.space.restrict(x, y)
    }
}

/// Explicit finite family of scalar functions.
#[derive(Debug, Clone)]
pub struct FiniteVersionSpace {
    members: Vec<BreakpointFunction>,
    alive: Vec<bool>,
}

impl FiniteVersionSpace {
    pub fn new(members: Vec<BreakpointFunction>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::param("members", "a finite family must be nonempty"));
        }
        let alive = alloc::vec![true; members.len()];
        Ok(Self { members, alive })
    }

    pub fn members(&self) -> &[BreakpointFunction] {
        &self.members
    }

    /// Indices of members consistent with the history.
    pub fn consistent(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive.iter().enumerate().filter(|(_, &a)| a).map(|(i, _)| i)
    }
}

impl VersionSpace for FiniteVersionSpace {
    fn range_at(&self, x: &[f64]) -> Option<(f64, f64)> {
        let x = scalar(x).ok()?;
        self.consistent()
            .map(|i| self.members[i].evaluate(x))
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }

    fn restrict(&mut self, x: &[f64], y: f64) -> Result<()> {
        let x = scalar(x)?;
        for (alive, f) in self.alive.iter_mut().zip(&self.members) {
            if *alive && (f.evaluate(x) - y).abs() > CONSISTENCY_TOLERANCE {
                *alive = false;
            }
        }
        if self.alive.iter().any(|&a| a) {
            Ok(())
        } else {
            Err(Error::InconsistentHistory)
        }
    }

    fn remaining(&self) -> Option<usize> {
        Some(self.consistent().count())
    }
}

/// All tent functions of a fixed geometry, with bit `sigma_t` open until a
/// label inside rectangle `R_t` fixes it.
#[derive(Debug, Clone)]
pub struct TentVersionSpace {
    geometry: SeparableTentFunction,
    sigmas: Vec<Option<bool>>,
}

impl TentVersionSpace {
    pub fn new(q: f64, eta: f64) -> Result<Self> {
        Ok(Self {
            geometry: SeparableTentFunction::new(q, eta)?,
            sigmas: Vec::new(),
        })
    }

    fn sigma(&self, t: usize) -> Option<bool> {
        self.sigmas.get(t).copied().flatten()
    }

    fn point(x: &[f64]) -> Result<[f64; 2]> {
        match x {
            [a, b] => Ok([*a, *b]),
            _ => Err(Error::DimensionMismatch {
                expected: 2,
                got: x.len(),
            }),
        }
    }
}

impl VersionSpace for TentVersionSpace {
    fn range_at(&self, x: &[f64]) -> Option<(f64, f64)> {
        let p = Self::point(x).ok()?;
        let Some((t, profile)) = self.geometry.locate(p) else {
            return Some((0.0, 0.0));
        };
        let peak = profile * self.geometry.amplitude();
        Some(match self.sigma(t) {
            Some(true) => (peak, peak),
            Some(false) => (0.0, 0.0),
            None => (0.0, peak),
        })
    }

    fn restrict(&mut self, x: &[f64], y: f64) -> Result<()> {
        let p = Self::point(x)?;
        let close = |a: f64, b: f64| (a - b).abs() <= CONSISTENCY_TOLERANCE;
        let Some((t, profile)) = self.geometry.locate(p) else {
            return if close(y, 0.0) {
                Ok(())
            } else {
                Err(Error::InconsistentHistory)
            };
        };
        let peak = profile * self.geometry.amplitude();
        if peak == 0.0 {
            return if close(y, 0.0) {
                Ok(())
            } else {
                Err(Error::InconsistentHistory)
            };
        }
        let bit = if close(y, peak) {
            true
        } else if close(y, 0.0) {
            false
        } else {
            return Err(Error::InconsistentHistory);
        };
        match self.sigma(t) {
            Some(known) if known != bit => Err(Error::InconsistentHistory),
            _ => {
                if self.sigmas.len() <= t {
                    self.sigmas.resize(t + 1, None);
                }
                self.sigmas[t] = Some(bit);
                Ok(())
            }
        }
    }
}

/// Staircases on the geometric escape schedule `x_0 = 0`,
/// `x_i = x_{i-1} + c^i`: `f(x_0) = 0` and each step
/// `f(x_i) - f(x_{i-1})` is 0 or `h`. Labels must arrive in schedule order.
#[derive(Debug, Clone)]
pub struct EscapeVersionSpace {
    h: f64,
    schedule: Vec<f64>,
    values: Vec<f64>,
}

impl EscapeVersionSpace {
    pub fn new(c: f64, h: f64, steps: usize) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::param("h", "step height must be positive"));
        }
        Ok(Self {
            h,
            schedule: escape_schedule(c, steps + 1)?,
            values: Vec::new(),
        })
    }

    fn known(&self) -> BreakpointFunction {
        BreakpointFunction::new(self.schedule.iter().copied().zip(self.values.iter().copied()).collect())
            .unwrap_or_default()
    }
}

impl VersionSpace for EscapeVersionSpace {
    fn range_at(&self, x: &[f64]) -> Option<(f64, f64)> {
        let x = scalar(x).ok()?;
        let k = self.values.len();
        let Some(&last) = self.values.last() else {
            // f(x_0) = 0 is part of every hypothesis.
            return self.range_with(0.0, 0, x);
        };
        if x <= self.schedule[k - 1] {
            return Some({
                let v = self.known().evaluate(x);
                (v, v)
            });
        }
        self.range_with(last, k - 1, x)
    }

    fn restrict(&mut self, x: &[f64], y: f64) -> Result<()> {
        let x = scalar(x)?;
        let k = self.values.len();
        if k > 0 && x <= self.schedule[k - 1] {
            let v = self.known().evaluate(x);
            return if (v - y).abs() <= CONSISTENCY_TOLERANCE {
                Ok(())
            } else {
                Err(Error::InconsistentHistory)
            };
        }
        let Some(&next) = self.schedule.get(k) else {
            return Err(Error::InconsistentHistory);
        };
        if x != next {
            return Err(Error::UnsupportedClass(
                "escape hypotheses observe schedule points in order",
            ));
        }
        let prev = self.values.last().copied().unwrap_or(0.0);
        let step = y - prev;
        let ok = if k == 0 {
            y.abs() <= CONSISTENCY_TOLERANCE
        } else {
            step.abs() <= CONSISTENCY_TOLERANCE || (step - self.h).abs() <= CONSISTENCY_TOLERANCE
        };
        if !ok {
            return Err(Error::InconsistentHistory);
        }
        self.values.push(y);
        Ok(())
    }
}

impl EscapeVersionSpace {
    /// Range at `x` beyond the last known schedule point `x_k` with value
    /// `base`: every later step contributes `[0, h]` scaled by how much of
    /// its segment lies left of `x`.
    fn range_with(&self, base: f64, k: usize, x: f64) -> Option<(f64, f64)> {
        let mut spread = 0.0;
        for i in (k + 1)..self.schedule.len() {
            let (a, b) = (self.schedule[i - 1], self.schedule[i]);
            if x <= a {
                break;
            }
            spread += self.h * ((x - a) / (b - a)).min(1.0);
        }
        Some((base, base + spread))
    }
}
