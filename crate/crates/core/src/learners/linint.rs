use super::{scalar, Learner, LearnerState};
use crate::{within_radius, Result};

/// Interpolates every observed pair: `f_S(x)`, and 0 before any data.
pub fn linint_predict(state: &LearnerState, x: f64) -> f64 {
    state.interpolant().evaluate(x)
}

/// Uses only known points within distance 1 (inclusive) on each side:
///
/// * none on either side: 0;
/// * only a nearest left point `a` in `[x - 1, x]`: `f(a)`;
/// * only a nearest right point `b` in `[x, x + 1]`: `f(b)`;
/// * both: the chord `f(a) + (x - a)(f(b) - f(a))/(b - a)`, with `a` maximal
///   and `b` minimal.
///
/// A known input equal to `x` is both `a` and `b`, so its value is returned.
/// Distances are compared with the same relative slack the engine uses for
/// admissibility, so an input the engine treats as within radius 1 is seen
/// here as well.
pub fn linint_prime_predict(state: &LearnerState, x: f64) -> f64 {
    let pts = state.interpolant().breakpoints();
    let i = pts.partition_point(|p| p.0 < x);
    if let Some(&(u, v)) = pts.get(i) {
        if u == x {
            return v;
        }
    }
    let left = i
        .checked_sub(1)
        .map(|j| pts[j])
        .filter(|&(u, _)| within_radius(x - u, 1.0));
    let right = pts.get(i).copied().filter(|&(u, _)| within_radius(u - x, 1.0));
    match (left, right) {
        (None, None) => 0.0,
        (Some((_, fa)), None) => fa,
        (None, Some((_, fb))) => fb,
        (Some((a, fa)), Some((b, fb))) => fa + (x - a) * (fb - fa) / (b - a),
    }
}

/// The interpolating learner LININT.
#[derive(Debug, Clone, Default)]
pub struct Linint {
    state: LearnerState,
}

impl Linint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self) -> &LearnerState {
        &self.state
    }
}

impl Learner for Linint {
    fn name(&self) -> &str {
        "linint"
    }
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        Ok(linint_predict(&self.state, scalar(x)?))
    }
    fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        scalar(x)?;
        self.state.record(x, y);
        Ok(())
    }
}

/// The local interpolating learner LININT'.
#[derive(Debug, Clone, Default)]
pub struct LinintPrime {
    state: LearnerState,
}

impl LinintPrime {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self) -> &LearnerState {
        &self.state
    }
}

impl Learner for LinintPrime {
    fn name(&self) -> &str {
        "linint_prime"
    }
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        Ok(linint_prime_predict(&self.state, scalar(x)?))
    }
    fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        scalar(x)?;
        self.state.record(x, y);
        Ok(())
    }
}
