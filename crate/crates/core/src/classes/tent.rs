//! The separable tent function used against learners on `R^2`.
//!
//! Query points walk the diagonal `x_t = (t alpha, t eta)` with
//! `alpha = sqrt(1 - eta^2)`, so consecutive points are exactly one unit
//! apart. Round `t >= 1` owns the rectangle
//! `R_t = [t alpha - L, t alpha + L] x [t eta - b, t eta + b]` with
//! `L = alpha / 4`, `b = eta / 4`; on it the function is
//! `phi_t(y) * sigma_t * a * u(x - t alpha)` where `u` and `phi` are unit
//! triangular bumps of half-width `L` and `b`. Everything else is zero.

use alloc::vec::Vec;

use crate::math;
use crate::pwl::{BreakpointFunction, Exponent};
use crate::{Error, Result};

/// Slice direction: `X` varies the first coordinate at a fixed second one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Axis {
    X,
    Y,
}

/// One committed round of the construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TentRound {
    pub t: usize,
    pub sigma: bool,
    pub center: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeparableTentFunction {
    q: f64,
    eta: f64,
    alpha: f64,
    half_width_x: f64,
    half_width_y: f64,
    amplitude: f64,
    /// `sigmas[t - 1]` is the bit of round `t`.
    sigmas: Vec<bool>,
}

/// Summary of a batch of slice-action spot checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCheck {
    pub checked: usize,
    pub max_action: f64,
}

impl SeparableTentFunction {
    /// Empty construction (every `sigma_t` still open) for `q > 1` and
    /// `eta` in `(0, 1/10)`.
    pub fn new(q: f64, eta: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidExponent(q));
        }
        if !(eta > 0.0 && eta < 0.1) {
            return Err(Error::param("eta", "must lie in (0, 1/10)"));
        }
        let alpha = math::sqrt(1.0 - eta * eta);
        let l = alpha / 4.0;
        let b = eta / 4.0;
        let amp = |w: f64| math::powf(2.0 * math::powf(w, 1.0 - q), -1.0 / q);
        let amplitude = amp(l).min(amp(b));
        Ok(Self {
            q,
            eta,
            alpha,
            half_width_x: l,
            half_width_y: b,
            amplitude,
            sigmas: Vec::new(),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// `L`, the half-width of every rectangle along the first axis.
    pub fn half_width_x(&self) -> f64 {
        self.half_width_x
    }
    /// `b`, the half-width along the second axis.
    pub fn half_width_y(&self) -> f64 {
        self.half_width_y
    }
    /// `a`, the bump height.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    /// Number of committed rounds `t = 1..=rounds`.
    pub fn rounds_len(&self) -> usize {
        self.sigmas.len()
    }

    /// The query point of round `t` (`x_0` is the origin).
    pub fn query_point(&self, t: usize) -> [f64; 2] {
        let t = t as f64;
        [t * self.alpha, t * self.eta]
    }

    /// Commits the bit of the next round and returns the round index.
    pub fn push_round(&mut self, sigma: bool) -> usize {
        self.sigmas.push(sigma);
        self.sigmas.len()
    }

    pub fn sigma(&self, t: usize) -> Option<bool> {
        t.checked_sub(1).and_then(|i| self.sigmas.get(i).copied())
    }

    pub fn rounds(&self) -> impl Iterator<Item = TentRound> + '_ {
        self.sigmas.iter().enumerate().map(|(i, &sigma)| TentRound {
            t: i + 1,
            sigma,
            center: self.query_point(i + 1),
        })
    }

    /// Rectangles are pairwise disjoint iff `2L < alpha` and `2b < eta`.
    pub fn rectangles_disjoint(&self) -> bool {
        2.0 * self.half_width_x < self.alpha && 2.0 * self.half_width_y < self.eta
    }

    /// Round whose rectangle contains `point`, with the bump profile
    /// `phi_t(y) * u(x - t alpha)` there. Rounds not yet committed count too:
    /// the region is reserved for them.
    pub fn locate(&self, point: [f64; 2]) -> Option<(usize, f64)> {
        let [x, y] = point;
        let t = math::round(x / self.alpha);
        if !(t >= 1.0) || t > usize::MAX as f64 {
            return None;
        }
        let tf = t;
        let dx = (x - tf * self.alpha).abs();
        let dy = (y - tf * self.eta).abs();
        if dx > self.half_width_x || dy > self.half_width_y {
            return None;
        }
        let profile = (1.0 - dy / self.half_width_y) * (1.0 - dx / self.half_width_x);
        Some((t as usize, profile))
    }

    /// `f(point)`; exactly `sigma_t * a` at the query point `x_t`.
    pub fn evaluate(&self, point: [f64; 2]) -> f64 {
        match self.locate(point) {
            Some((t, profile)) if self.sigma(t) == Some(true) => profile * self.amplitude,
            _ => 0.0,
        }
    }

    /// The slice through `offset` along `axis`, as a breakpoint function.
    ///
    /// Rectangles are disjoint in both projections, so a slice meets at most
    /// one bump.
    pub fn slice(&self, axis: Axis, offset: f64) -> BreakpointFunction {
        let (step, own_half, cross_step, cross_half) = match axis {
            Axis::X => (self.alpha, self.half_width_x, self.eta, self.half_width_y),
            Axis::Y => (self.eta, self.half_width_y, self.alpha, self.half_width_x),
        };
        let t = math::round(offset / cross_step);
        if !(t >= 1.0) {
            return BreakpointFunction::empty();
        }
        let dist = (offset - t * cross_step).abs();
        if dist > cross_half || self.sigma(t as usize) != Some(true) {
            return BreakpointFunction::empty();
        }
        let height = self.amplitude * (1.0 - dist / cross_half);
        let c = t * step;
        BreakpointFunction::new(alloc::vec![(c - own_half, 0.0), (c, height), (c + own_half, 0.0)]).unwrap_or_default()
    }

    /// Exact q-action of one slice.
    pub fn slice_action(&self, axis: Axis, offset: f64, q: f64) -> Result<f64> {
        self.slice(axis, offset).action(q)
    }

    /// Offsets where slice actions peak or change form: rectangle centres and
    /// edges along the cross axis, for every committed round.
    pub fn critical_offsets(&self, axis: Axis) -> Vec<f64> {
        let (step, half) = match axis {
            Axis::X => (self.eta, self.half_width_y),
            Axis::Y => (self.alpha, self.half_width_x),
        };
        let mut out = Vec::with_capacity(3 * self.sigmas.len());
        for t in 1..=self.sigmas.len() {
            let c = t as f64 * step;
            out.extend_from_slice(&[c - half, c, c + half]);
        }
        out
    }

    /// Spot-checks slice actions on `per_axis` evenly spaced offsets over the
    /// occupied range of each axis plus every critical offset.
    pub fn check_slices(&self, per_axis: usize, q: f64) -> Result<SliceCheck> {
        let mut checked = 0;
        let mut max_action = 0.0f64;
        for axis in [Axis::X, Axis::Y] {
            let (step, half) = match axis {
                Axis::X => (self.eta, self.half_width_y),
                Axis::Y => (self.alpha, self.half_width_x),
            };
            let hi = (self.sigmas.len() as f64 + 1.0) * step + half;
            let grid = (0..per_axis).map(|i| -half + (hi + half) * i as f64 / (per_axis.max(2) - 1) as f64);
            for offset in grid.chain(self.critical_offsets(axis)) {
                max_action = max_action.max(self.slice_action(axis, offset, q)?);
                checked += 1;
            }
        }
        Ok(SliceCheck { checked, max_action })
    }

    /// Largest possible slice actions: `a^q 2 L^{1-q}` along x and
    /// `a^q 2 b^{1-q}` along y (both at most 1 by the choice of `a`).
    pub fn peak_slice_actions(&self) -> (f64, f64) {
        let aq = math::powf(self.amplitude, self.q);
        (
            aq * 2.0 * math::powf(self.half_width_x, 1.0 - self.q),
            aq * 2.0 * math::powf(self.half_width_y, 1.0 - self.q),
        )
    }

    /// Exponent the construction was built for.
    pub fn exponent(&self) -> Exponent {
        Exponent::Finite(self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent(n: usize) -> SeparableTentFunction {
        let mut tf = SeparableTentFunction::new(2.0, 0.05).unwrap();
        for t in 1..=n {
            tf.push_round(t % 3 != 0);
        }
        tf
    }

    #[test]
    fn parameters_for_q2_eta005() {
        let tf = tent(0);
        let alpha = (1.0f64 - 0.0025).sqrt();
        assert_eq!(tf.alpha(), alpha);
        // 2 L^{1-q} = 8/alpha, 2 b^{1-q} = 8/eta = 160; the y-bump binds:
        // a = 160^{-1/2}.
        assert!((tf.amplitude() - 160f64.powf(-0.5)).abs() < 1e-15);
        assert!((tf.amplitude() - 0.0790569).abs() < 1e-7);
        assert!(tf.rectangles_disjoint());
        assert!(SeparableTentFunction::new(2.0, 0.1).is_err());
        assert!(SeparableTentFunction::new(2.0, 0.0).is_err());
        assert!(SeparableTentFunction::new(1.0, 0.05).is_err());
    }

    #[test]
    fn unit_steps() {
        let tf = tent(0);
        for t in 1..200 {
            let [x0, y0] = tf.query_point(t - 1);
            let [x1, y1] = tf.query_point(t);
            let d = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
            assert!((d - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluate_examples() {
        let tf = tent(10);
        let a = tf.amplitude();
        assert_eq!(tf.evaluate([0.0, 0.0]), 0.0);
        assert_eq!(tf.evaluate([-5.0, 3.0]), 0.0);
        assert_eq!(tf.evaluate(tf.query_point(1)), a);
        assert_eq!(tf.evaluate(tf.query_point(3)), 0.0);
        assert_eq!(tf.evaluate(tf.query_point(11)), 0.0);
        // Halfway to the rectangle edge in both directions: a/4.
        let [x, y] = tf.query_point(2);
        let v = tf.evaluate([x + tf.half_width_x() / 2.0, y - tf.half_width_y() / 2.0]);
        assert!((v - a / 4.0).abs() < 1e-15);
    }

    #[test]
    fn slice_actions_match_closed_forms() {
        let tf = tent(10);
        let (px, py) = tf.peak_slice_actions();
        assert!(px <= 1.0 && py <= 1.0 + 1e-12);
        let [x1, y1] = tf.query_point(1);
        assert!((tf.slice_action(Axis::X, y1, 2.0).unwrap() - px).abs() < 1e-12);
        assert!((tf.slice_action(Axis::Y, x1, 2.0).unwrap() - py).abs() < 1e-12);
        assert_eq!(tf.slice_action(Axis::X, -1.0, 2.0).unwrap(), 0.0);
        let [_, y3] = tf.query_point(3);
        assert_eq!(tf.slice_action(Axis::X, y3, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn rectangles_pairwise_disjoint_by_brute_force() {
        let tf = tent(50);
        let (l, b) = (tf.half_width_x(), tf.half_width_y());
        for s in 1..=50 {
            for t in (s + 1)..=50 {
                let [xs, ys] = tf.query_point(s);
                let [xt, yt] = tf.query_point(t);
                let x_overlap = (xs - xt).abs() <= 2.0 * l;
                let y_overlap = (ys - yt).abs() <= 2.0 * b;
                assert!(
                    !(x_overlap || y_overlap),
                    "rectangles {s} and {t} overlap in a projection"
                );
            }
        }
    }

    #[test]
    fn spot_check_all_slices() {
        let tf = tent(100);
        let check = tf.check_slices(1000, 2.0).unwrap();
        assert_eq!(check.checked, 2000 + 6 * 100);
        assert!(check.max_action <= 1.0 + 1e-12);
    }
}
