//! Piecewise-linear functions on the real line.
//!
//! A [`BreakpointFunction`] is the interpolant `f_S` of a finite point set
//! `S = {(u_i, v_i)}`: linear between consecutive breakpoints and constant
//! beyond the extreme ones. The empty set denotes the zero function. Every
//! function the engine manipulates in one dimension has this form, so the
//! q-action `int |f'|^q` reduces to an exact sum over segments.

mod witness;

pub use witness::{nonnesting_witnesses, spike_train_segments, NonnestingReport, WitnessIntegrals, WitnessTruncation};

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Exponent of a derivative norm: a finite `q >= 1` or `q = inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    /// Validates `q >= 1`; `f64::INFINITY` maps to [`Exponent::Infinite`].
    pub fn new(q: f64) -> Result<Self> {
        if q == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else if q.is_finite() && q >= 1.0 {
            Ok(Exponent::Finite(q))
        } else {
            Err(Error::InvalidExponent(q))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(q) => q,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(q) => Some(q),
            Exponent::Infinite => None,
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Exponent::new(q)
    }
}

impl From<Exponent> for f64 {
    fn from(q: Exponent) -> f64 {
        q.value()
    }
}

/// The q-action of a function: `int |f'|^q` for finite `q`, the essential
/// supremum of `|f'|` for `q = inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue {
    pub q: Exponent,
    pub value: f64,
}

/// Action of a function given as a list of `(length, |slope|)` segments.
///
/// This is the closed-form segment sum shared by every piecewise-linear
/// object in the crate.
pub fn segment_action<I>(segments: I, q: Exponent) -> f64
where
    I: IntoIterator<Item = (f64, f64)>,
{
    match q {
        Exponent::Finite(q) => segments
            .into_iter()
            .map(|(len, slope)| {
                if slope == 0.0 {
                    0.0
                } else {
                    len * math::abs_pow(slope, q)
                }
            })
            .sum(),
        Exponent::Infinite => segments.into_iter().fold(0.0, |acc, (_, slope)| acc.max(slope.abs())),
    }
}

/// Piecewise-linear function with constant extension, stored as its sorted
/// breakpoints.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>"))]
pub struct BreakpointFunction {
    points: Vec<(f64, f64)>,
}

impl BreakpointFunction {
    /// The zero function `f_{}`.
    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    /// Builds `f_S` from breakpoints already sorted by strictly increasing
    /// coordinate.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for (index, &(u, v)) in points.iter().enumerate() {
            if !u.is_finite() || !v.is_finite() {
                return Err(Error::NonFiniteBreakpoint { index });
            }
            if index > 0 && points[index - 1].0 >= u {
                return Err(Error::UnsortedBreakpoints { index });
            }
        }
        Ok(Self { points })
    }

    /// Builds `f_S` from an unordered point set; repeated coordinates are
    /// rejected.
    pub fn from_unsorted(mut points: Vec<(f64, f64)>) -> Result<Self> {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = points.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateCoordinate { x: w[0].0 });
        }
        Self::new(points)
    }

    /// The constant function `value` (a single breakpoint at the origin).
    pub fn constant(value: f64) -> Self {
        Self {
            points: alloc::vec![(0.0, value)],
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the breakpoint at exactly `x`, if any.
    pub fn position(&self, x: f64) -> Option<usize> {
        self.points.binary_search_by(|p| p.0.total_cmp(&x)).ok()
    }

    /// `f_S(x)`; exact at breakpoints and outside the hull.
    pub fn evaluate(&self, x: f64) -> f64 {
        let pts = &self.points;
        let Some(&(u_first, v_first)) = pts.first() else {
            return 0.0;
        };
        if x <= u_first {
            return v_first;
        }
        let (u_last, v_last) = pts[pts.len() - 1];
        if x >= u_last {
            return v_last;
        }
        let j = pts.partition_point(|p| p.0 < x);
        let (u_hi, v_hi) = pts[j];
        if u_hi == x {
            return v_hi;
        }
        let (u_lo, v_lo) = pts[j - 1];
        v_lo + (x - u_lo) * (v_hi - v_lo) / (u_hi - u_lo)
    }

    /// Interior segments as `(length, |slope|)`; the constant extensions
    /// contribute nothing to any action.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| {
            let len = w[1].0 - w[0].0;
            (len, ((w[1].1 - w[0].1) / len).abs())
        })
    }

    /// Largest absolute slope (0 for constant functions).
    pub fn max_abs_slope(&self) -> f64 {
        self.segments().fold(0.0, |acc, (_, s)| acc.max(s))
    }

    /// `int |f'|^q`, or `max |f'|` when `q = inf`.
    pub fn q_action(&self, q: Exponent) -> ActionValue {
        ActionValue {
            q,
            value: segment_action(self.segments(), q),
        }
    }

    /// Convenience wrapper for a finite exponent; rejects `q < 1`.
    pub fn action(&self, q: f64) -> Result<f64> {
        Ok(self.q_action(Exponent::new(q)?).value)
    }

    /// Returns `f_{S u {(x, y)}}`. Fails when `x` is already a breakpoint.
    pub fn insert_point(&self, x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteBreakpoint {
                index: self.points.partition_point(|p| p.0 < x),
            });
        }
        match self.points.binary_search_by(|p| p.0.total_cmp(&x)) {
            Ok(_) => Err(Error::DuplicateCoordinate { x }),
            Err(at) => {
                let mut points = self.points.clone();
                points.insert(at, (x, y));
                Ok(Self { points })
            }
        }
    }

    /// In-place insertion; an existing breakpoint at `x` has its value
    /// replaced. Returns whether a new breakpoint was created.
    pub fn upsert(&mut self, x: f64, y: f64) -> bool {
        match self.points.binary_search_by(|p| p.0.total_cmp(&x)) {
            Ok(i) => {
                self.points[i].1 = y;
                false
            }
            Err(at) => {
                self.points.insert(at, (x, y));
                true
            }
        }
    }

    /// Change of the q-action caused by inserting `(x, y)`, computed from the
    /// (at most two) segments the new point touches. `x` must not already be
    /// a breakpoint.
    pub fn insertion_delta(&self, x: f64, y: f64, q: Exponent) -> f64 {
        let pts = &self.points;
        if pts.is_empty() {
            return 0.0;
        }
        let seg = |(u0, v0): (f64, f64), (u1, v1): (f64, f64)| {
            let len = u1 - u0;
            (len, ((v1 - v0) / len).abs())
        };
        let j = pts.partition_point(|p| p.0 < x);
        if j == 0 {
            return segment_action([seg((x, y), pts[0])], q);
        }
        if j == pts.len() {
            return segment_action([seg(pts[j - 1], (x, y))], q);
        }
        let (a, b) = (pts[j - 1], pts[j]);
        match q {
            Exponent::Finite(_) => segment_action([seg(a, (x, y)), seg((x, y), b)], q) - segment_action([seg(a, b)], q),
            // Inserting never lowers a maximum slope, but the old segment may
            // have been the maximiser; report the change of the global max.
            Exponent::Infinite => {
                let before = self.max_abs_slope();
                let others = pts
                    .windows(2)
                    .enumerate()
                    .filter(|&(i, _)| i != j - 1)
                    .fold(0.0f64, |acc, (_, w)| acc.max(seg(w[0], w[1]).1));
                let after = others.max(seg(a, (x, y)).1).max(seg((x, y), b).1);
                after - before
            }
        }
    }

    /// The radius-scaling operator `(S_R f)(x) = R^{-(q-1)/q} f(R x)`.
    ///
    /// Breakpoints map to `(u / R, R^{-(q-1)/q} v)`, which preserves the
    /// q-action exactly.
    pub fn scale(&self, radius: f64, q: Exponent) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::param("radius", "must be a positive finite real"));
        }
        let q = q.finite().ok_or(Error::InvalidExponent(f64::INFINITY))?;
        let factor = math::powf(radius, -(q - 1.0) / q);
        let points = self.points.iter().map(|&(u, v)| (u / radius, factor * v)).collect();
        Self::new(points)
    }

    /// Multiplies every value by `lambda`.
    pub fn scale_values(&self, lambda: f64) -> Self {
        Self {
            points: self.points.iter().map(|&(u, v)| (u, lambda * v)).collect(),
        }
    }

    /// Pointwise difference `self - other` as a breakpoint function on the
    /// union of both breakpoint sets.
    pub fn difference(&self, other: &Self) -> Self {
        let mut xs: Vec<f64> = self.points.iter().chain(other.points.iter()).map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        Self {
            points: xs
                .into_iter()
                .map(|x| (x, self.evaluate(x) - other.evaluate(x)))
                .collect(),
        }
    }

    pub fn into_points(self) -> Vec<(f64, f64)> {
        self.points
    }
}

/// `evaluate` as a free function, mirroring the operation list.
pub fn evaluate(f: &BreakpointFunction, x: f64) -> f64 {
    f.evaluate(x)
}

/// `q_action` as a free function; rejects `q < 1`.
pub fn q_action(f: &BreakpointFunction, q: f64) -> Result<ActionValue> {
    Ok(f.q_action(Exponent::new(q)?))
}

impl TryFrom<Vec<[f64; 2]>> for BreakpointFunction {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

impl From<BreakpointFunction> for Vec<[f64; 2]> {
    fn from(f: BreakpointFunction) -> Self {
        f.points.into_iter().map(|(u, v)| [u, v]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bf(points: &[(f64, f64)]) -> BreakpointFunction {
        BreakpointFunction::new(points.to_vec()).unwrap()
    }

    const Q2: Exponent = Exponent::Finite(2.0);

    #[test]
    fn empty_function_is_zero() {
        assert_eq!(BreakpointFunction::empty().evaluate(7.3), 0.0);
        assert_eq!(BreakpointFunction::empty().q_action(Q2).value, 0.0);
    }

    #[test]
    fn evaluate_interpolates_and_extends() {
        let f = bf(&[(0.0, 0.0), (2.0, 2.0)]);
        assert_eq!(f.evaluate(1.0), 1.0);
        assert_eq!(f.evaluate(5.0), 2.0);
        assert_eq!(f.evaluate(-3.0), 0.0);
        let g = bf(&[(-1.0, 0.3), (0.1, -7.25), (4.0, 1e-3)]);
        for &(u, v) in g.breakpoints() {
            assert_eq!(g.evaluate(u), v);
        }
        assert_eq!(g.evaluate(-1e300), 0.3);
        assert_eq!(g.evaluate(1e300), 1e-3);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(
            BreakpointFunction::new(vec![(0.0, 0.0), (0.0, 1.0)]),
            Err(Error::UnsortedBreakpoints { index: 1 })
        );
        assert_eq!(
            BreakpointFunction::new(vec![(f64::NAN, 0.0)]),
            Err(Error::NonFiniteBreakpoint { index: 0 })
        );
        assert_eq!(
            BreakpointFunction::from_unsorted(vec![(1.0, 0.0), (0.0, 2.0), (1.0, 3.0)]),
            Err(Error::DuplicateCoordinate { x: 1.0 })
        );
        let f = BreakpointFunction::from_unsorted(vec![(2.0, 1.0), (0.0, 0.0)]).unwrap();
        assert_eq!(f.breakpoints(), &[(0.0, 0.0), (2.0, 1.0)]);
    }

    #[test]
    fn q_action_examples() {
        assert_eq!(bf(&[(0.0, 0.0), (1.0, 1.0)]).action(2.0).unwrap(), 1.0);
        assert_eq!(bf(&[(0.0, 0.0), (2.0, 1.0)]).action(2.0).unwrap(), 0.5);
        assert_eq!(
            bf(&[(0.0, 0.0), (1.0, 3.0), (3.0, 1.0)])
                .q_action(Exponent::Infinite)
                .value,
            3.0
        );
        assert_eq!(q_action(&bf(&[(0.0, 0.0)]), 0.5), Err(Error::InvalidExponent(0.5)));
        // A constant function has zero action, a non-constant one positive action.
        assert_eq!(bf(&[(0.0, 4.0), (3.0, 4.0)]).action(3.0).unwrap(), 0.0);
        assert!(bf(&[(0.0, 4.0), (3.0, 4.5)]).action(3.0).unwrap() > 0.0);
    }

    #[test]
    fn insert_point_examples() {
        let f = BreakpointFunction::empty().insert_point(0.0, 5.0).unwrap();
        assert_eq!(f.evaluate(-10.0), 5.0);
        assert_eq!(f.evaluate(10.0), 5.0);

        let g = bf(&[(0.0, 0.0), (2.0, 0.0)]).insert_point(1.0, 3.0).unwrap();
        assert_eq!(g.breakpoints(), &[(0.0, 0.0), (1.0, 3.0), (2.0, 0.0)]);
        assert_eq!(g.insert_point(1.0, 2.0), Err(Error::DuplicateCoordinate { x: 1.0 }));
    }

    #[test]
    fn incremental_action_matches_lemma_values() {
        // Equidistant insertion: the increase is exactly 2 (y - f_S(x))^2 / d.
        let f = bf(&[(0.0, 0.0), (2.0, 0.0)]);
        for y in [-3.0, -0.5, 0.0, 0.25, 1.0, 7.0] {
            let g = f.insert_point(1.0, y).unwrap();
            assert_eq!(g.action(2.0).unwrap(), f.action(2.0).unwrap() + 2.0 * y * y);
            assert_eq!(f.insertion_delta(1.0, y, Q2), 2.0 * y * y);
        }
        // Asymmetric insertion: increase is y^2/1 + y^2/3 >= y^2 / min(1, 3).
        let f = bf(&[(0.0, 0.0), (4.0, 0.0)]);
        for y in [0.5f64, 1.0, 3.0] {
            let delta = f.insert_point(1.0, y).unwrap().action(2.0).unwrap() - f.action(2.0).unwrap();
            assert!((delta - (y * y + y * y / 3.0)).abs() <= 1e-12 * delta);
            assert!(delta >= y * y);
        }
    }

    #[test]
    fn insertion_delta_outside_hull_and_infinite_exponent() {
        let f = bf(&[(0.0, 1.0), (1.0, 2.0)]);
        assert_eq!(f.insertion_delta(-2.0, 3.0, Q2), 2.0 * 1.0);
        assert_eq!(f.insertion_delta(3.0, 2.0, Q2), 0.0);
        let inf = Exponent::Infinite;
        let g = f.insert_point(0.5, 4.0).unwrap();
        let d = f.insertion_delta(0.5, 4.0, inf);
        assert_eq!(d, g.max_abs_slope() - f.max_abs_slope());
    }

    #[test]
    fn scale_examples() {
        let f = bf(&[(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(f.scale(1.0, Q2).unwrap(), f);
        let g = f.scale(4.0, Q2).unwrap();
        assert_eq!(g.breakpoints(), &[(0.0, 0.0), (0.25, 0.5)]);
        assert_eq!(g.action(2.0).unwrap(), 1.0);
        assert!(f.scale(0.0, Q2).is_err());
        assert!(f.scale(-1.0, Q2).is_err());
        assert!(f.scale(2.0, Exponent::Infinite).is_err());
    }

    #[test]
    fn difference_on_union_of_breakpoints() {
        let f = bf(&[(0.0, 0.0), (1.0, 1.0)]);
        let g = bf(&[(0.5, 0.25)]);
        let d = f.difference(&g);
        assert_eq!(d.breakpoints(), &[(0.0, -0.25), (0.5, 0.25), (1.0, 0.75)]);
        for x in [-1.0, 0.2, 0.7, 3.0] {
            assert!((d.evaluate(x) - (f.evaluate(x) - g.evaluate(x))).abs() < 1e-15);
        }
    }

    #[cfg(feature = "serde")]
    #[test]
    fn json_is_array_of_pairs() {
        let f = bf(&[(0.0, 1.5), (2.0, -1.0)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[0.0,1.5],[2.0,-1.0]]");
        let back: BreakpointFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<BreakpointFunction>("[[1.0,0.0],[0.0,0.0]]").is_err());
    }
}
