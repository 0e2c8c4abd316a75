//! Transcript-level checks: penalized-round sets, weight comparison and
//! post-hoc class membership.

use alloc::vec::Vec;

use super::{NearestIndex, Scenario, Transcript, WeightFunction};
use crate::classes::{is_member, Membership, SmoothClass};
use crate::pwl::BreakpointFunction;
use crate::{math, within_radius, Error, Point, Result};

/// `delta_t` for every input (`None` for the first).
pub fn min_distances(inputs: &[Point]) -> Vec<Option<f64>> {
    let Some(first) = inputs.first() else {
        return Vec::new();
    };
    let mut index = NearestIndex::new(first.len());
    inputs
        .iter()
        .map(|x| {
            let d = index.nearest_distance(x);
            index.insert(x);
            d
        })
        .collect()
}

/// The R-penalized rounds `{t >= 1 : min_{j<t} |x_t - x_j| <= R}`.
pub fn penalized_rounds(inputs: &[Point], radius: f64) -> Vec<usize> {
    min_distances(inputs)
        .into_iter()
        .enumerate()
        .filter_map(|(t, d)| d.filter(|&d| within_radius(d, radius)).map(|_| t))
        .collect()
}

/// Result of [`scenario_monotonicity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub small: Vec<usize>,
    pub large: Vec<usize>,
    pub loss_small: f64,
    pub loss_large: f64,
    /// `T_{R1} subset of T_{R2}`.
    pub nested: bool,
    /// `L^{R1} <= L^{R2}`.
    pub loss_monotone: bool,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.nested && self.loss_monotone
    }
}

/// Compares the free-guess game at radii `r1 <= r2` for a fixed input
/// sequence and fixed per-round errors (`errors[t]` for round `t`).
pub fn scenario_monotonicity_check(
    inputs: &[Point],
    errors: &[f64],
    p: f64,
    r1: f64,
    r2: f64,
) -> Result<MonotonicityReport> {
    if !(r1 > 0.0 && r1 <= r2) {
        return Err(Error::param("r1, r2", "need 0 < r1 <= r2"));
    }
    if errors.len() != inputs.len() {
        return Err(Error::DimensionMismatch {
            expected: inputs.len(),
            got: errors.len(),
        });
    }
    let small = penalized_rounds(inputs, r1);
    let large = penalized_rounds(inputs, r2);
    let loss = |set: &[usize]| set.iter().map(|&t| math::abs_pow(errors[t], p)).sum::<f64>();
    let (loss_small, loss_large) = (loss(&small), loss(&large));
    let nested = small.iter().all(|t| large.binary_search(t).is_ok());
    Ok(MonotonicityReport {
        nested,
        loss_monotone: loss_small <= loss_large,
        small,
        large,
        loss_small,
        loss_large,
    })
}

/// The transcript's loss re-scored under weight `h`.
pub fn weighted_loss(transcript: &Transcript, h: &WeightFunction) -> Result<f64> {
    transcript.loss_under(&Scenario::S3(h.clone()), transcript.config.p)
}

/// Result of [`ratio_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioCheck {
    /// `C_{g,h}`; infinite when the comparison is vacuous.
    pub constant: f64,
    pub loss_g: f64,
    pub loss_h: f64,
    /// `None` when `C_{g,h}` is infinite (nothing is asserted).
    pub holds: Option<bool>,
}

/// Checks `h(delta_t) e_t^p <= C_{g,h} g(delta_t) e_t^p` on every round and
/// the summed bound `L^h <= C_{g,h} L^g`, both with relative slack `1e-12`.
pub fn ratio_bound_check(transcript: &Transcript, g: &WeightFunction, h: &WeightFunction) -> Result<RatioCheck> {
    let constant = super::ratio_constant(g, h).value;
    let loss_g = weighted_loss(transcript, g)?;
    let loss_h = weighted_loss(transcript, h)?;
    if !constant.is_finite() {
        return Ok(RatioCheck {
            constant,
            loss_g,
            loss_h,
            holds: None,
        });
    }
    let slack = 1.0 + 1e-12;
    let p = transcript.config.p;
    let per_round = transcript
        .rounds
        .iter()
        .filter_map(|r| r.delta.map(|d| (d, r.error())))
        .all(|(d, e)| {
            let loss = math::abs_pow(e, p);
            loss == 0.0 || h.evaluate(d) * loss <= constant * g.evaluate(d) * loss * slack
        });
    let summed = loss_h <= constant * loss_g * slack;
    Ok(RatioCheck {
        constant,
        loss_g,
        loss_h,
        holds: Some(per_round && summed),
    })
}

/// Certifies a finished one-dimensional transcript against `class`.
///
/// The revealed pairs are interpolated (the interpolant has the least
/// action among all functions through them) and the interpolant is tested
/// for membership. Repeated inputs must carry the same label.
pub fn validate_transcript(transcript: &Transcript, class: &SmoothClass) -> Result<Membership> {
    if transcript.config.dimension != 1 {
        return Err(Error::UnsupportedClass(
            "transcript validation interpolates on the line",
        ));
    }
    let mut f = BreakpointFunction::empty();
    for r in &transcript.rounds {
        let x = r.x[0];
        match f.position(x) {
            Some(i) if (f.breakpoints()[i].1 - r.y_true).abs() > 1e-12 * r.y_true.abs().max(1.0) => {
                return Err(Error::InconsistentHistory);
            }
            Some(_) => {}
            None => {
                f.upsert(x, r.y_true);
            }
        }
    }
    is_member(class, &f)
}
