//! Truncated witnesses showing that no two derivative-norm classes are nested.
//!
//! For exponents `1 <= q < r < inf` four functions separate the classes:
//!
//! * the identity has bounded slope but infinite q- and r-action;
//! * a spike train with slope `2^n` on `[n, n + 2^{-n(q+1)}]` has finite
//!   q-action but unbounded slope;
//! * the tail function with `F'(x) = (1 + |x|)^{-1/q}` has finite r-action
//!   and infinite q-action;
//! * the cusp function with `G'(x) = |x|^{-1/r}` on `[-1, 1]` has finite
//!   q-action and infinite r-action.
//!
//! Infinite objects cannot be materialised, so each witness is truncated and
//! the report carries the truncated integrals. Divergence shows up as growth
//! in the truncation parameter.

use crate::math;
use crate::{Error, Result};

use super::{segment_action, Exponent};

/// Truncation parameters: number of spikes and the domain half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessTruncation {
    /// Spikes kept in the spike train (`n = 1..=spikes`).
    pub spikes: u32,
    /// Continuum witnesses live on `[-T, T]`; the cusp excludes `(-1/T, 1/T)`.
    pub half_width: f64,
}

impl Default for WitnessTruncation {
    fn default() -> Self {
        Self {
            spikes: 40,
            half_width: 1e6,
        }
    }
}

/// Truncated q- and r-integrals of one witness, plus its largest slope.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessIntegrals {
    pub q_integral: f64,
    pub r_integral: f64,
    pub sup_slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NonnestingReport {
    pub q: f64,
    pub r: f64,
    pub truncation: WitnessTruncation,
    pub identity: WitnessIntegrals,
    pub spike_train: WitnessIntegrals,
    pub tail: WitnessIntegrals,
    pub cusp: WitnessIntegrals,
}

/// Segments `(length, slope)` of the spike train truncated to `spikes` spikes.
pub fn spike_train_segments(q: f64, spikes: u32) -> impl Iterator<Item = (f64, f64)> {
    (1..=spikes).map(move |n| {
        let n = f64::from(n);
        (math::powf(2.0, -n * (q + 1.0)), math::powf(2.0, n))
    })
}

/// Builds the four truncated witnesses for `1 <= q < r < inf`.
pub fn nonnesting_witnesses(q: f64, r: f64, truncation: WitnessTruncation) -> Result<NonnestingReport> {
    if !(q >= 1.0 && q < r && r.is_finite()) {
        return Err(Error::param("q, r", "witnesses need 1 <= q < r < inf"));
    }
    let WitnessTruncation { spikes, half_width: t } = truncation;
    if spikes == 0 || !(t > 1.0) || !t.is_finite() {
        return Err(Error::param(
            "truncation",
            "need at least one spike and a half-width above 1",
        ));
    }

    let identity = WitnessIntegrals {
        q_integral: 2.0 * t,
        r_integral: 2.0 * t,
        sup_slope: 1.0,
    };

    let spike_train = WitnessIntegrals {
        q_integral: segment_action(spike_train_segments(q, spikes), Exponent::Finite(q)),
        r_integral: segment_action(spike_train_segments(q, spikes), Exponent::Finite(r)),
        sup_slope: math::powf(2.0, f64::from(spikes)),
    };

    // int_{-T}^{T} (1+|x|)^{-s} dx with s = 1 for the q-integral and s = r/q
    // for the r-integral.
    let s = r / q;
    let tail = WitnessIntegrals {
        q_integral: 2.0 * math::ln(1.0 + t),
        r_integral: 2.0 * (1.0 - math::powf(1.0 + t, 1.0 - s)) / (s - 1.0),
        sup_slope: 1.0,
    };

    // int_{tau <= |x| <= 1} |x|^{-s} dx with s = q/r < 1, and s = 1 for the
    // r-integral.
    let tau = 1.0 / t;
    let s = q / r;
    let cusp = WitnessIntegrals {
        q_integral: 2.0 * (1.0 - math::powf(tau, 1.0 - s)) / (1.0 - s),
        r_integral: 2.0 * math::ln(t),
        sup_slope: math::powf(tau, -1.0 / r),
    };

    Ok(NonnestingReport {
        q,
        r,
        truncation,
        identity,
        spike_train,
        tail,
        cusp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(q: f64, r: f64, spikes: u32, t: f64) -> NonnestingReport {
        nonnesting_witnesses(q, r, WitnessTruncation { spikes, half_width: t }).unwrap()
    }

    #[test]
    fn spike_train_q_integral_is_partial_geometric_sum() {
        for n in [1u32, 5, 20, 40] {
            let rep = report(2.0, 3.0, n, 10.0);
            let expected = 1.0 - math::powf(2.0, -f64::from(n));
            assert!((rep.spike_train.q_integral - expected).abs() <= 1e-15);
            assert_eq!(rep.spike_train.sup_slope, math::powf(2.0, f64::from(n)));
        }
    }

    #[test]
    fn identity_grows_linearly() {
        let rep = report(1.5, 2.5, 3, 1e3);
        assert_eq!(rep.identity.q_integral, 2e3);
        assert_eq!(rep.identity.sup_slope, 1.0);
    }

    #[test]
    fn tail_and_cusp_trends() {
        let mut last = None::<NonnestingReport>;
        for t in [1e2, 1e4, 1e6, 1e8] {
            let rep = report(2.0, 4.0, 10, t);
            // Tail: r-integral stays below 2 / (r/q - 1) = 2 while the
            // q-integral grows like 2 ln T.
            assert!(rep.tail.r_integral < 2.0);
            assert!((rep.tail.q_integral - 2.0 * math::ln(1.0 + t)).abs() < 1e-12);
            // Cusp: q-integral below 2 / (1 - q/r) = 4, r-integral = 2 ln T.
            assert!(rep.cusp.q_integral < 4.0);
            if let Some(prev) = last {
                assert!(rep.tail.q_integral > prev.tail.q_integral);
                assert!(rep.cusp.r_integral > prev.cusp.r_integral);
                assert!(rep.tail.r_integral >= prev.tail.r_integral);
            }
            last = Some(rep);
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        // Midpoint rule on a log-spaced grid as an independent check.
        fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
            let (la, lb) = (math::ln(a), math::ln(b));
            let h = (lb - la) / n as f64;
            (0..n)
                .map(|i| {
                    let x0 = math::exp(la + i as f64 * h);
                    let x1 = math::exp(la + (i + 1) as f64 * h);
                    let xm = 0.5 * (x0 + x1);
                    f(xm) * (x1 - x0)
                })
                .sum()
        }
        let (q, r, t) = (2.0, 3.0, 1e3);
        let rep = report(q, r, 5, t);
        let tail_r = 2.0 * integrate(|x| math::powf(x, -r / q), 1.0, 1.0 + t, 200_000);
        assert!((tail_r - rep.tail.r_integral).abs() / rep.tail.r_integral < 1e-6);
        let cusp_q = 2.0 * integrate(|x| math::powf(x, -q / r), 1.0 / t, 1.0, 200_000);
        assert!((cusp_q - rep.cusp.q_integral).abs() / rep.cusp.q_integral < 1e-6);
    }

    #[test]
    fn rejects_bad_exponent_order() {
        let tr = WitnessTruncation::default();
        assert!(nonnesting_witnesses(3.0, 2.0, tr).is_err());
        assert!(nonnesting_witnesses(2.0, 2.0, tr).is_err());
        assert!(nonnesting_witnesses(0.5, 2.0, tr).is_err());
        assert!(nonnesting_witnesses(2.0, f64::INFINITY, tr).is_err());
    }
}
