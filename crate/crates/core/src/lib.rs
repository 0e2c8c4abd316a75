//! Adversarial online learning of smooth real-valued functions on unbounded
//! domains.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithmic
//! piece of the simulation engine:
//!
//! * [`pwl`]: exact piecewise-linear arithmetic (evaluation, q-action,
//!   incremental action, radius scaling) plus the truncated non-nesting
//!   witnesses.
//! * [`classes`]: membership checks for `G_q`, `G_inf`, the slice class
//!   `G_{q,d}`, truncated linear classes and finite families, the 2-D tent
//!   construction and the two-member `m` value.
//! * [`engine`]: the learner/adversary protocol with Base, Scenario 1/2
//!   (radius `R`) and Scenario 3 (distance-weighted) loss accounting.
//! * [`learners`]: LININT, LININT', feasible-midpoint, span and zero learners.
//! * [`adversaries`]: the lower-bound constructions and randomized stress
//!   adversaries, each able to certify its revealed function post hoc.
//!
//! IO, the CLI and the experiment registry live in the `smoothgame` crate.
#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod adversaries;
pub mod classes;
pub mod engine;
mod error;
pub mod learners;
pub(crate) mod math;
pub mod pwl;

pub use error::{Error, Result};

/// A point of the input domain `R^d`.
pub type Point = alloc::vec::Vec<f64>;

/// Absolute slack on the action budget when testing class membership.
///
/// Boundary members (action exactly 1) are common in the constructions.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

/// Relative slack used when comparing a distance against a radius.
///
/// Constructions such as the unit-step diagonal produce distances of
/// `1 +- ulp`; they must still count as "within radius 1".
pub const RADIUS_TOLERANCE: f64 = 1e-12;

/// `true` when `distance <= radius` up to [`RADIUS_TOLERANCE`].
#[inline]
pub fn within_radius(distance: f64, radius: f64) -> bool {
    distance <= radius * (1.0 + RADIUS_TOLERANCE)
}
