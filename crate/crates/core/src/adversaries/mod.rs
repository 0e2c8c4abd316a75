//! Adversaries: the lower-bound constructions plus randomized stress
//! adversaries.
//!
//! An adversary emits an input, sees the learner's prediction, and then
//! reveals a label. Adaptive labels are the point of most constructions:
//! "whichever of two admissible values is farther from the guess" forces an
//! error of at least half their gap. Consistency of the revealed labels
//! with a class member is the adversary's responsibility; each one can
//! produce a [`Certificate`] that is checked after the game.

mod basis;
mod eps_step;
pub(crate) mod escape;
mod families;
mod random;
mod tent;
mod two_round;

pub use basis::BasisAdversary;
pub use eps_step::EpsStep;
pub use escape::{escape_schedule, max_step_height, GeometricEscape, SlowDecayEscape, Summability};
pub use families::{FamilyAdversary, FamilyKind};
pub use random::{random_finite_family, FamilyWalkAdversary, GreedyBudgetAdversary, InputMode, TargetAdversary};
pub use tent::TentAdversary;
pub use two_round::TwoRoundWeighted;

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::classes::{truncated_linear_evaluate, SeparableTentFunction};
use crate::engine::{GameConfig, Scenario, Transcript};
use crate::pwl::{BreakpointFunction, Exponent};
use crate::{Error, Point, Result, MEMBERSHIP_TOLERANCE};

/// Whichever of `a` and `b` is farther from `y_hat`; the larger one on a tie.
pub fn farther_of(y_hat: f64, a: f64, b: f64) -> f64 {
    let (da, db) = ((y_hat - a).abs(), (y_hat - b).abs());
    if da > db || (da == db && a >= b) {
        a
    } else {
        b
    }
}

/// An input/label strategy.
pub trait Adversary {
    fn name(&self) -> &str;

    /// Dimension of the inputs.
    fn dimension(&self) -> usize {
        1
    }

    /// Whether the adversary's inputs are legal under `scenario`.
    fn supports(&self, _scenario: &Scenario) -> bool {
        true
    }

    /// Called once before round 0.
    fn start(&mut self, _config: &GameConfig) -> Result<()> {
        Ok(())
    }

    /// The input of round `t`, or `None` to end the game.
    fn next_input(&mut self, t: usize) -> Result<Option<Point>>;

    /// The label of round `t` after seeing the prediction `y_hat`.
    fn reveal(&mut self, t: usize, x: &[f64], y_hat: f64) -> Result<f64>;

    /// Evidence that the revealed labels come from a class member.
    fn certificate(&self) -> Certificate;
}

impl<A: Adversary + ?Sized> Adversary for Box<A> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn supports(&self, scenario: &Scenario) -> bool {
        (**self).supports(scenario)
    }
    fn start(&mut self, config: &GameConfig) -> Result<()> {
        (**self).start(config)
    }
    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        (**self).next_input(t)
    }
    fn reveal(&mut self, t: usize, x: &[f64], y_hat: f64) -> Result<f64> {
        (**self).reveal(t, x, y_hat)
    }
    fn certificate(&self) -> Certificate {
        (**self).certificate()
    }
}

/// A witness that the revealed labels are values of a class member.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    None,
    /// A scalar function with q-action at most 1.
    SmoothMember {
        function: BreakpointFunction,
        q: Exponent,
    },
    /// A tent function whose slices all have q-action at most 1.
    SliceMember(SeparableTentFunction),
    /// Member `index` of a finite family.
    FamilyMember {
        members: Vec<BreakpointFunction>,
        index: usize,
    },
    /// The truncated linear function `g_v`.
    TruncatedLinear {
        v: Vec<f64>,
        r: f64,
    },
}

/// Outcome of [`Certificate::verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    /// The certified function reproduces every revealed label.
    pub consistent: bool,
    /// The certified function belongs to its class.
    pub member: bool,
    /// Action (or largest slice action) of the certified function; 0 for
    /// finite families and truncated linear targets.
    pub action: f64,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.consistent && self.member
    }
}

const LABEL_TOLERANCE: f64 = 1e-9;

fn agrees(a: f64, b: f64) -> bool {
    (a - b).abs() <= LABEL_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

impl Certificate {
    /// Checks the certified function against the transcript's labels and
    /// its class. Slice classes are spot-checked on `1000` offsets per axis
    /// plus every critical offset.
    pub fn verify(&self, transcript: &Transcript) -> Result<Verification> {
        let labels = transcript.rounds.iter().map(|r| (&r.x, r.y_true));
        match self {
            Certificate::None => Err(Error::UnsupportedClass("adversary issued no certificate")),
            Certificate::SmoothMember { function, q } => {
                let consistent = labels.clone().all(|(x, y)| agrees(function.evaluate(x[0]), y));
                let action = function.q_action(*q).value;
                Ok(Verification {
                    consistent,
                    member: action <= 1.0 + MEMBERSHIP_TOLERANCE,
                    action,
                })
            }
            Certificate::SliceMember(tf) => {
                let consistent = labels.clone().all(|(x, y)| agrees(tf.evaluate([x[0], x[1]]), y));
                let check = tf.check_slices(1000, tf.q())?;
                Ok(Verification {
                    consistent,
                    member: check.max_action <= 1.0 + MEMBERSHIP_TOLERANCE,
                    action: check.max_action,
                })
            }
            Certificate::FamilyMember { members, index } => {
                let f = members.get(*index).ok_or(Error::InconsistentHistory)?;
                let consistent = labels.clone().all(|(x, y)| agrees(f.evaluate(x[0]), y));
                Ok(Verification {
                    consistent,
                    member: true,
                    action: 0.0,
                })
            }
            Certificate::TruncatedLinear { v, r } => {
                let mut consistent = true;
                for (x, y) in labels {
                    consistent &= agrees(truncated_linear_evaluate(v, x, *r)?, y);
                }
                Ok(Verification {
                    consistent,
                    member: true,
                    action: 0.0,
                })
            }
        }
    }
}

/// Members of `members` consistent with every `(x, y)` pair.
pub fn consistent_members<'a>(
    members: &'a [BreakpointFunction],
    history: &'a [(f64, f64)],
) -> impl Iterator<Item = usize> + 'a {
    members
        .iter()
        .enumerate()
        .filter(move |(_, f)| history.iter().all(|&(x, y)| agrees(f.evaluate(x), y)))
        .map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farther_of_breaks_ties_upward() {
        assert_eq!(farther_of(0.0, -1.0, 1.0), 1.0);
        assert_eq!(farther_of(0.0, 1.0, -1.0), 1.0);
        assert_eq!(farther_of(0.2, -1.0, 1.0), -1.0);
        assert_eq!(farther_of(-0.2, -1.0, 1.0), 1.0);
        assert_eq!(farther_of(0.5, 0.0, 1.0), 1.0);
    }
}
