//! The turn-based learner/adversary protocol and its loss accounting.
//!
//! Every round the adversary emits an input, the learner predicts, and the
//! adversary reveals a label (it may look at the prediction first). Round 0
//! is never scored. Later rounds are scored according to the [`Scenario`]:
//!
//! | scenario | admissibility                 | counted              | weight      |
//! |----------|-------------------------------|----------------------|-------------|
//! | `Base`   | any input                     | always               | 1           |
//! | `S1(R)`  | `delta_t <= R`, else an error | always               | 1           |
//! | `S2(R)`  | any input                     | iff `delta_t <= R`   | 1           |
//! | `S3(g)`  | inputs must be distinct       | always               | `g(delta_t)`|
//!
//! where `delta_t` is the Euclidean distance from `x_t` to the nearest
//! earlier input.

mod checks;
mod nearest;
mod scaling;
mod weights;

pub use checks::{
    min_distances, penalized_rounds, ratio_bound_check, scenario_monotonicity_check, validate_transcript,
    weighted_loss, MonotonicityReport, RatioCheck,
};
pub use nearest::NearestIndex;
pub use scaling::{radius_loss_factor, Dilated, Rescaled};
pub use weights::{ratio_constant, CustomKind, CustomWeight, Supremum, WeightFunction};

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::adversaries::Adversary;
use crate::learners::Learner;
use crate::math;
use crate::pwl::Exponent;
use crate::{within_radius, Error, Point, Result};

/// How rounds are scored.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Base,
    /// Inputs must stay within `radius` of an earlier input.
    S1 {
        radius: f64,
    },
    /// Rounds farther than `radius` from every earlier input are free.
    S2 {
        radius: f64,
    },
    /// Every round is weighted by `g(delta_t)`.
    S3(WeightFunction),
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::S1 { radius } | Scenario::S2 { radius } if !(*radius > 0.0) || !radius.is_finite() => {
                Err(Error::param("radius", "must be a positive finite real"))
            }
            _ => Ok(()),
        }
    }

    /// Short label, e.g. `s2:R=1` or `s3:exp:c=2`.
    pub fn label(&self) -> String {
        match self {
            Scenario::Base => "base".into(),
            Scenario::S1 { radius } => alloc::format!("s1:R={radius}"),
            Scenario::S2 { radius } => alloc::format!("s2:R={radius}"),
            Scenario::S3(w) => alloc::format!("s3:{}", w.label()),
        }
    }

    /// `(counted, weight)` for a round at distance `delta` (`None` for round
    /// 0). `t` is only used in error reports.
    pub fn score(&self, t: usize, delta: Option<f64>) -> Result<(bool, f64)> {
        let Some(delta) = delta else {
            return Ok((false, 0.0));
        };
        match self {
            Scenario::Base => Ok((true, 1.0)),
            Scenario::S1 { radius } => {
                if within_radius(delta, *radius) {
                    Ok((true, 1.0))
                } else {
                    Err(Error::InadmissibleInput {
                        t,
                        delta,
                        radius: *radius,
                    })
                }
            }
            Scenario::S2 { radius } => {
                let counted = within_radius(delta, *radius);
                Ok((counted, if counted { 1.0 } else { 0.0 }))
            }
            Scenario::S3(g) => {
                if delta == 0.0 {
                    Err(Error::DuplicateInput { t })
                } else {
                    Ok((true, g.evaluate(delta)))
                }
            }
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parameters of one game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    /// Loss exponent `p > 0`.
    pub p: f64,
    /// Smoothness exponent of the target class.
    pub q: Exponent,
    pub scenario: Scenario,
    /// Maximum number of scored rounds after round 0, so a game has at most
    /// `horizon + 1` rounds.
    pub horizon: usize,
    pub dimension: usize,
    pub seed: u64,
}

impl GameConfig {
    /// One-dimensional game with horizon 1000 and seed 0.
    pub fn new(p: f64, q: f64, scenario: Scenario) -> Result<Self> {
        let config = Self {
            p,
            q: Exponent::new(q)?,
            scenario,
            horizon: 1000,
            dimension: 1,
            seed: 0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_dimension(mut self, dimension: usize) -> Self {
        self.dimension = dimension;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scenario(mut self, scenario: Scenario) -> Self {
        self.scenario = scenario;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(Error::param("p", "loss exponent must be positive and finite"));
        }
        if let Exponent::Finite(q) = self.q {
            if !(q > 1.0) {
                return Err(Error::InvalidExponent(q));
            }
        }
        if self.horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        if self.dimension == 0 {
            return Err(Error::param("dimension", "must be at least 1"));
        }
        self.scenario.validate()
    }

    /// `|e|^p`.
    pub fn loss(&self, error: f64) -> f64 {
        math::abs_pow(error, self.p)
    }
}

/// One round of a transcript.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Round {
    pub t: usize,
    pub x: Point,
    pub y_hat: f64,
    pub y_true: f64,
    /// Distance to the nearest earlier input; `None` at `t = 0`.
    pub delta: Option<f64>,
    pub counted: bool,
    pub weight: f64,
    pub loss_term: f64,
}

impl Round {
    pub fn error(&self) -> f64 {
        (self.y_hat - self.y_true).abs()
    }
}

/// The full record of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub config: GameConfig,
    pub learner: String,
    pub adversary: String,
    pub rounds: Vec<Round>,
    pub cumulative_loss: f64,
}

impl Transcript {
    /// Indices of counted rounds.
    pub fn counted_set(&self) -> Vec<usize> {
        self.rounds.iter().filter(|r| r.counted).map(|r| r.t).collect()
    }

    /// Number of rounds after round 0.
    pub fn scored_len(&self) -> usize {
        self.rounds.len().saturating_sub(1)
    }

    /// Rounds after round 0 whose prediction missed by more than `tol`.
    pub fn mistakes(&self, tol: f64) -> usize {
        self.rounds.iter().skip(1).filter(|r| r.error() > tol).count()
    }

    /// The inputs in order.
    pub fn inputs(&self) -> Vec<Point> {
        self.rounds.iter().map(|r| r.x.clone()).collect()
    }

    /// Re-scores the same predictions and labels under another scenario and
    /// loss exponent.
    pub fn loss_under(&self, scenario: &Scenario, p: f64) -> Result<f64> {
        let mut total = 0.0;
        for r in &self.rounds {
            let (counted, weight) = scenario.score(r.t, r.delta)?;
            if counted {
                total += term(weight, math::abs_pow(r.error(), p));
            }
        }
        Ok(total)
    }
}

/// `weight * loss`, with `0 * inf` read as 0 (a zero error is free under any
/// weight).
fn term(weight: f64, loss: f64) -> f64 {
    if loss == 0.0 {
        0.0
    } else {
        weight * loss
    }
}

/// Plays one game to completion.
///
/// The game ends after `horizon` rounds past round 0 or when the adversary
/// halts. Scenario violations abort with an error naming the round.
pub fn run_game(config: &GameConfig, learner: &mut dyn Learner, adversary: &mut dyn Adversary) -> Result<Transcript> {
    config.validate()?;
    if !adversary.supports(&config.scenario) {
        return Err(Error::IncompatibleScenario {
            adversary: adversary.name().into(),
            scenario: config.scenario.label(),
        });
    }
    if adversary.dimension() != config.dimension {
        return Err(Error::DimensionMismatch {
            expected: config.dimension,
            got: adversary.dimension(),
        });
    }
    adversary.start(config)?;
    let mut index = NearestIndex::new(config.dimension);
    let mut rounds = Vec::new();
    let mut cumulative_loss = 0.0;
    for t in 0..=config.horizon {
        let Some(x) = adversary.next_input(t)? else {
            break;
        };
        if x.len() != config.dimension {
            return Err(Error::DimensionMismatch {
                expected: config.dimension,
                got: x.len(),
            });
        }
        let delta = index.nearest_distance(&x);
        let (counted, weight) = config.scenario.score(t, delta)?;
        let y_hat = learner.predict(&x)?;
        let y_true = adversary.reveal(t, &x, y_hat)?;
        learner.observe(&x, y_true)?;
        let loss_term = if counted {
            term(weight, config.loss(y_hat - y_true))
        } else {
            0.0
        };
        cumulative_loss += loss_term;
        index.insert(&x);
        rounds.push(Round {
            t,
            x,
            y_hat,
            y_true,
            delta,
            counted,
            weight,
            loss_term,
        });
    }
    Ok(Transcript {
        config: config.clone(),
        learner: learner.name().into(),
        adversary: adversary.name().into(),
        rounds,
        cumulative_loss,
    })
}

/// [`run_game`] over boxed strategies.
pub fn run_boxed(
    config: &GameConfig,
    mut learner: Box<dyn Learner>,
    mut adversary: Box<dyn Adversary>,
) -> Result<Transcript> {
    run_game(config, learner.as_mut(), adversary.as_mut())
}

#[cfg(test)]
mod tests;
