//! Randomized adversaries used to stress the upper bounds.
//!
//! None of these is a lower-bound construction. They draw inputs from a
//! seeded generator and choose labels that stay consistent with a certified
//! class member, which is all an upper-bound statement quantifies over.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{consistent_members, Adversary, Certificate};
use crate::engine::Scenario;
use crate::pwl::{BreakpointFunction, Exponent};
use crate::{math, within_radius, Error, Point, Result};

/// How the next input is placed relative to the earlier ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputMode {
    /// Within `radius` of a uniformly chosen earlier input.
    Admissible { radius: f64 },
    /// At a log-uniform distance in `[1e-2, 1e2]` from an earlier input, on
    /// either side.
    Free,
}

impl InputMode {
    fn supports(self, scenario: &Scenario) -> bool {
        match (self, scenario) {
            (InputMode::Admissible { radius }, Scenario::S1 { radius: r }) => within_radius(radius, *r),
            (InputMode::Free, Scenario::S1 { .. }) => false,
            _ => true,
        }
    }

    fn draw(self, rng: &mut ChaCha8Rng, past: &[f64]) -> f64 {
        let anchor = if past.is_empty() {
            0.0
        } else {
            past[rng.gen_range(0..past.len())]
        };
        match self {
            InputMode::Admissible { radius } => anchor + radius * rng.gen_range(-1.0..=1.0),
            InputMode::Free => {
                let d = math::powf(10.0, rng.gen_range(-2.0..=2.0));
                if rng.gen_bool(0.5) {
                    anchor + d
                } else {
                    anchor - d
                }
            }
        }
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::InvalidExponent(q));
    }
    Ok(())
}

/// Spends the smoothness budget as fast as it can.
///
/// At each input `x` it computes the interval of labels `y` for which the
/// interpolant of the revealed points keeps q-action at most `1 - 1e-12`,
/// and reveals the endpoint farther from the guess (with probability
/// `explore` a uniform point of the interval instead).
#[derive(Debug, Clone)]
pub struct GreedyBudgetAdversary {
    q: Exponent,
    mode: InputMode,
    steps: usize,
    explore: f64,
    rng: ChaCha8Rng,
    revealed: BreakpointFunction,
    inputs: Vec<f64>,
}

const BUDGET: f64 = 1.0 - 1e-12;

impl GreedyBudgetAdversary {
    pub fn new(q: f64, mode: InputMode, steps: usize, explore: f64, seed: u64) -> Result<Self> {
        check_q(q)?;
        if !(0.0..=1.0).contains(&explore) {
            return Err(Error::param("explore", "must be a probability"));
        }
        Ok(Self {
            q: Exponent::Finite(q),
            mode,
            steps,
            explore,
            rng: ChaCha8Rng::seed_from_u64(seed),
            revealed: BreakpointFunction::empty(),
            inputs: Vec::new(),
        })
    }

    /// Labels at `x` that keep the revealed interpolant within budget.
    pub fn label_interval(&self, x: f64) -> (f64, f64) {
        let center = self.revealed.evaluate(x);
        if self.revealed.position(x).is_some() {
            return (center, center);
        }
        let room = BUDGET - self.revealed.q_action(self.q).value;
        if room <= 0.0 {
            return (center, center);
        }
        let fits = |y: f64| self.revealed.insertion_delta(x, y, self.q) <= room;
        let reach = |dir: f64| {
            let (mut good, mut bad) = (0.0f64, 1.0f64);
            while fits(center + dir * bad) {
                good = bad;
                bad *= 2.0;
                if bad > 1e12 {
                    return good;
                }
            }
            for _ in 0..80 {
                let mid = 0.5 * (good + bad);
                if fits(center + dir * mid) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        };
        (center - reach(-1.0), center + reach(1.0))
    }
}

impl Adversary for GreedyBudgetAdversary {
    fn name(&self) -> &str {
        "greedy_budget"
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        self.mode.supports(scenario)
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        if t > self.steps {
            return Ok(None);
        }
        let x = if t == 0 {
            0.0
        } else {
            self.mode.draw(&mut self.rng, &self.inputs)
        };
        self.inputs.push(x);
        Ok(Some(alloc::vec![x]))
    }

    fn reveal(&mut self, t: usize, x: &[f64], y_hat: f64) -> Result<f64> {
        let x = x[0];
        let y = if t == 0 {
            self.rng.gen_range(-1.0..=1.0)
        } else {
            let (lo, hi) = self.label_interval(x);
            if hi > lo && self.rng.gen_bool(self.explore) {
                self.rng.gen_range(lo..=hi)
            } else {
                super::farther_of(y_hat, lo, hi)
            }
        };
        self.revealed.upsert(x, y);
        Ok(y)
    }

    fn certificate(&self) -> Certificate {
        Certificate::SmoothMember {
            function: self.revealed.clone(),
            q: self.q,
        }
    }
}

/// Answers with a fixed random target of prescribed q-action.
#[derive(Debug, Clone)]
pub struct TargetAdversary {
    q: Exponent,
    mode: InputMode,
    steps: usize,
    rng: ChaCha8Rng,
    target: BreakpointFunction,
    inputs: Vec<f64>,
}

impl TargetAdversary {
    /// A target with `pieces` breakpoints on `[-span, span]`, values rescaled
    /// by `lambda = (action / A)^{1/q}` so that its q-action equals `action`.
    pub fn new(
        q: f64,
        mode: InputMode,
        steps: usize,
        pieces: usize,
        span: f64,
        action: f64,
        seed: u64,
    ) -> Result<Self> {
        check_q(q)?;
        if pieces < 2 || !(span > 0.0) || !(action > 0.0 && action <= 1.0) {
            return Err(Error::param(
                "pieces, span, action",
                "need 2+ pieces, span > 0 and action in (0, 1]",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..pieces)
            .map(|_| (rng.gen_range(-span..=span), rng.gen_range(-1.0..=1.0)))
            .collect();
        let raw = BreakpointFunction::from_unsorted(points)?;
        let q_exp = Exponent::Finite(q);
        let a = raw.q_action(q_exp).value;
        let target = if a > 0.0 {
            raw.scale_values(math::powf(action / a, 1.0 / q))
        } else {
            raw
        };
        Ok(Self {
            q: q_exp,
            mode,
            steps,
            rng,
            target,
            inputs: Vec::new(),
        })
    }

    pub fn target(&self) -> &BreakpointFunction {
        &self.target
    }
}

impl Adversary for TargetAdversary {
    fn name(&self) -> &str {
        "random_target"
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        self.mode.supports(scenario)
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        if t > self.steps {
            return Ok(None);
        }
        let x = if t == 0 {
            0.0
        } else {
            self.mode.draw(&mut self.rng, &self.inputs)
        };
        self.inputs.push(x);
        Ok(Some(alloc::vec![x]))
    }

    fn reveal(&mut self, _t: usize, x: &[f64], _y_hat: f64) -> Result<f64> {
        Ok(self.target.evaluate(x[0]))
    }

    fn certificate(&self) -> Certificate {
        Certificate::SmoothMember {
            function: self.target.clone(),
            q: self.q,
        }
    }
}

/// A random walk over a finite family that answers with the consistent
/// member value farthest from the guess.
///
/// Inputs are snapped to the half-integer grid with probability 0.3 when
/// that keeps them within the walk's radius, so that breakpoints of
/// grid-based families are hit often.
#[derive(Debug, Clone)]
pub struct FamilyWalkAdversary {
    members: Vec<BreakpointFunction>,
    mode: InputMode,
    start: f64,
    steps: usize,
    rng: ChaCha8Rng,
    inputs: Vec<f64>,
    history: Vec<(f64, f64)>,
}

impl FamilyWalkAdversary {
    pub fn new(members: Vec<BreakpointFunction>, mode: InputMode, start: f64, steps: usize, seed: u64) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::param("members", "family is empty"));
        }
        Ok(Self {
            members,
            mode,
            start,
            steps,
            rng: ChaCha8Rng::seed_from_u64(seed),
            inputs: Vec::new(),
            history: Vec::new(),
        })
    }

    pub fn members(&self) -> &[BreakpointFunction] {
        &self.members
    }
}

impl Adversary for FamilyWalkAdversary {
    fn name(&self) -> &str {
        "family_walk"
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        self.mode.supports(scenario)
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        if t > self.steps {
            return Ok(None);
        }
        let x = if t == 0 {
            self.start
        } else {
            let raw = self.mode.draw(&mut self.rng, &self.inputs);
            let snapped = math::round(2.0 * raw) / 2.0;
            let keeps_radius = match self.mode {
                InputMode::Admissible { radius } => {
                    self.inputs.iter().any(|&u| within_radius((snapped - u).abs(), radius))
                }
                InputMode::Free => true,
            };
            if keeps_radius && self.rng.gen_bool(0.3) {
                snapped
            } else {
                raw
            }
        };
        self.inputs.push(x);
        Ok(Some(alloc::vec![x]))
    }

    fn reveal(&mut self, _t: usize, x: &[f64], y_hat: f64) -> Result<f64> {
        let x = x[0];
        let y = consistent_members(&self.members, &self.history)
            .map(|i| self.members[i].evaluate(x))
            .reduce(|a, b| super::farther_of(y_hat, a, b))
            .ok_or(Error::InconsistentHistory)?;
        self.history.push((x, y));
        Ok(y)
    }

    fn certificate(&self) -> Certificate {
        match consistent_members(&self.members, &self.history).next() {
            Some(index) => Certificate::FamilyMember {
                members: self.members.clone(),
                index,
            },
            None => Certificate::None,
        }
    }
}

/// `size` distinct members with breakpoints at `0, 1, ..., 6` and values in
/// `{-1, 0, 1}`.
pub fn random_finite_family<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Vec<BreakpointFunction> {
    let mut members: Vec<BreakpointFunction> = Vec::with_capacity(size);
    while members.len() < size {
        let points = (0..=6)
            .map(|u| (f64::from(u), f64::from(rng.gen_range(-1i32..=1))))
            .collect();
        let f = BreakpointFunction::new(points).expect("grid points are sorted");
        if !members.contains(&f) {
            members.push(f);
        }
    }
    members
}
