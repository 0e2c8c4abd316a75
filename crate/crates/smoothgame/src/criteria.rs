//! The ten acceptance criteria, each a batch of games reduced to a few
//! pass/fail checks.
//!
//! Games inside a criterion run in parallel on the current rayon pool; the
//! reductions (max, min, counts) do not depend on completion order.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use smoothgame_core::adversaries::{
    random_finite_family, Adversary, BasisAdversary, EpsStep, FamilyAdversary, FamilyKind, FamilyWalkAdversary,
    GeometricEscape, GreedyBudgetAdversary, InputMode, SlowDecayEscape, Summability, TargetAdversary, TentAdversary,
    TwoRoundWeighted,
};
use smoothgame_core::classes::family::{f_eps, f_n_eps, g_n_constant};
use smoothgame_core::engine::{
    radius_loss_factor, ratio_bound_check, run_game, Dilated, GameConfig, Rescaled, Scenario, Transcript,
    WeightFunction,
};
use smoothgame_core::learners::{
    EscapeVersionSpace, FeasibleMidpoint, Learner, Linint, LinintPrime, Projected, SpanLearner, TentVersionSpace,
    ZeroLearner,
};
use smoothgame_core::pwl::BreakpointFunction;

use crate::error::CliResult;
use crate::names::inverse_log2_weight;

/// Direction of an expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Lower,
    Upper,
    Equals,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Lower => "lower",
            Bound::Upper => "upper",
            Bound::Equals => "equals",
        })
    }
}

/// One measured quantity against its expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub expected: f64,
    pub bound: Bound,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, measured: f64, expected: f64, bound: Bound, tolerance: f64) -> Self {
        let pass = match bound {
            Bound::Lower => measured >= expected - tolerance,
            Bound::Upper => measured <= expected + tolerance,
            Bound::Equals => (measured - expected).abs() <= tolerance,
        };
        Self {
            label: label.into(),
            measured,
            expected,
            bound,
            tolerance,
            pass,
        }
    }

    pub fn lower(label: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(label, measured, expected, Bound::Lower, tolerance)
    }

    pub fn upper(label: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(label, measured, expected, Bound::Upper, tolerance)
    }

    pub fn equals(label: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(label, measured, expected, Bound::Equals, tolerance)
    }

    /// A count that must be zero.
    pub fn none(label: impl Into<String>, count: usize) -> Self {
        Self::equals(label, count as f64, 0.0, 0.0)
    }

    /// A boolean property, recorded as 1 (holds) or 0.
    pub fn holds(label: impl Into<String>, ok: bool) -> Self {
        Self::equals(label, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::Lower => ">=",
            Bound::Upper => "<=",
            Bound::Equals => "==",
        };
        write!(
            f,
            "[{}] {}: {:.12} {op} {:.12} (tol {:e})",
            if self.pass { "ok" } else { "FAIL" },
            self.label,
            self.measured,
            self.expected,
            self.tolerance
        )
    }
}

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub claim: &'static str,
    pub run: fn() -> CliResult<Vec<Check>>,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub claim: &'static str,
    pub checks: Vec<Check>,
    pub wall: Duration,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    /// `criterion N: PASS|FAIL <title> (k/n checks, t s)`.
    pub fn summary_line(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.pass).count();
        format!(
            "criterion {}: {} {} ({ok}/{} checks, {:.1} s)",
            self.id,
            if self.pass() { "PASS" } else { "FAIL" },
            self.title,
            self.checks.len(),
            self.wall.as_secs_f64()
        )
    }
}

pub fn run_criterion(criterion: &Criterion) -> CliResult<CriterionReport> {
    let start = Instant::now();
    let checks = (criterion.run)()?;
    Ok(CriterionReport {
        id: criterion.id,
        title: criterion.title,
        claim: criterion.claim,
        checks,
        wall: start.elapsed(),
    })
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "sharp constant 1 for p >= q >= 2",
            claim: "opt' = opt* = 1 when p >= q >= 2; LININT' attains it",
            run: sharp_constant,
        },
        Criterion {
            id: 2,
            title: "divergence for 0 < p < q",
            claim: "opt' >= N^(1-p/q) up to 2^-p on N unit steps",
            run: divergence_p_below_q,
        },
        Criterion {
            id: 3,
            title: "weighted quadratic value gamma",
            claim: "opt^g_{2}(G_2) = sup z g(z); 1 for identity, 1/(ce) for exp(c)",
            run: weighted_quadratic,
        },
        Criterion {
            id: 4,
            title: "truncated linear value n r^p",
            claim: "opt(G_L(n, r)) = n r^p; exp(c) weighting at scale eps keeps n r^p e^(-c eps)",
            run: truncated_linear,
        },
        Criterion {
            id: 5,
            title: "radius scaling law",
            claim: "opt'^R = R^((q-1)p/q) opt'^1 through the S_R coupling",
            run: scaling_law,
        },
        Criterion {
            id: 6,
            title: "finite-family separations",
            claim: "opt*/opt' >= 1 + 2^-p on F_eps, >= log2 n on F_{n,eps}, >= c_n on G_{n,eps}",
            run: family_separations,
        },
        Criterion {
            id: 7,
            title: "feasible midpoint errs at most |F| - 1 times",
            claim: "the feasible-midpoint learner makes at most |F| - 1 nonzero-error predictions",
            run: midpoint_mistakes,
        },
        Criterion {
            id: 8,
            title: "multivariable impossibility (tent)",
            claim: "a unit-step input sequence forces error a/2 every round on G_{q,2}",
            run: tent_impossibility,
        },
        Criterion {
            id: 9,
            title: "weight comparison lemma",
            claim: "L^h <= C_{g,h} L^g with C_{g,h} = sup h/g; indicator weight equals S2 at R = 1",
            run: weight_comparison,
        },
        Criterion {
            id: 10,
            title: "unbounded loss without locality",
            claim: "geometric escape forces h/2 per round; slowly decaying weights keep the loss divergent",
            run: escape_baseline,
        },
    ]
}

type MakeLearner = fn() -> Box<dyn Learner>;

fn play(config: &GameConfig, learner: &mut dyn Learner, adversary: &mut dyn Adversary) -> CliResult<Transcript> {
    Ok(run_game(config, learner, adversary)?)
}

/// Plays and verifies the adversary's certificate.
fn play_certified(
    config: &GameConfig,
    learner: &mut dyn Learner,
    adversary: &mut dyn Adversary,
) -> CliResult<(Transcript, bool)> {
    let tr = play(config, learner, adversary)?;
    let certified = adversary.certificate().verify(&tr)?.passed();
    Ok((tr, certified))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

/// The stress adversary of game `seed`: budget-greedy on even seeds, a
/// fixed random target on odd ones.
pub(crate) fn stress_adversary(q: f64, mode: InputMode, steps: usize, seed: u64) -> CliResult<Box<dyn Adversary>> {
    Ok(if seed.is_multiple_of(2) {
        Box::new(GreedyBudgetAdversary::new(q, mode, steps, 0.3, seed)?)
    } else {
        Box::new(TargetAdversary::new(q, mode, steps, 8, 5.0, 1.0, seed)?)
    })
}

/// Maximum loss and number of certificate failures over `games` stress
/// games.
fn stress_batch(config: &GameConfig, mode: InputMode, games: u64, learner: MakeLearner) -> CliResult<(f64, usize)> {
    let results = (0..games)
        .into_par_iter()
        .map(|seed| {
            let mut adv = stress_adversary(config.q.value(), mode, config.horizon, seed)?;
            let (tr, ok) = play_certified(config, learner().as_mut(), adv.as_mut())?;
            Ok((tr.cumulative_loss, ok))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((
        max_of(results.iter().map(|r| r.0)),
        results.iter().filter(|r| !r.1).count(),
    ))
}

fn sharp_constant() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let admissible = InputMode::Admissible { radius: 1.0 };
    for (p, q) in [(2.0, 2.0), (3.0, 2.0), (4.0, 3.0)] {
        let s1 = GameConfig::new(p, q, Scenario::S1 { radius: 1.0 })?.with_horizon(60);
        let (worst, bad) = stress_batch(&s1, admissible, 500, || Box::new(LinintPrime::new()))?;
        checks.push(Check::upper(
            format!("S1 p={p} q={q}: max LININT' loss over 500 games"),
            worst,
            1.0,
            1e-6,
        ));
        checks.push(Check::none(format!("S1 p={p} q={q}: certificate failures"), bad));
        let s2 = s1.clone().with_scenario(Scenario::S2 { radius: 1.0 });
        let (worst, bad) = stress_batch(&s2, InputMode::Free, 100, || Box::new(LinintPrime::new()))?;
        checks.push(Check::upper(
            format!("S2 p={p} q={q}: max LININT' loss over 100 free games"),
            worst,
            1.0,
            1e-6,
        ));
        checks.push(Check::none(format!("S2 p={p} q={q}: certificate failures"), bad));
    }
    let config = GameConfig::new(2.0, 2.0, Scenario::S1 { radius: 1.0 })?.with_horizon(10_000);
    let learners: [(&str, MakeLearner); 3] = [
        ("linint_prime", || Box::new(LinintPrime::new())),
        ("linint", || Box::new(Linint::new())),
        ("zero", || Box::new(ZeroLearner)),
    ];
    for (name, make) in learners {
        let mut adv = EpsStep::new(10_000, 2.0)?;
        let (tr, ok) = play_certified(&config, make().as_mut(), &mut adv)?;
        checks.push(Check::lower(
            format!("eps_step N=1e4 p=q=2 vs {name}: share of unit budget"),
            tr.cumulative_loss,
            1.0,
            0.1,
        ));
        checks.push(Check::holds(format!("eps_step vs {name}: certificate"), ok));
    }
    Ok(checks)
}

fn divergence_p_below_q() -> CliResult<Vec<Check>> {
    let (p, q) = (2.0, 3.0);
    let mut checks = Vec::new();
    let learners: [(&str, MakeLearner); 2] = [
        ("linint_prime", || Box::new(LinintPrime::new())),
        ("zero", || Box::new(ZeroLearner)),
    ];
    for (name, make) in learners {
        let mut losses = Vec::new();
        for n in [100usize, 1_000, 10_000] {
            let config = GameConfig::new(p, q, Scenario::S1 { radius: 1.0 })?.with_horizon(n);
            let mut adv = EpsStep::new(n, q)?;
            let (tr, ok) = play_certified(&config, make().as_mut(), &mut adv)?;
            let bound = (n as f64).powf(1.0 - p / q) / 2f64.powf(p);
            checks.push(Check::lower(
                format!("N={n} vs {name}: loss >= N^(1/3)/4"),
                tr.cumulative_loss,
                bound,
                1e-9,
            ));
            checks.push(Check::holds(format!("N={n} vs {name}: certificate"), ok));
            losses.push(tr.cumulative_loss);
        }
        checks.push(Check::holds(
            format!("{name}: loss strictly increasing in N"),
            losses.windows(2).all(|w| w[1] > w[0]),
        ));
    }
    Ok(checks)
}

fn weighted_quadratic() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let config = GameConfig::new(2.0, 2.0, Scenario::S3(WeightFunction::Identity))?.with_horizon(60);
    let (worst, bad) = stress_batch(&config, InputMode::Free, 500, || Box::new(Linint::new()))?;
    checks.push(Check::upper(
        "identity weight: max LININT loss over 500 games",
        worst,
        1.0,
        1e-6,
    ));
    checks.push(Check::none("identity weight: certificate failures", bad));
    for c in [0.5, 1.0, 2.0] {
        let weight = WeightFunction::exponential(c)?;
        let gamma = 1.0 / (c * std::f64::consts::E);
        let config = GameConfig::new(2.0, 2.0, Scenario::S3(weight.clone()))?;
        let learners: [(&str, MakeLearner); 2] = [
            ("linint", || Box::new(Linint::new())),
            ("zero", || Box::new(ZeroLearner)),
        ];
        for (name, make) in learners {
            let mut adv = TwoRoundWeighted::new(weight.clone(), 2.0, None)?;
            let (tr, ok) = play_certified(&config, make().as_mut(), &mut adv)?;
            checks.push(Check::lower(
                format!("exp c={c} vs {name}: forced >= 1/(ce)"),
                tr.cumulative_loss,
                gamma,
                1e-9,
            ));
            checks.push(Check::holds(format!("exp c={c} vs {name}: certificate"), ok));
            if name == "linint" {
                checks.push(Check::upper(
                    format!("exp c={c}: LININT <= 1/(ce)"),
                    tr.cumulative_loss,
                    gamma,
                    1e-9,
                ));
            }
        }
    }
    Ok(checks)
}

fn truncated_linear() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (n, r, p) in [(1usize, 1.0, 1.0), (3, 2.0, 2.0), (5, 0.5, 3.0)] {
        let value = n as f64 * f64::powf(r, p);
        let base = GameConfig::new(p, 2.0, Scenario::Base)?.with_dimension(n);
        let mut adv = BasisAdversary::new(n, r, 1.0)?;
        let (tr, ok) = play_certified(&base, &mut SpanLearner::new(r)?, &mut adv)?;
        checks.push(Check::equals(
            format!("n={n} r={r} p={p}: span loss = n r^p"),
            tr.cumulative_loss,
            value,
            1e-9,
        ));
        checks.push(Check::holds(format!("n={n} r={r} p={p}: certificate"), ok));
        let eps = 1e-3;
        let weighted = base.with_scenario(Scenario::S3(WeightFunction::exponential(1.0)?));
        let mut adv = BasisAdversary::new(n, r, eps)?;
        let (tr, ok) = play_certified(&weighted, &mut SpanLearner::new(r)?, &mut adv)?;
        let floor = value * (-eps).exp();
        checks.push(Check::lower(
            format!("n={n} exp(1) eps=1e-3: loss >= n r^p e^-eps"),
            tr.cumulative_loss,
            floor,
            1e-12,
        ));
        checks.push(Check::upper(
            format!("n={n} exp(1) eps=1e-3: loss <= n r^p"),
            tr.cumulative_loss,
            value,
            1e-12,
        ));
        checks.push(Check::holds(format!("n={n} exp(1): certificate"), ok));
    }
    Ok(checks)
}

/// Largest relative deviation of the coupled loss ratio from
/// `R^{(q-1)p/q}`, and the number of base games with zero loss.
pub(crate) fn scaling_deviation(p: f64, q: f64, radius: f64, games: u64) -> CliResult<(f64, usize)> {
    let mode = InputMode::Admissible { radius: 1.0 };
    let expected = radius_loss_factor(radius, p, q);
    let results = (0..games)
        .into_par_iter()
        .map(|seed| {
            let base_cfg = GameConfig::new(p, q, Scenario::S1 { radius: 1.0 })?.with_horizon(60);
            let mut adv = stress_adversary(q, mode, 60, seed)?;
            let base = play(&base_cfg, &mut LinintPrime::new(), adv.as_mut())?;
            let cfg = base_cfg.with_scenario(Scenario::S1 { radius });
            let mut learner = Rescaled::new(LinintPrime::new(), radius, q)?;
            let mut dilated = Dilated::new(stress_adversary(q, mode, 60, seed)?, radius, q)?;
            let scaled = play(&cfg, &mut learner, &mut dilated)?;
            if base.cumulative_loss == 0.0 {
                return Ok((0.0, true));
            }
            Ok((
                (scaled.cumulative_loss / base.cumulative_loss / expected - 1.0).abs(),
                false,
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((
        max_of(results.iter().map(|r| r.0)),
        results.iter().filter(|r| r.1).count(),
    ))
}

fn scaling_law() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (p, q) in [(2.0, 2.0), (3.0, 2.0)] {
        for radius in [0.5, 2.0, 4.0] {
            let (dev, zero) = scaling_deviation(p, q, radius, 50)?;
            checks.push(Check::upper(
                format!("p={p} q={q} R={radius}: max |ratio / R^((q-1)p/q) - 1| over 50 games"),
                dev,
                0.0,
                1e-9,
            ));
            checks.push(Check::none(
                format!("p={p} q={q} R={radius}: zero-loss base games"),
                zero,
            ));
        }
    }
    Ok(checks)
}

type FamilyLearner = fn(&[BreakpointFunction]) -> CliResult<Box<dyn Learner>>;

const FAMILY_LEARNERS: [(&str, FamilyLearner); 3] = [
    ("feasible_midpoint", |m| {
        Ok(Box::new(FeasibleMidpoint::finite(m.to_vec())?))
    }),
    ("linint", |_| Ok(Box::new(Linint::new()))),
    ("zero", |_| Ok(Box::new(ZeroLearner))),
];

/// Smallest loss the free-guess script of `kind` forces over the baseline
/// learners, with the number of certificate failures.
pub(crate) fn forced_family_loss(kind: &FamilyKind, p: f64) -> CliResult<(f64, usize)> {
    let config = GameConfig::new(p, 2.0, Scenario::S2 { radius: 1.0 })?;
    let mut worst = f64::INFINITY;
    let mut bad = 0;
    for (_, make) in FAMILY_LEARNERS {
        let mut adv = FamilyAdversary::new(kind.clone())?;
        let mut learner = make(adv.members())?;
        let (tr, ok) = play_certified(&config, learner.as_mut(), &mut adv)?;
        worst = worst.min(tr.cumulative_loss);
        bad += usize::from(!ok);
    }
    Ok((worst, bad))
}

/// Largest loss of the feasible-midpoint learner against radius-1 random
/// walks over `members`, started on the grid `0..span`.
pub(crate) fn s1_family_loss(members: &[BreakpointFunction], p: f64, span: u64, games: u64) -> CliResult<(f64, usize)> {
    let config = GameConfig::new(p, 2.0, Scenario::S1 { radius: 1.0 })?.with_horizon(60);
    let results = (0..games)
        .into_par_iter()
        .map(|seed| {
            let start = (seed % span) as f64;
            let mode = InputMode::Admissible { radius: 1.0 };
            let mut adv = FamilyWalkAdversary::new(members.to_vec(), mode, start, 60, seed)?;
            let mut learner = FeasibleMidpoint::finite(members.to_vec())?;
            let (tr, ok) = play_certified(&config, &mut learner, &mut adv)?;
            Ok((tr.cumulative_loss, ok))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((
        max_of(results.iter().map(|r| r.0)),
        results.iter().filter(|r| !r.1).count(),
    ))
}

fn family_separations() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let (p, eps) = (1.0, 0.01);
    let (s1, bad) = s1_family_loss(&f_eps(eps)?, p, 7, 200)?;
    checks.push(Check::upper(
        "F_eps eps=0.01 p=1: S1 midpoint loss <= 1 + eps^p",
        s1,
        1.0 + eps.powf(p),
        1e-9,
    ));
    checks.push(Check::none("F_eps S1: certificate failures", bad));
    let (s2, bad) = forced_family_loss(&FamilyKind::FEps { eps }, p)?;
    checks.push(Check::lower(
        "F_eps p=1: S2 forced loss >= 1 + 2^-p",
        s2,
        1.0 + 2f64.powf(-p),
        1e-9,
    ));
    checks.push(Check::none("F_eps S2: certificate failures", bad));
    for n in [4usize, 16, 64] {
        let k = n.trailing_zeros() as f64;
        let (s2, bad) = forced_family_loss(&FamilyKind::FNEps { n, eps }, p)?;
        checks.push(Check::lower(
            format!("F_n,eps n={n}: S2 forced loss >= log2 n"),
            s2,
            k,
            1e-9,
        ));
        checks.push(Check::none(format!("F_n,eps n={n} S2: certificate failures"), bad));
        let (s1, bad) = s1_family_loss(&f_n_eps(n, eps)?, p, 4 * k as u64, 100)?;
        let bound = 1.0 + (n as f64 * eps).powf(p);
        checks.push(Check::upper(
            format!("F_n,eps n={n}: S1 midpoint loss <= 1 + (n eps)^p"),
            s1,
            bound,
            1e-9,
        ));
        checks.push(Check::none(format!("F_n,eps n={n} S1: certificate failures"), bad));
    }
    let (s2, bad) = forced_family_loss(&FamilyKind::GNEps { n: 5, eps }, 2.0)?;
    checks.push(Check::lower(
        "G_n,eps n=5 p=2: S2 forced loss >= 16/9",
        s2,
        g_n_constant(5, 2.0),
        1e-9,
    ));
    checks.push(Check::none("G_n,eps n=5 S2: certificate failures", bad));
    for row in crate::tables::fn_ratio_rows(&[2, 4, 8, 16, 32, 64], 1e-4, 1.0)? {
        checks.push(Check::lower(
            format!(
                "F_n,eps ratio n={} eps=1e-4: forced / (1 + (n eps)^p) >= 0.95 log2 n",
                row.n
            ),
            row.ratio_lower,
            0.95 * row.log2_n,
            0.0,
        ));
    }
    Ok(checks)
}

fn midpoint_mistakes() -> CliResult<Vec<Check>> {
    let config = GameConfig::new(1.0, 2.0, Scenario::Base)?.with_horizon(40);
    let results = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let size = 2 + (seed % 7) as usize;
            let members = random_finite_family(&mut ChaCha8Rng::seed_from_u64(seed), size);
            let mut adv = FamilyWalkAdversary::new(members.clone(), InputMode::Free, 3.0, 40, seed)?;
            let mut learner = FeasibleMidpoint::finite(members)?;
            let (tr, ok) = play_certified(&config, &mut learner, &mut adv)?;
            Ok((tr.mistakes(1e-9) as f64 - (size - 1) as f64, ok))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(vec![
        Check::upper(
            "max over 1e4 games of mistakes - (|F| - 1), |F| in 2..=8",
            max_of(results.iter().map(|r| r.0)),
            0.0,
            0.0,
        ),
        Check::none(
            "games over the |F| - 1 budget",
            results.iter().filter(|r| r.0 > 0.0).count(),
        ),
        Check::none("certificate failures", results.iter().filter(|r| !r.1).count()),
    ])
}

fn tent_impossibility() -> CliResult<Vec<Check>> {
    let (q, p, eta, n) = (2.0, 2.0, 0.05, 1000usize);
    let learners: [(&str, TryMakeLearner); 3] = [
        ("linint on x", || Ok(Box::new(Projected::new(Linint::new())))),
        ("zero", || Ok(Box::new(ZeroLearner))),
        ("feasible_midpoint", || {
            Ok(Box::new(FeasibleMidpoint::new(TentVersionSpace::new(2.0, 0.05)?)))
        }),
    ];
    let weight = WeightFunction::exponential(1.0)?;
    let per_learner = learners
        .into_par_iter()
        .map(|(name, make)| {
            let mut checks = Vec::new();
            let s2 = GameConfig::new(p, q, Scenario::S2 { radius: 1.0 })?
                .with_dimension(2)
                .with_horizon(n);
            let mut adv = TentAdversary::new(q, eta, n)?;
            let (tr, ok) = play_certified(&s2, make()?.as_mut(), &mut adv)?;
            let a = adv.tent().amplitude();
            checks.push(Check::holds(
                format!("vs {name}: slice certificate (1e3 offsets per axis + critical)"),
                ok,
            ));
            checks.push(Check::equals(
                format!("vs {name}: S2 counted rounds"),
                tr.counted_set().len() as f64,
                n as f64,
                0.0,
            ));
            let min_err = min_of(tr.rounds.iter().skip(1).map(|r| r.error()));
            checks.push(Check::lower(
                format!("vs {name}: min per-round error >= a/2"),
                min_err,
                a / 2.0,
                1e-12,
            ));
            let s3 = s2.with_scenario(Scenario::S3(weight.clone()));
            let mut adv = TentAdversary::new(q, eta, n)?;
            let tr = play(&s3, make()?.as_mut(), &mut adv)?;
            let floor = n as f64 * weight.evaluate(1.0) * (a / 2.0).powf(p);
            checks.push(Check::lower(
                format!("vs {name}: S3 exp(1) loss >= N g(1) (a/2)^p"),
                tr.cumulative_loss,
                floor,
                1e-9,
            ));
            Ok(checks)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(per_learner.into_iter().flatten().collect())
}

fn weight_comparison() -> CliResult<Vec<Check>> {
    let results = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let config = GameConfig::new(2.0, 2.0, Scenario::Base)?.with_horizon(30);
            let mut adv = GreedyBudgetAdversary::new(2.0, InputMode::Free, 30, 0.3, seed)?;
            let mut learner: Box<dyn Learner> = match seed % 3 {
                0 => Box::new(LinintPrime::new()),
                1 => Box::new(Linint::new()),
                _ => Box::new(ZeroLearner),
            };
            let tr = play(&config, learner.as_mut(), &mut adv)?;
            let exp = WeightFunction::exponential(0.5 * f64::from(1u32 << ((seed / 3) % 3)))?;
            let pairs = [
                (WeightFunction::Identity, exp.clone()),
                (WeightFunction::ConstantOne, exp),
                (WeightFunction::ConstantOne, WeightFunction::Indicator),
            ];
            let mut failures = 0usize;
            for (g, h) in &pairs {
                if ratio_bound_check(&tr, g, h)?.holds != Some(true) {
                    failures += 1;
                }
            }
            let indicator = tr.loss_under(&Scenario::S3(WeightFunction::Indicator), 2.0)?;
            let s2 = tr.loss_under(&Scenario::S2 { radius: 1.0 }, 2.0)?;
            Ok((failures, indicator != s2))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(vec![
        Check::none(
            "ratio-bound violations over 1e3 transcripts x 3 pairs",
            results.iter().map(|r| r.0).sum(),
        ),
        Check::none(
            "transcripts where indicator S3 loss != S2 (R=1) loss",
            results.iter().filter(|r| r.1).count(),
        ),
    ])
}

type TryMakeLearner = fn() -> CliResult<Box<dyn Learner>>;

pub(crate) const ESCAPE_LEARNERS: [(&str, TryMakeLearner); 5] = [
    ("zero", || Ok(Box::new(ZeroLearner))),
    ("linint", || Ok(Box::new(Linint::new()))),
    ("linint_prime", || Ok(Box::new(LinintPrime::new()))),
    ("feasible_midpoint", || {
        Ok(Box::new(FeasibleMidpoint::new(EscapeVersionSpace::new(
            2.0, 1.0, 1000,
        )?)))
    }),
    ("span", || Ok(Box::new(SpanLearner::new(1.0)?))),
];

fn escape_baseline() -> CliResult<Vec<Check>> {
    let (c, h, p, n) = (2.0, 1.0, 1.0, 1000usize);
    let mut checks = Vec::new();
    let harmonic: f64 = (1..=n + 1).map(|i| 1.0 / i as f64).sum();
    for (name, make) in ESCAPE_LEARNERS {
        let base = GameConfig::new(p, 2.0, Scenario::Base)?.with_horizon(n);
        let mut adv = GeometricEscape::new(c, h, 2.0, n)?;
        let (tr, ok) = play_certified(&base, make()?.as_mut(), &mut adv)?;
        checks.push(Check::lower(
            format!("geometric_escape N=1e3 vs {name}: loss >= 500"),
            tr.cumulative_loss,
            500.0,
            0.0,
        ));
        checks.push(Check::holds(format!("geometric_escape vs {name}: certificate"), ok));
        let weighted = base.with_scenario(Scenario::S3(inverse_log2_weight()));
        let mut adv = SlowDecayEscape::new(c, h, 2.0, n, inverse_log2_weight())?;
        let tr = play(&weighted, make()?.as_mut(), &mut adv)?;
        let floor = 0.9 * (h / 2.0).powf(p) * harmonic;
        checks.push(Check::lower(
            format!("slow_decay 1/log2(1+z) vs {name}: loss >= 0.9 (h/2)^p H_(N+1)"),
            tr.cumulative_loss,
            floor,
            0.0,
        ));
    }
    let adv = SlowDecayEscape::new(c, h, 2.0, n, inverse_log2_weight())?;
    checks.push(Check::holds(
        "summability heuristic flags 1/log2(1+z) as divergent",
        adv.summability() == Summability::Divergent,
    ));
    let summable = SlowDecayEscape::new(c, h, 2.0, n, WeightFunction::Identity)?;
    checks.push(Check::holds(
        "identity weight is flagged summable",
        summable.summability() == Summability::Summable,
    ));
    Ok(checks)
}
