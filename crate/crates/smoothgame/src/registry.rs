//! Named verification suites and the rows they report.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use smoothgame_core::adversaries::{EpsStep, GeometricEscape, SlowDecayEscape};
use smoothgame_core::engine::{radius_loss_factor, run_game, GameConfig, Scenario};
use smoothgame_core::learners::{LinintPrime, ZeroLearner};

use crate::criteria::{criteria, run_criterion, scaling_deviation, Bound, Check};
use crate::error::{CliError, CliResult};
use crate::names::inverse_log2_weight;

pub const SUITES: &[&str] = &["sharp_constants", "scaling_law", "divergence"];

type Runner = Arc<dyn Fn() -> CliResult<Vec<Check>> + Send + Sync>;

pub struct Experiment {
    pub suite: &'static str,
    pub name: String,
    /// The statement the experiment checks.
    pub claim: &'static str,
    run: Runner,
}

/// One check of one experiment, as emitted by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub suite: &'static str,
    pub experiment: String,
    pub parameters: String,
    pub measured: f64,
    pub expected: f64,
    pub bound: Bound,
    pub tolerance: f64,
    pub pass: bool,
    /// Wall-clock time of the whole experiment; `None` when suppressed for
    /// reproducible output.
    pub wall_ms: Option<f64>,
    pub claim: &'static str,
}

fn sharp_constants() -> Vec<Experiment> {
    criteria()
        .into_iter()
        .map(|c| {
            let run = c.run;
            Experiment {
                suite: "sharp_constants",
                name: format!("criterion_{}", c.id),
                claim: c.claim,
                run: Arc::new(run),
            }
        })
        .collect()
}

fn scaling_suite() -> Vec<Experiment> {
    let mut out = Vec::new();
    for (p, q) in [(2.0, 2.0), (3.0, 2.0)] {
        for radius in [0.5, 1.0, 2.0, 4.0] {
            out.push(Experiment {
                suite: "scaling_law",
                name: format!("scaling_p{p}_q{q}_R{radius}"),
                claim: "opt'^R = R^((q-1)p/q) opt'^1 through the S_R coupling",
                run: Arc::new(move || {
                    let (dev, zero) = scaling_deviation(p, q, radius, 20)?;
                    Ok(vec![
                        Check::upper(
                            format!(
                                "p={p} q={q} R={radius} factor={}: max relative deviation",
                                radius_loss_factor(radius, p, q)
                            ),
                            dev,
                            0.0,
                            1e-9,
                        ),
                        Check::none(format!("p={p} q={q} R={radius}: zero-loss base games"), zero),
                    ])
                }),
            });
        }
    }
    out
}

fn increasing(label: String, losses: &[f64]) -> Check {
    Check::holds(label, losses.windows(2).all(|w| w[1] > w[0]))
}

fn eps_step_column(p: f64, q: f64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let mut losses = Vec::new();
    for n in [100usize, 1_000, 10_000] {
        let config = GameConfig::new(p, q, Scenario::S1 { radius: 1.0 })?.with_horizon(n);
        let mut adv = EpsStep::new(n, q)?;
        let loss = run_game(&config, &mut LinintPrime::new(), &mut adv)?.cumulative_loss;
        checks.push(Check::lower(
            format!("N={n} vs linint_prime: loss >= N (eps/2)^p"),
            loss,
            adv.forced_loss(p),
            1e-9,
        ));
        losses.push(loss);
    }
    checks.push(increasing(format!("p={p} q={q}: loss increasing in N"), &losses));
    Ok(checks)
}

fn escape_column(weighted: bool) -> CliResult<Vec<Check>> {
    let (c, h, p) = (2.0, 1.0, 1.0);
    let mut checks = Vec::new();
    let mut losses = Vec::new();
    for n in [10usize, 100, 1_000] {
        let (loss, floor) = if weighted {
            let config = GameConfig::new(p, 2.0, Scenario::S3(inverse_log2_weight()))?.with_horizon(n);
            let mut adv = SlowDecayEscape::new(c, h, 2.0, n, inverse_log2_weight())?;
            let loss = run_game(&config, &mut ZeroLearner, &mut adv)?.cumulative_loss;
            (loss, adv.forced_loss(p))
        } else {
            let config = GameConfig::new(p, 2.0, Scenario::Base)?.with_horizon(n);
            let mut adv = GeometricEscape::new(c, h, 2.0, n)?;
            (
                run_game(&config, &mut ZeroLearner, &mut adv)?.cumulative_loss,
                n as f64 * (h / 2.0).powf(p),
            )
        };
        checks.push(Check::lower(
            format!("N={n} vs zero: loss >= forced floor"),
            loss,
            floor,
            1e-9,
        ));
        losses.push(loss);
    }
    checks.push(increasing("loss increasing in N".into(), &losses));
    Ok(checks)
}

fn divergence_suite() -> Vec<Experiment> {
    vec![
        Experiment {
            suite: "divergence",
            name: "eps_step_p2_q3".into(),
            claim: "opt' grows like N^(1-p/q) for p < q",
            run: Arc::new(|| eps_step_column(2.0, 3.0)),
        },
        Experiment {
            suite: "divergence",
            name: "eps_step_p1_q2".into(),
            claim: "opt' grows like N^(1-p/q) for p < q",
            run: Arc::new(|| eps_step_column(1.0, 2.0)),
        },
        Experiment {
            suite: "divergence",
            name: "geometric_escape_p1".into(),
            claim: "without locality the adversary forces h/2 every round",
            run: Arc::new(|| escape_column(false)),
        },
        Experiment {
            suite: "divergence",
            name: "slow_decay_invlog2".into(),
            claim: "weights with divergent sum g(c^i) keep the loss unbounded",
            run: Arc::new(|| escape_column(true)),
        },
    ]
}

/// Experiments of `suite` (or of every suite for `all`) in registry order.
pub fn suite(name: &str) -> CliResult<Vec<Experiment>> {
    Ok(match name {
        "sharp_constants" => sharp_constants(),
        "scaling_law" => scaling_suite(),
        "divergence" => divergence_suite(),
        "all" => sharp_constants()
            .into_iter()
            .chain(scaling_suite())
            .chain(divergence_suite())
            .collect(),
        other => {
            return Err(CliError::usage(format!(
                "unknown suite `{other}` (known: {}, all)",
                SUITES.join(", ")
            )))
        }
    })
}

/// Runs the experiments concurrently and returns their rows in registry
/// order.
pub fn run_experiments(experiments: &[Experiment], with_wall: bool) -> CliResult<Vec<ResultRow>> {
    let per_experiment = experiments
        .par_iter()
        .map(|e| {
            let start = Instant::now();
            let checks = (e.run)()?;
            let wall = with_wall.then(|| start.elapsed().as_secs_f64() * 1e3);
            Ok(checks
                .into_iter()
                .map(|c| ResultRow {
                    suite: e.suite,
                    experiment: e.name.clone(),
                    parameters: c.label,
                    measured: c.measured,
                    expected: c.expected,
                    bound: c.bound,
                    tolerance: c.tolerance,
                    pass: c.pass,
                    wall_ms: wall,
                    claim: e.claim,
                })
                .collect::<Vec<_>>())
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(per_experiment.into_iter().flatten().collect())
}

/// Runs one acceptance criterion by id; used by the acceptance test target.
pub fn run_acceptance(id: u8) -> CliResult<crate::criteria::CriterionReport> {
    let all = criteria();
    let c = all
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| CliError::usage(format!("no criterion {id}")))?;
    run_criterion(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let all = suite("all").unwrap();
        let mut names: Vec<_> = all.iter().map(|e| e.name.as_str()).collect();
        let total = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), total);
        assert!(suite("nope").is_err());
    }

    #[test]
    fn divergence_rows_pass_in_registry_order() {
        let exps = suite("divergence").unwrap();
        let rows = run_experiments(&exps, false).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
        assert!(rows.iter().all(|r| r.wall_ms.is_none()));
        let order: Vec<_> = rows.iter().map(|r| r.experiment.as_str()).collect();
        let mut dedup = order.clone();
        dedup.dedup();
        assert_eq!(
            dedup,
            vec![
                "eps_step_p2_q3",
                "eps_step_p1_q2",
                "geometric_escape_p1",
                "slow_decay_invlog2"
            ]
        );
    }
}
