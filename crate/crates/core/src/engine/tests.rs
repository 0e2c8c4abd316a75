use alloc::vec::Vec;

use super::*;
use crate::adversaries::{Adversary, Certificate, EpsStep, GreedyBudgetAdversary, InputMode};
use crate::learners::{LinintPrime, ZeroLearner};

/// Plays fixed inputs and labels.
struct Script {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Adversary for Script {
    fn name(&self) -> &str {
        "script"
    }
    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        Ok(self.xs.get(t).map(|&x| alloc::vec![x]))
    }
    fn reveal(&mut self, t: usize, _x: &[f64], _y_hat: f64) -> Result<f64> {
        Ok(self.ys[t])
    }
    fn certificate(&self) -> Certificate {
        Certificate::None
    }
}

fn script(xs: &[f64], ys: &[f64]) -> Script {
    Script {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
    }
}

/// Predicts the label it is about to see.
struct Oracle(Vec<f64>, usize);

impl Learner for Oracle {
    fn name(&self) -> &str {
        "oracle"
    }
    fn predict(&mut self, _x: &[f64]) -> Result<f64> {
        Ok(self.0[self.1])
    }
    fn observe(&mut self, _x: &[f64], _y: f64) -> Result<()> {
        self.1 += 1;
        Ok(())
    }
}

fn config(p: f64, scenario: Scenario) -> GameConfig {
    GameConfig::new(p, 2.0, scenario).unwrap()
}

#[test]
fn oracle_learner_pays_nothing() {
    let ys = [0.3, -1.0, 2.0, 0.5];
    let tr = run_game(
        &config(2.0, Scenario::Base),
        &mut Oracle(ys.to_vec(), 0),
        &mut script(&[0.0, 1.0, 5.0, 2.0], &ys),
    )
    .unwrap();
    assert_eq!(tr.cumulative_loss, 0.0);
    assert_eq!(tr.rounds.len(), 4);
}

#[test]
fn free_guess_round_is_not_counted() {
    let tr = run_game(
        &config(2.0, Scenario::S2 { radius: 1.0 }),
        &mut ZeroLearner,
        &mut script(&[0.0, 10.0, 10.5], &[1.0, 1.0, 1.0]),
    )
    .unwrap();
    assert_eq!(tr.counted_set(), alloc::vec![2]);
    assert_eq!(tr.rounds[1].delta, Some(10.0));
    assert_eq!(tr.rounds[2].delta, Some(0.5));
    assert_eq!(tr.cumulative_loss, 1.0);
}

#[test]
fn identity_weight_divides_by_distance() {
    let e: f64 = 0.75;
    for p in [1.0, 2.0, 3.5] {
        let tr = run_game(
            &config(p, Scenario::S3(WeightFunction::Identity)),
            &mut ZeroLearner,
            &mut script(&[0.0, 2.0], &[0.0, e]),
        )
        .unwrap();
        assert!((tr.cumulative_loss - libm::pow(e, p) / 2.0).abs() < 1e-15);
    }
}

#[test]
fn round_zero_is_free_in_every_scenario() {
    for scenario in [
        Scenario::Base,
        Scenario::S1 { radius: 1.0 },
        Scenario::S2 { radius: 1.0 },
        Scenario::S3(WeightFunction::ConstantOne),
    ] {
        let tr = run_game(&config(1.0, scenario), &mut ZeroLearner, &mut script(&[0.0], &[5.0])).unwrap();
        assert_eq!(tr.cumulative_loss, 0.0);
        assert!(!tr.rounds[0].counted);
    }
}

#[test]
fn protocol_violations_name_the_round() {
    let err = run_game(
        &config(1.0, Scenario::S1 { radius: 1.0 }),
        &mut ZeroLearner,
        &mut script(&[0.0, 1.0, 3.5], &[0.0; 3]),
    )
    .unwrap_err();
    assert_eq!(
        err,
        Error::InadmissibleInput {
            t: 2,
            delta: 2.5,
            radius: 1.0
        }
    );
    let err = run_game(
        &config(1.0, Scenario::S3(WeightFunction::Identity)),
        &mut ZeroLearner,
        &mut script(&[0.0, 1.0, 0.0], &[0.0; 3]),
    )
    .unwrap_err();
    assert_eq!(err, Error::DuplicateInput { t: 2 });
    // Duplicates are legal elsewhere and scored at distance 0.
    let tr = run_game(
        &config(1.0, Scenario::Base),
        &mut ZeroLearner,
        &mut script(&[0.0, 0.0], &[0.0, 1.0]),
    )
    .unwrap();
    assert_eq!(tr.rounds[1].delta, Some(0.0));
    assert_eq!(tr.cumulative_loss, 1.0);
}

#[test]
fn horizon_caps_scored_rounds() {
    let mut adv = EpsStep::new(50, 2.0).unwrap();
    let tr = run_game(&config(2.0, Scenario::Base).with_horizon(7), &mut ZeroLearner, &mut adv).unwrap();
    assert_eq!(tr.scored_len(), 7);
}

#[test]
fn incompatible_scenarios_are_rejected() {
    let mut adv = EpsStep::new(5, 2.0).unwrap();
    let err = run_game(&config(2.0, Scenario::S1 { radius: 0.5 }), &mut ZeroLearner, &mut adv).unwrap_err();
    assert!(matches!(err, Error::IncompatibleScenario { .. }));
}

#[test]
fn monotonicity_example() {
    let inputs: Vec<Point> = [0.0, 0.5, 3.0].iter().map(|&x| alloc::vec![x]).collect();
    let report = scenario_monotonicity_check(&inputs, &[9.0, 1.0, 2.0], 2.0, 1.0, 5.0).unwrap();
    assert_eq!(report.small, alloc::vec![1]);
    assert_eq!(report.large, alloc::vec![1, 2]);
    assert_eq!((report.loss_small, report.loss_large), (1.0, 5.0));
    assert!(report.holds());
    let same = scenario_monotonicity_check(&inputs, &[0.0; 3], 2.0, 1.0, 1.0).unwrap();
    assert_eq!(same.small, same.large);
}

fn random_transcript(seed: u64) -> Transcript {
    let mut adv = GreedyBudgetAdversary::new(2.0, InputMode::Free, 40, 0.3, seed).unwrap();
    run_game(
        &config(2.0, Scenario::Base).with_horizon(40),
        &mut LinintPrime::new(),
        &mut adv,
    )
    .unwrap()
}

#[test]
fn degenerate_weights_reproduce_other_scenarios() {
    for seed in 0..20 {
        let tr = random_transcript(seed);
        let p = tr.config.p;
        let indicator = tr.loss_under(&Scenario::S3(WeightFunction::Indicator), p).unwrap();
        let s2 = tr.loss_under(&Scenario::S2 { radius: 1.0 }, p).unwrap();
        assert_eq!(indicator, s2);
        let one = tr.loss_under(&Scenario::S3(WeightFunction::ConstantOne), p).unwrap();
        assert_eq!(one, tr.cumulative_loss);
        assert_eq!(tr.loss_under(&Scenario::Base, p).unwrap(), tr.cumulative_loss);
    }
}

#[test]
fn ratio_bounds_on_random_transcripts() {
    let exp = WeightFunction::exponential(1.5).unwrap();
    for seed in 0..20 {
        let tr = random_transcript(seed);
        let same = ratio_bound_check(&tr, &WeightFunction::Identity, &WeightFunction::Identity).unwrap();
        assert_eq!(same.constant, 1.0);
        assert_eq!(same.loss_g, same.loss_h);
        let id_exp = ratio_bound_check(&tr, &WeightFunction::Identity, &exp).unwrap();
        assert!((id_exp.constant - 1.0 / (1.5 * core::f64::consts::E)).abs() < 1e-12);
        assert_eq!(id_exp.holds, Some(true));
        let one_exp = ratio_bound_check(&tr, &WeightFunction::ConstantOne, &exp).unwrap();
        assert_eq!(one_exp.constant, 1.0);
        assert_eq!(one_exp.holds, Some(true));
        // h/g = z for Identity vs ConstantOne: unbounded, nothing asserted.
        let vacuous = ratio_bound_check(&tr, &WeightFunction::Identity, &WeightFunction::ConstantOne).unwrap();
        assert_eq!(vacuous.holds, None);
    }
}

#[test]
fn scaling_law_on_coupled_games() {
    for (p, q) in [(2.0, 2.0), (3.0, 2.0), (1.5, 3.0)] {
        for seed in 0..5 {
            let base_cfg = GameConfig::new(p, q, Scenario::S1 { radius: 1.0 })
                .unwrap()
                .with_horizon(60);
            let mode = InputMode::Admissible { radius: 1.0 };
            let mut adv = GreedyBudgetAdversary::new(q, mode, 60, 0.3, seed).unwrap();
            let base = run_game(&base_cfg, &mut LinintPrime::new(), &mut adv).unwrap();
            for radius in [0.5, 2.0, 4.0] {
                let cfg = base_cfg.clone().with_scenario(Scenario::S1 { radius });
                let mut learner = Rescaled::new(LinintPrime::new(), radius, q).unwrap();
                let inner = GreedyBudgetAdversary::new(q, mode, 60, 0.3, seed).unwrap();
                let mut dilated = Dilated::new(inner, radius, q).unwrap();
                let scaled = run_game(&cfg, &mut learner, &mut dilated).unwrap();
                let ratio = scaled.cumulative_loss / base.cumulative_loss;
                let expected = radius_loss_factor(radius, p, q);
                assert!(
                    (ratio / expected - 1.0).abs() < 1e-9,
                    "p={p} q={q} R={radius}: {ratio} vs {expected}"
                );
                assert!(dilated.certificate().verify(&scaled).unwrap().passed());
            }
        }
    }
}

#[test]
fn transcript_validation_rejects_conflicting_labels() {
    let tr = run_game(
        &config(1.0, Scenario::Base),
        &mut ZeroLearner,
        &mut script(&[0.0, 0.0], &[0.0, 1.0]),
    )
    .unwrap();
    assert_eq!(
        validate_transcript(&tr, &crate::classes::SmoothClass::gq(2.0).unwrap()),
        Err(Error::InconsistentHistory)
    );
    let tr = random_transcript(3);
    let m = validate_transcript(&tr, &crate::classes::SmoothClass::gq(2.0).unwrap()).unwrap();
    assert!(m.member);
}
