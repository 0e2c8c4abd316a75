use std::sync::Arc;

use smoothgame_core::adversaries::{
    Adversary, BasisAdversary, EpsStep, FamilyAdversary, FamilyKind, GeometricEscape, SlowDecayEscape, Summability,
    TentAdversary, TwoRoundWeighted,
};
use smoothgame_core::classes::family::{f_eps, f_n_eps, g_n_eps};
use smoothgame_core::classes::SmoothClass;
use smoothgame_core::engine::{
    run_game, validate_transcript, CustomKind, CustomWeight, GameConfig, Scenario, WeightFunction,
};
use smoothgame_core::learners::{
    FeasibleMidpoint, Learner, Linint, LinintPrime, Projected, SpanLearner, TentVersionSpace, ZeroLearner,
};
use smoothgame_core::pwl::BreakpointFunction;

fn scalar_learners() -> Vec<Box<dyn Learner>> {
    vec![
        Box::new(ZeroLearner),
        Box::new(Linint::new()),
        Box::new(LinintPrime::new()),
    ]
}

fn cfg(p: f64, q: f64, scenario: Scenario, horizon: usize) -> GameConfig {
    GameConfig::new(p, q, scenario).unwrap().with_horizon(horizon)
}

#[test]
fn geometric_escape_forces_half_step_every_round() {
    for mut learner in scalar_learners() {
        let mut adv = GeometricEscape::new(2.0, 1.0, 2.0, 100).unwrap();
        let tr = run_game(&cfg(2.0, 2.0, Scenario::Base, 100), learner.as_mut(), &mut adv).unwrap();
        assert!(tr.rounds.iter().skip(1).all(|r| r.error() >= 0.5));
        assert!(tr.cumulative_loss >= 25.0);
        let v = adv.certificate().verify(&tr).unwrap();
        assert!(v.passed(), "action {}", v.action);
        assert!(validate_transcript(&tr, &SmoothClass::gq(2.0).unwrap()).unwrap().member);
    }
    let adv = GeometricEscape::new(2.0, 1.0, 2.0, 3).unwrap();
    assert!(!adv.supports(&Scenario::S1 { radius: 1.0 }));
    assert!(!adv.supports(&Scenario::S2 { radius: 1.0 }));
}

#[test]
fn slow_decay_weighted_loss_tracks_partial_sums() {
    let log = CustomWeight::new(
        "inv_log2",
        CustomKind::Closure(Arc::new(|z: f64| 1.0 / (1.0 + z).log2())),
        true,
    )
    .unwrap();
    let w = WeightFunction::Custom(log);
    let mut adv = SlowDecayEscape::new(2.0, 1.0, 2.0, 200, w.clone()).unwrap();
    assert_eq!(adv.summability(), Summability::Divergent);
    let tr = run_game(&cfg(1.0, 2.0, Scenario::S3(w), 200), &mut ZeroLearner, &mut adv).unwrap();
    for (i, r) in tr.rounds.iter().enumerate().skip(1) {
        assert_eq!(r.delta, Some(2f64.powi(i as i32)));
    }
    assert!(tr.cumulative_loss >= adv.forced_loss(1.0) * (1.0 - 1e-12));
    let geo = SlowDecayEscape::new(2.0, 1.0, 2.0, 10, WeightFunction::Identity).unwrap();
    assert_eq!(geo.summability(), Summability::Summable);
}

#[test]
fn eps_step_bound_and_action() {
    let (n, p, q) = (4096usize, 2.0, 3.0);
    let mut adv = EpsStep::new(n, q).unwrap();
    let tr = run_game(
        &cfg(p, q, Scenario::S1 { radius: 1.0 }, n),
        &mut LinintPrime::new(),
        &mut adv,
    )
    .unwrap();
    let bound = (n as f64).powf(1.0 - p / q) / 2f64.powf(p);
    assert!((bound - 4.0).abs() < 1e-9);
    assert!(tr.cumulative_loss >= bound * (1.0 - 1e-12));
    let v = adv.certificate().verify(&tr).unwrap();
    assert!((v.action - 1.0).abs() < 1e-9);
    assert!(v.consistent);

    let mut single = EpsStep::new(1, 2.0).unwrap();
    let tr = run_game(&cfg(3.0, 2.0, Scenario::Base, 10), &mut ZeroLearner, &mut single).unwrap();
    assert_eq!(tr.scored_len(), 1);
    assert!(tr.cumulative_loss >= 0.125);
}

#[test]
fn two_round_probe_at_the_maximiser() {
    let exp = WeightFunction::exponential(1.0).unwrap();
    let adv = TwoRoundWeighted::new(exp.clone(), 2.0, None).unwrap();
    assert!((adv.probe() - 1.0).abs() < 1e-12);
    for mut learner in scalar_learners() {
        let mut adv = TwoRoundWeighted::new(exp.clone(), 2.0, None).unwrap();
        let tr = run_game(
            &cfg(2.0, 2.0, Scenario::S3(exp.clone()), 10),
            learner.as_mut(),
            &mut adv,
        )
        .unwrap();
        assert!(tr.cumulative_loss >= (-1f64).exp() - 1e-12);
        assert!(adv.certificate().verify(&tr).unwrap().passed());
    }
    // Unbounded z g(z) needs an explicit probe.
    assert!(TwoRoundWeighted::new(WeightFunction::ConstantOne, 2.0, None).is_err());
    assert!(TwoRoundWeighted::new(WeightFunction::ConstantOne, 2.0, Some(50.0)).is_ok());
    // Identity: every probe forces at least 1; the zero learner pays exactly
    // g(x) x.
    for x in [0.01, 1.0, 37.0] {
        let mut adv = TwoRoundWeighted::new(WeightFunction::Identity, 2.0, Some(x)).unwrap();
        let tr = run_game(
            &cfg(2.0, 2.0, Scenario::S3(WeightFunction::Identity), 5),
            &mut ZeroLearner,
            &mut adv,
        )
        .unwrap();
        assert!((tr.cumulative_loss - 1.0).abs() < 1e-12);
    }
}

#[test]
fn basis_adversary_forces_n_r_p() {
    let mut adv = BasisAdversary::new(3, 2.0, 1.0).unwrap();
    let config = cfg(2.0, 2.0, Scenario::Base, 10).with_dimension(3);
    let tr = run_game(&config, &mut SpanLearner::new(2.0).unwrap(), &mut adv).unwrap();
    assert!((tr.cumulative_loss - 12.0).abs() < 1e-9);
    assert!(adv.certificate().verify(&tr).unwrap().passed());
    let tr = run_game(
        &config,
        &mut ZeroLearner,
        &mut BasisAdversary::new(3, 2.0, 1.0).unwrap(),
    )
    .unwrap();
    assert!(tr.cumulative_loss >= 12.0);

    let exp = WeightFunction::exponential(1.0).unwrap();
    let config = cfg(2.0, 2.0, Scenario::S3(exp), 10).with_dimension(3);
    let tr = run_game(
        &config,
        &mut SpanLearner::new(2.0).unwrap(),
        &mut BasisAdversary::new(3, 2.0, 0.01).unwrap(),
    )
    .unwrap();
    assert!(tr.cumulative_loss >= 12.0 * (-0.01f64).exp() * (1.0 - 1e-12));

    let config = cfg(1.0, 2.0, Scenario::S3(WeightFunction::Identity), 10).with_dimension(1);
    let tr = run_game(
        &config,
        &mut ZeroLearner,
        &mut BasisAdversary::new(1, 1.0, 1e-3).unwrap(),
    )
    .unwrap();
    assert!(tr.cumulative_loss >= 1e3 * (1.0 - 1e-12));
}

fn family_learners(members: &[BreakpointFunction]) -> Vec<Box<dyn Learner>> {
    vec![
        Box::new(FeasibleMidpoint::finite(members.to_vec()).unwrap()),
        Box::new(Linint::new()),
        Box::new(LinintPrime::new()),
        Box::new(ZeroLearner),
    ]
}

#[test]
fn f_eps_script_forces_one_plus_half_power() {
    let s2 = Scenario::S2 { radius: 1.0 };
    for p in [1.0, 2.0] {
        for mut learner in family_learners(&f_eps(0.01).unwrap()) {
            let mut adv = FamilyAdversary::new(FamilyKind::FEps { eps: 0.01 }).unwrap();
            let tr = run_game(&cfg(p, 2.0, s2.clone(), 10), learner.as_mut(), &mut adv).unwrap();
            assert!(
                tr.cumulative_loss >= 1.0 + 2f64.powf(-p) - 1e-12,
                "{}: {}",
                learner.name(),
                tr.cumulative_loss
            );
            assert!(adv.certificate().verify(&tr).unwrap().passed());
        }
    }
    assert!(FamilyAdversary::new(FamilyKind::FEps { eps: 0.6 }).is_err());
}

#[test]
fn f_eps_script_branch_on_negative_side() {
    // A learner guessing 0.9 at x = 1 pays |1.9| >= 1.5 in the p = 1 test.
    struct Fixed;
    impl Learner for Fixed {
        fn name(&self) -> &str {
            "fixed"
        }
        fn predict(&mut self, _x: &[f64]) -> smoothgame_core::Result<f64> {
            Ok(0.9)
        }
        fn observe(&mut self, _x: &[f64], _y: f64) -> smoothgame_core::Result<()> {
            Ok(())
        }
    }
    let mut adv = FamilyAdversary::new(FamilyKind::FEps { eps: 0.01 }).unwrap();
    let tr = run_game(&cfg(1.0, 2.0, Scenario::S2 { radius: 1.0 }, 10), &mut Fixed, &mut adv).unwrap();
    assert_eq!(tr.rounds.len(), 2);
    assert!((tr.cumulative_loss - 1.9).abs() < 1e-12);
    let cert = adv.certificate();
    assert!(matches!(
        cert,
        smoothgame_core::adversaries::Certificate::FamilyMember { index: 2, .. }
    ));
}

#[test]
fn f_n_eps_script_forces_k() {
    for n in [4usize, 8, 16] {
        let k = n.trailing_zeros() as f64;
        for mut learner in family_learners(&f_n_eps(n, 0.01).unwrap()) {
            let mut adv = FamilyAdversary::new(FamilyKind::FNEps { n, eps: 0.01 }).unwrap();
            let tr = run_game(
                &cfg(1.0, 2.0, Scenario::S2 { radius: 1.0 }, 100),
                learner.as_mut(),
                &mut adv,
            )
            .unwrap();
            assert!(tr.cumulative_loss >= k - 1e-12);
            assert!(adv.certificate().verify(&tr).unwrap().passed());
        }
    }
}

#[test]
fn g_n_eps_script_forces_threshold() {
    let c = 16.0 / 9.0;
    for mut learner in family_learners(&g_n_eps(5, 0.01).unwrap()) {
        let mut adv = FamilyAdversary::new(FamilyKind::GNEps { n: 5, eps: 0.01 }).unwrap();
        assert!((adv.forced_loss(2.0) - c).abs() < 1e-12);
        let tr = run_game(
            &cfg(2.0, 2.0, Scenario::S2 { radius: 1.0 }, 100),
            learner.as_mut(),
            &mut adv,
        )
        .unwrap();
        assert!(tr.cumulative_loss >= c - 1e-12);
        assert!(adv.certificate().verify(&tr).unwrap().passed());
    }
}

/// Predicts a constant everywhere.
struct Constant(f64);

impl Learner for Constant {
    fn name(&self) -> &str {
        "constant"
    }
    fn predict(&mut self, _x: &[f64]) -> smoothgame_core::Result<f64> {
        Ok(self.0)
    }
    fn observe(&mut self, _x: &[f64], _y: f64) -> smoothgame_core::Result<()> {
        Ok(())
    }
}

#[test]
fn g_n_eps_threshold_is_tight() {
    // Guessing just inside the halting threshold makes the script reveal -1
    // every time, at a total cost of c_n (up to the margin).
    for (n, p) in [(5usize, 2.0), (17, 8.0)] {
        let mut adv = FamilyAdversary::new(FamilyKind::GNEps { n, eps: 1e-4 }).unwrap();
        let c = adv.forced_loss(p);
        let guess = 1.0 - c.powf(1.0 / p) * (1.0 - 1e-9);
        let tr = run_game(
            &cfg(p, 2.0, Scenario::S2 { radius: 1.0 }, 1000),
            &mut Constant(guess),
            &mut adv,
        )
        .unwrap();
        assert!(tr.cumulative_loss >= c - 1e-12);
        assert!(
            tr.cumulative_loss <= c * (1.0 + 1e-6),
            "n={n} p={p}: {} vs {c}",
            tr.cumulative_loss
        );
    }
}

#[test]
fn pair_adversary_forces_half_m() {
    let f1 = BreakpointFunction::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
    let f2 = BreakpointFunction::new(vec![(0.0, 0.0)]).unwrap();
    let members = vec![f1.clone(), f2.clone()];
    for scenario in [Scenario::S1 { radius: 1.0 }, Scenario::S2 { radius: 1.0 }] {
        let mut adv = FamilyAdversary::new(FamilyKind::Pair {
            f1: f1.clone(),
            f2: f2.clone(),
        })
        .unwrap();
        let mut learner = FeasibleMidpoint::finite(members.clone()).unwrap();
        let tr = run_game(&cfg(2.0, 2.0, scenario, 10), &mut learner, &mut adv).unwrap();
        assert!((tr.cumulative_loss - 0.25).abs() < 1e-12);
        assert!(adv.certificate().verify(&tr).unwrap().passed());
    }
}

#[test]
fn tent_adversary_unit_steps_and_certificate() {
    let n = 200;
    let mut adv = TentAdversary::new(2.0, 0.05, n).unwrap();
    let a = adv.tent().amplitude();
    assert!((a - 160f64.powf(-0.5)).abs() < 1e-12);
    let config = cfg(2.0, 2.0, Scenario::S2 { radius: 1.0 }, n).with_dimension(2);
    let tr = run_game(&config, &mut Projected::new(LinintPrime::new()), &mut adv).unwrap();
    assert_eq!(tr.counted_set(), (1..=n).collect::<Vec<_>>());
    for r in tr.rounds.iter().skip(1) {
        assert!((r.delta.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.error() >= a / 2.0);
    }
    let v = adv.certificate().verify(&tr).unwrap();
    assert!(v.passed(), "slice action {}", v.action);

    let mut adv = TentAdversary::new(2.0, 0.05, n).unwrap();
    let mut learner = FeasibleMidpoint::new(TentVersionSpace::new(2.0, 0.05).unwrap());
    let exp = WeightFunction::exponential(1.0).unwrap();
    let g1 = exp.evaluate(1.0);
    let config = cfg(2.0, 2.0, Scenario::S3(exp), n).with_dimension(2);
    let tr = run_game(&config, &mut learner, &mut adv).unwrap();
    assert!(tr.cumulative_loss >= n as f64 * g1 * (a / 2.0).powi(2) * (1.0 - 1e-12));
    assert!(TentAdversary::new(2.0, 0.1, 3).is_err());
}
