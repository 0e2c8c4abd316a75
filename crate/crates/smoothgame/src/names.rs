//! Parsing of `name:key=value,...` strategy specs and construction of the
//! learners, adversaries, scenarios and weights they name.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use smoothgame_core::adversaries::{
    max_step_height, random_finite_family, Adversary, BasisAdversary, EpsStep, FamilyAdversary, FamilyKind,
    FamilyWalkAdversary, GeometricEscape, GreedyBudgetAdversary, InputMode, SlowDecayEscape, TargetAdversary,
    TentAdversary, TwoRoundWeighted,
};
use smoothgame_core::classes::family::{f_eps, f_n_eps, g_n_eps};
use smoothgame_core::engine::{CustomKind, CustomWeight, Scenario, WeightFunction};
use smoothgame_core::learners::{
    EscapeVersionSpace, FeasibleMidpoint, FiniteVersionSpace, Learner, Linint, LinintPrime, Projected, SpanLearner,
    TentVersionSpace, ZeroLearner,
};
use smoothgame_core::pwl::BreakpointFunction;

use crate::error::{CliError, CliResult};

pub const LEARNERS: &[&str] = &["zero", "linint", "linint_prime", "feasible_midpoint", "span"];

pub const ADVERSARIES: &[&str] = &[
    "geometric_escape",
    "slow_decay_escape",
    "eps_step",
    "two_round_weighted",
    "basis",
    "family_f_eps",
    "family_f_n_eps",
    "family_g_n_eps",
    "tent_2d",
    "greedy_budget",
    "random_target",
    "family_walk",
];

/// A strategy name with its `key=value` parameters, e.g.
/// `geometric_escape:c=2,h=1,N=50`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSpec {
    pub name: String,
    params: BTreeMap<String, String>,
}

impl NamedSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let text = text.trim();
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        if name.is_empty() {
            return Err(CliError::usage(format!("empty name in `{text}`")));
        }
        let mut params = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("parameter `{item}` of `{name}` is not key=value")))?;
            if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(CliError::usage(format!("parameter `{k}` given twice for `{name}`")));
            }
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    /// Rejects keys outside `allowed`.
    pub fn allow(&self, allowed: &[&str]) -> CliResult<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::usage(format!(
                "`{}` takes no parameter `{k}` (known: {})",
                self.name,
                if allowed.is_empty() {
                    "none".to_string()
                } else {
                    allowed.join(", ")
                }
            ))),
            None => Ok(()),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        self.get(key).map_or(Ok(default), |v| {
            v.parse()
                .map_err(|_| CliError::usage(format!("`{}`: `{key}={v}` is not a number", self.name)))
        })
    }

    pub fn opt_f64(&self, key: &str) -> CliResult<Option<f64>> {
        self.get(key).map(|_| self.f64_or(key, 0.0)).transpose()
    }

    /// Accepts plain integers and exact float spellings such as `1e4`.
    pub fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        let Some(v) = self.get(key) else {
            return Ok(default);
        };
        let bad = || CliError::usage(format!("`{}`: `{key}={v}` is not a count", self.name));
        match v.parse::<usize>() {
            Ok(n) => Ok(n),
            Err(_) => {
                let x: f64 = v.parse().map_err(|_| bad())?;
                if x >= 0.0 && x.fract() == 0.0 && x <= 1e15 {
                    Ok(x as usize)
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl fmt::Display for NamedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

/// `g(z) = 1 / log2(1 + z)`: nonincreasing, with `sum_i g(2^i)` growing
/// like the harmonic series.
pub fn inverse_log2_weight() -> WeightFunction {
    let kind = CustomKind::Closure(Arc::new(|z: f64| 1.0 / (1.0 + z).log2()));
    WeightFunction::Custom(CustomWeight::new("invlog2", kind, true).expect("1/log2(1+z) is positive and decreasing"))
}

#[derive(Deserialize)]
struct WeightTable {
    name: Option<String>,
    points: Vec<[f64; 2]>,
    #[serde(default)]
    nonincreasing: bool,
}

fn load_weight_table(path: &Path) -> CliResult<WeightFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read weight table {}: {e}", path.display())))?;
    let table: WeightTable =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("weight table {}: {e}", path.display())))?;
    let f = BreakpointFunction::from_unsorted(table.points.iter().map(|p| (p[0], p[1])).collect())?;
    let name = table.name.unwrap_or_else(|| path.display().to_string());
    Ok(WeightFunction::Custom(CustomWeight::new(
        name,
        CustomKind::Table(f),
        table.nonincreasing,
    )?))
}

/// Parses `id`, `exp:c=<v>`, `indicator`, `one`, `invlog2` or
/// `custom:<file>` (a JSON object with `points: [[z, g], ...]` and optional
/// `name` and `nonincreasing`).
pub fn parse_weight(text: &str) -> CliResult<WeightFunction> {
    if let Some(path) = text.strip_prefix("custom:") {
        return load_weight_table(Path::new(path));
    }
    let spec = NamedSpec::parse(text)?;
    let weight = match spec.name.as_str() {
        "id" | "identity" => WeightFunction::Identity,
        "exp" | "exponential" => {
            spec.allow(&["c"])?;
            WeightFunction::exponential(spec.f64_or("c", 1.0)?)?
        }
        "indicator" => WeightFunction::Indicator,
        "one" => WeightFunction::ConstantOne,
        "invlog2" => inverse_log2_weight(),
        other => {
            return Err(CliError::usage(format!(
                "unknown weight `{other}` (known: id, exp:c=<v>, indicator, one, invlog2, custom:<file>)"
            )))
        }
    };
    if spec.name != "exp" && spec.name != "exponential" {
        spec.allow(&[])?;
    }
    Ok(weight)
}

pub fn parse_scenario(kind: &str, radius: f64, weight: Option<WeightFunction>) -> CliResult<Scenario> {
    let scenario = match kind {
        "base" => Scenario::Base,
        "s1" => Scenario::S1 { radius },
        "s2" => Scenario::S2 { radius },
        "s3" => Scenario::S3(weight.unwrap_or(WeightFunction::Identity)),
        other => {
            return Err(CliError::usage(format!(
                "unknown scenario `{other}` (known: base, s1, s2, s3)"
            )))
        }
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Game parameters an adversary may depend on.
#[derive(Debug, Clone)]
pub struct GameSetup {
    pub p: f64,
    pub q: f64,
    pub scenario: Scenario,
    pub seed: u64,
}

/// The hypothesis set a feasible-midpoint learner should track when it
/// plays against a given adversary.
#[derive(Debug, Clone)]
pub enum Hypotheses {
    Finite(Vec<BreakpointFunction>),
    Tent { q: f64, eta: f64 },
    Escape { c: f64, h: f64, steps: usize },
}

pub struct BuiltAdversary {
    pub adversary: Box<dyn Adversary>,
    pub hypotheses: Option<Hypotheses>,
}

impl BuiltAdversary {
    fn plain(adversary: impl Adversary + 'static) -> Self {
        Self {
            adversary: Box::new(adversary),
            hypotheses: None,
        }
    }

    fn with(adversary: impl Adversary + 'static, hypotheses: Hypotheses) -> Self {
        Self {
            adversary: Box::new(adversary),
            hypotheses: Some(hypotheses),
        }
    }
}

fn scenario_weight(setup: &GameSetup) -> Option<WeightFunction> {
    match &setup.scenario {
        Scenario::S3(w) => Some(w.clone()),
        _ => None,
    }
}

/// `mode=admissible|free` and `radius`; admissible at the scenario radius is
/// the default under S1, free elsewhere.
fn input_mode(spec: &NamedSpec, setup: &GameSetup) -> CliResult<InputMode> {
    let scenario_radius = match setup.scenario {
        Scenario::S1 { radius } | Scenario::S2 { radius } => Some(radius),
        _ => None,
    };
    let default = if matches!(setup.scenario, Scenario::S1 { .. }) {
        "admissible"
    } else {
        "free"
    };
    match spec.get("mode").unwrap_or(default) {
        "free" => Ok(InputMode::Free),
        "admissible" => Ok(InputMode::Admissible {
            radius: spec.f64_or("radius", scenario_radius.unwrap_or(1.0))?,
        }),
        other => Err(CliError::usage(format!(
            "`{}`: unknown mode `{other}` (admissible, free)",
            spec.name
        ))),
    }
}

fn named_family(spec: &NamedSpec, rng_seed: u64) -> CliResult<Vec<BreakpointFunction>> {
    let eps = spec.f64_or("eps", 0.01)?;
    Ok(match spec.get("family").unwrap_or("f_eps") {
        "f_eps" => f_eps(eps)?,
        "f_n_eps" => f_n_eps(spec.usize_or("n", 8)?, eps)?,
        "g_n_eps" => g_n_eps(spec.usize_or("n", 5)?, eps)?,
        "random" => {
            let size = spec.usize_or("size", 4)?;
            if !(1..=64).contains(&size) {
                return Err(CliError::usage("family_walk: size must lie in 1..=64"));
            }
            random_finite_family(&mut ChaCha8Rng::seed_from_u64(rng_seed), size)
        }
        other => {
            return Err(CliError::usage(format!(
                "family_walk: unknown family `{other}` (f_eps, f_n_eps, g_n_eps, random)"
            )))
        }
    })
}

pub fn build_adversary(spec: &NamedSpec, setup: &GameSetup) -> CliResult<BuiltAdversary> {
    let q = setup.q;
    let built = match spec.name.as_str() {
        "geometric_escape" | "slow_decay_escape" => {
            spec.allow(&["c", "h", "N"])?;
            let c = spec.f64_or("c", 2.0)?;
            let h = spec.f64_or("h", max_step_height(c, q).min(1.0))?;
            let steps = spec.usize_or("N", 100)?;
            let hyp = Hypotheses::Escape { c, h, steps };
            if spec.name == "geometric_escape" {
                BuiltAdversary::with(GeometricEscape::new(c, h, q, steps)?, hyp)
            } else {
                let weight = scenario_weight(setup)
                    .ok_or_else(|| CliError::usage("slow_decay_escape scores under --scenario s3 with a --weight"))?;
                BuiltAdversary::with(SlowDecayEscape::new(c, h, q, steps, weight)?, hyp)
            }
        }
        "eps_step" => {
            spec.allow(&["N"])?;
            BuiltAdversary::plain(EpsStep::new(spec.usize_or("N", 100)?, q)?)
        }
        "two_round_weighted" => {
            spec.allow(&["probe"])?;
            let weight = scenario_weight(setup).unwrap_or(WeightFunction::ConstantOne);
            BuiltAdversary::plain(TwoRoundWeighted::new(weight, q, spec.opt_f64("probe")?)?)
        }
        "basis" => {
            spec.allow(&["n", "r", "eps"])?;
            let n = spec.usize_or("n", 3)?;
            BuiltAdversary::plain(BasisAdversary::new(
                n,
                spec.f64_or("r", 1.0)?,
                spec.f64_or("eps", 1.0)?,
            )?)
        }
        "family_f_eps" | "family_f_n_eps" | "family_g_n_eps" => {
            spec.allow(&["n", "eps"])?;
            let eps = spec.f64_or("eps", 0.01)?;
            let kind = match spec.name.as_str() {
                "family_f_eps" => FamilyKind::FEps { eps },
                "family_f_n_eps" => FamilyKind::FNEps {
                    n: spec.usize_or("n", 8)?,
                    eps,
                },
                _ => FamilyKind::GNEps {
                    n: spec.usize_or("n", 5)?,
                    eps,
                },
            };
            let adversary = FamilyAdversary::new(kind)?;
            let members = adversary.members().to_vec();
            BuiltAdversary::with(adversary, Hypotheses::Finite(members))
        }
        "tent_2d" => {
            spec.allow(&["eta", "N"])?;
            let eta = spec.f64_or("eta", 0.05)?;
            BuiltAdversary::with(
                TentAdversary::new(q, eta, spec.usize_or("N", 100)?)?,
                Hypotheses::Tent { q, eta },
            )
        }
        "greedy_budget" => {
            spec.allow(&["N", "explore", "mode", "radius"])?;
            let mode = input_mode(spec, setup)?;
            let steps = spec.usize_or("N", 100)?;
            BuiltAdversary::plain(GreedyBudgetAdversary::new(
                q,
                mode,
                steps,
                spec.f64_or("explore", 0.3)?,
                setup.seed,
            )?)
        }
        "random_target" => {
            spec.allow(&["N", "pieces", "span", "action", "mode", "radius"])?;
            let mode = input_mode(spec, setup)?;
            BuiltAdversary::plain(TargetAdversary::new(
                q,
                mode,
                spec.usize_or("N", 100)?,
                spec.usize_or("pieces", 8)?,
                spec.f64_or("span", 5.0)?,
                spec.f64_or("action", 1.0)?,
                setup.seed,
            )?)
        }
        "family_walk" => {
            spec.allow(&["family", "n", "eps", "size", "start", "N", "mode", "radius"])?;
            let members = named_family(spec, setup.seed)?;
            let mode = input_mode(spec, setup)?;
            let walk = FamilyWalkAdversary::new(
                members.clone(),
                mode,
                spec.f64_or("start", 0.0)?,
                spec.usize_or("N", 50)?,
                setup.seed,
            )?;
            BuiltAdversary::with(walk, Hypotheses::Finite(members))
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown adversary `{other}` (known: {})",
                ADVERSARIES.join(", ")
            )))
        }
    };
    Ok(built)
}

fn scalar_learner<L: Learner + 'static>(inner: L, dimension: usize) -> Box<dyn Learner> {
    if dimension >= 2 {
        Box::new(Projected::new(inner))
    } else {
        Box::new(inner)
    }
}

/// Builds a learner. Scalar learners run on the first coordinate when the
/// game is multivariate; the feasible-midpoint learner takes its hypothesis
/// set from the adversary it faces.
pub fn build_learner(
    spec: &NamedSpec,
    dimension: usize,
    hypotheses: Option<&Hypotheses>,
) -> CliResult<Box<dyn Learner>> {
    let learner: Box<dyn Learner> = match spec.name.as_str() {
        "zero" => Box::new(ZeroLearner),
        "linint" => scalar_learner(Linint::new(), dimension),
        "linint_prime" => scalar_learner(LinintPrime::new(), dimension),
        "span" => {
            spec.allow(&["r"])?;
            return Ok(Box::new(SpanLearner::new(spec.f64_or("r", 1.0)?)?));
        }
        "feasible_midpoint" | "midpoint" => match hypotheses {
            Some(Hypotheses::Finite(members)) => scalar_learner(
                FeasibleMidpoint::new(FiniteVersionSpace::new(members.clone())?),
                dimension,
            ),
            Some(Hypotheses::Tent { q, eta }) => Box::new(FeasibleMidpoint::new(TentVersionSpace::new(*q, *eta)?)),
            Some(Hypotheses::Escape { c, h, steps }) => {
                Box::new(FeasibleMidpoint::new(EscapeVersionSpace::new(*c, *h, *steps)?))
            }
            None => {
                return Err(CliError::usage(
                    "feasible_midpoint needs a hypothesis set: pair it with a family, tent_2d or escape adversary",
                ))
            }
        },
        other => {
            return Err(CliError::usage(format!(
                "unknown learner `{other}` (known: {})",
                LEARNERS.join(", ")
            )))
        }
    };
    spec.allow(&[])?;
    Ok(learner)
}
