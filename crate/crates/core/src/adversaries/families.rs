//! Scripted adversaries for finite families.
//!
//! Every script opens with an unscored round at a point where all members
//! agree (value 0), so that the following rounds are penalised under the
//! radius-1 free-guess scenario exactly as the scripts intend.

use alloc::vec::Vec;

use super::{consistent_members, farther_of, Adversary, Certificate};
use crate::classes::family::{f_eps, f_n_eps, family_m_value, g_n_constant, g_n_eps, log2_exact};
use crate::engine::{GameConfig, Scenario};
use crate::pwl::BreakpointFunction;
use crate::{math, Error, Point, Result};

/// Which family and script to play.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    /// Three members; forces `1 + 2^{-p}`.
    FEps { eps: f64 },
    /// `n = 2^k` bit-encoding members; forces `k`.
    FNEps { n: usize, eps: f64 },
    /// `n` members; forces `g_n_constant(n, p)`.
    GNEps { n: usize, eps: f64 },
    /// Any two members; forces `(m/2)^p`.
    Pair {
        f1: BreakpointFunction,
        f2: BreakpointFunction,
    },
}

#[derive(Debug, Clone)]
pub struct FamilyAdversary {
    kind: FamilyKind,
    members: Vec<BreakpointFunction>,
    script: Vec<f64>,
    history: Vec<(f64, f64)>,
    p: f64,
    halted: bool,
}

impl FamilyAdversary {
    pub fn new(kind: FamilyKind) -> Result<Self> {
        let (members, script) = match &kind {
            FamilyKind::FEps { eps } => {
                if !(*eps < 0.5) {
                    return Err(Error::param("eps", "F_eps separates only for eps < 1/2"));
                }
                (f_eps(*eps)?, alloc::vec![2.0, 1.0, 4.0, 5.0])
            }
            FamilyKind::FNEps { n, eps } => {
                let k = log2_exact(*n)?;
                let script = (0..k).flat_map(|j| {
                    let base = 4.0 * f64::from(j);
                    [base + 2.0, base + 3.0]
                });
                (f_n_eps(*n, *eps)?, script.collect())
            }
            FamilyKind::GNEps { n, eps } => {
                let script = (1..*n).flat_map(|j| {
                    let x = 4.0 * j as f64;
                    [x - 2.0, x - 1.0]
                });
                (g_n_eps(*n, *eps)?, script.collect())
            }
            FamilyKind::Pair { f1, f2 } => {
                let mv = family_m_value(f1, f2);
                let script = match (mv.anchor, mv.argmax) {
                    (Some(a), Some(x)) if a != x => alloc::vec![a, x],
                    (Some(a), _) => alloc::vec![a],
                    _ => alloc::vec![0.0],
                };
                (alloc::vec![f1.clone(), f2.clone()], script)
            }
        };
        Ok(Self {
            kind,
            members,
            script,
            history: Vec::new(),
            p: 1.0,
            halted: false,
        })
    }

    pub fn members(&self) -> &[BreakpointFunction] {
        &self.members
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// The loss the script guarantees against every learner under the
    /// radius-1 free-guess scenario.
    pub fn forced_loss(&self, p: f64) -> f64 {
        match &self.kind {
            FamilyKind::FEps { .. } => 1.0 + math::powf(2.0, -p),
            FamilyKind::FNEps { n, .. } => f64::from(n.trailing_zeros()),
            FamilyKind::GNEps { n, .. } => g_n_constant(*n, p),
            FamilyKind::Pair { f1, f2 } => math::powf(family_m_value(f1, f2).m / 2.0, p),
        }
    }

    fn member_value(&self, index: usize, x: f64) -> f64 {
        self.members[index].evaluate(x)
    }
}

impl Adversary for FamilyAdversary {
    fn name(&self) -> &str {
        match self.kind {
            FamilyKind::FEps { .. } => "family_f_eps",
            FamilyKind::FNEps { .. } => "family_f_n_eps",
            FamilyKind::GNEps { .. } => "family_g_n_eps",
            FamilyKind::Pair { .. } => "family_pair",
        }
    }

    fn supports(&self, scenario: &Scenario) -> bool {
        match (&self.kind, scenario) {
            (FamilyKind::Pair { .. }, Scenario::S1 { radius }) => crate::within_radius(1.0, *radius),
            (_, Scenario::S1 { .. }) => false,
            _ => true,
        }
    }

    fn start(&mut self, config: &GameConfig) -> Result<()> {
        self.p = config.p;
        self.history.clear();
        self.halted = false;
        Ok(())
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        if self.halted {
            return Ok(None);
        }
        Ok(self.script.get(t).map(|&x| alloc::vec![x]))
    }

    fn reveal(&mut self, t: usize, x: &[f64], y_hat: f64) -> Result<f64> {
        let x = x[0];
        let y = match &self.kind {
            _ if t == 0 => self.member_value(0, x),
            FamilyKind::FEps { .. } if t == 1 => {
                if math::powf((1.0 + y_hat).abs(), self.p) >= 1.0 + math::powf(2.0, -self.p) {
                    self.halted = true;
                    -1.0
                } else {
                    1.0
                }
            }
            FamilyKind::FEps { .. } => match t {
                2 => 0.0,
                _ => farther_of(y_hat, 1.0, -1.0),
            },
            FamilyKind::FNEps { .. } => {
                if t.is_multiple_of(2) {
                    0.0
                } else {
                    farther_of(y_hat, 1.0, -1.0)
                }
            }
            FamilyKind::GNEps { n, .. } => {
                if t.is_multiple_of(2) {
                    0.0
                } else {
                    let c = g_n_constant(*n, self.p);
                    if (y_hat - 1.0).abs() >= math::powf(c, 1.0 / self.p) {
                        self.halted = true;
                        1.0
                    } else {
                        -1.0
                    }
                }
            }
            FamilyKind::Pair { f1, f2 } => farther_of(y_hat, f1.evaluate(x), f2.evaluate(x)),
        };
        self.history.push((x, y));
        if consistent_members(&self.members, &self.history).next().is_none() {
            return Err(Error::InconsistentHistory);
        }
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
