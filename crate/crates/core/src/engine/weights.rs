//! Distance weights `g : (0, inf) -> [0, inf)` for the weighted scenario.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::math;
use crate::pwl::BreakpointFunction;
use crate::{Error, Result};

/// Evaluator behind a [`WeightFunction::Custom`].
#[derive(Clone)]
pub enum CustomKind {
    /// Piecewise-linear table over `z`, constant beyond its ends.
    Table(BreakpointFunction),
    Closure(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A user-supplied weight.
#[derive(Clone)]
pub struct CustomWeight {
    name: String,
    kind: CustomKind,
    nonincreasing: bool,
}

impl CustomWeight {
    /// Wraps `kind`, spot-checking nonnegativity (and monotonicity when
    /// `nonincreasing` is declared) on a log grid over `[1e-6, 1e6]`.
    pub fn new(name: impl Into<String>, kind: CustomKind, nonincreasing: bool) -> Result<Self> {
        let weight = Self {
            name: name.into(),
            kind,
            nonincreasing,
        };
        let mut prev = f64::INFINITY;
        for k in 0..=240 {
            let z = math::powf(10.0, -6.0 + f64::from(k) * 0.05);
            let g = weight.evaluate(z);
            if !(g >= 0.0) {
                return Err(Error::param(
                    "weight",
                    alloc::format!("g({z}) = {g} is not a nonnegative number"),
                ));
            }
            if nonincreasing && g > prev * (1.0 + 1e-12) {
                return Err(Error::param(
                    "weight",
                    alloc::format!("declared nonincreasing but g rises at z = {z}"),
                ));
            }
            prev = g;
        }
        Ok(weight)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.nonincreasing
    }

    pub fn evaluate(&self, z: f64) -> f64 {
        match &self.kind {
            CustomKind::Table(f) => f.evaluate(z),
            CustomKind::Closure(g) => g(z),
        }
    }
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight")
            .field("name", &self.name)
            .field("nonincreasing", &self.nonincreasing)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomWeight {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.nonincreasing == other.nonincreasing
            && match (&self.kind, &other.kind) {
                (CustomKind::Table(a), CustomKind::Table(b)) => a == b,
                (CustomKind::Closure(a), CustomKind::Closure(b)) => Arc::ptr_eq(a, b),
                _ => false,
            }
    }
}

/// The distance weight of the weighted scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFunction {
    /// `g(z) = 1 / z`.
    Identity,
    /// `g(z) = exp(-c z)`.
    Exponential {
        c: f64,
    },
    /// `g(z) = 1` for `z <= 1`, else 0.
    Indicator,
    /// `g(z) = 1`.
    ConstantOne,
    Custom(CustomWeight),
}

/// A supremum together with a point attaining it (when one exists).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supremum {
    pub value: f64,
    pub argmax: Option<f64>,
}

impl Supremum {
    const INFINITE: Supremum = Supremum {
        value: f64::INFINITY,
        argmax: None,
    };
}

impl WeightFunction {
    pub fn exponential(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::param("c", "exponential rate must be positive"));
        }
        Ok(WeightFunction::Exponential { c })
    }

    pub fn evaluate(&self, z: f64) -> f64 {
        match self {
            WeightFunction::Identity => 1.0 / z,
            WeightFunction::Exponential { c } => math::exp(-c * z),
            WeightFunction::Indicator => {
                if crate::within_radius(z, 1.0) {
                    1.0
                } else {
                    0.0
                }
            }
            WeightFunction::ConstantOne => 1.0,
            WeightFunction::Custom(w) => w.evaluate(z),
        }
    }

    /// Whether `g` is known to be nonincreasing.
    pub fn is_nonincreasing(&self) -> bool {
        match self {
            WeightFunction::Custom(w) => w.is_nonincreasing(),
            _ => true,
        }
    }

    /// `gamma = sup_{z > 0} z g(z)`.
    ///
    /// Registered kinds use closed forms. Custom weights are maximised
    /// numerically: a scan over `z = 10^{k/20}`, `k = -240..=240`, then a
    /// golden-section refinement in `log z` to relative tolerance `1e-8`. The
    /// supremum is reported as infinite when `z g(z)` still increases at the
    /// top of the scan.
    pub fn sup_z_times_g(&self) -> Supremum {
        match self {
            WeightFunction::Identity => Supremum {
                value: 1.0,
                argmax: Some(1.0),
            },
            WeightFunction::Exponential { c } => Supremum {
                value: 1.0 / (c * core::f64::consts::E),
                argmax: Some(1.0 / c),
            },
            WeightFunction::Indicator => Supremum {
                value: 1.0,
                argmax: Some(1.0),
            },
            WeightFunction::ConstantOne => Supremum::INFINITE,
            WeightFunction::Custom(_) => maximize_log(|z| z * self.evaluate(z)),
        }
    }

    /// Short label used in summaries, e.g. `exp:c=1`.
    pub fn label(&self) -> String {
        match self {
            WeightFunction::Identity => "id".into(),
            WeightFunction::Exponential { c } => alloc::format!("exp:c={c}"),
            WeightFunction::Indicator => "indicator".into(),
            WeightFunction::ConstantOne => "one".into(),
            WeightFunction::Custom(w) => alloc::format!("custom:{}", w.name()),
        }
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `C_{g,h} = sup_{z > 0} h(z) / g(z)`, the constant in `L^h <= C L^g`.
///
/// Closed forms cover every pair of registered kinds; pairs involving a
/// custom weight fall back to the numeric log-scale maximisation of `h / g`
/// (a point with `h > 0 = g` makes the constant infinite).
pub fn ratio_constant(g: &WeightFunction, h: &WeightFunction) -> Supremum {
    use WeightFunction::*;
    let one = Supremum {
        value: 1.0,
        argmax: None,
    };
    match (g, h) {
        (Custom(_), _) | (_, Custom(_)) => maximize_log(|z| {
            let (gz, hz) = (g.evaluate(z), h.evaluate(z));
            if hz == 0.0 {
                0.0
            } else if gz == 0.0 {
                f64::INFINITY
            } else {
                hz / gz
            }
        }),
        _ if g == h => one,
        // sup z e^{-cz} = 1/(ce) at z = 1/c.
        (Identity, Exponential { .. }) => h.sup_z_times_g(),
        // sup z 1{z <= 1} = 1 at z = 1.
        (Identity, Indicator) => Supremum {
            value: 1.0,
            argmax: Some(1.0),
        },
        (ConstantOne, Exponential { .. }) | (ConstantOne, Indicator) => one,
        // e^{(c_g - c_h) z} stays bounded iff c_h >= c_g.
        (Exponential { c: cg }, Exponential { c: ch }) => {
            if ch >= cg {
                one
            } else {
                Supremum::INFINITE
            }
        }
        // sup_{z <= 1} e^{cz} = e^c.
        (Exponential { c }, Indicator) => Supremum {
            value: math::exp(*c),
            argmax: Some(1.0),
        },
        // Everything else blows up either as z -> 0 (h = 1/z against a
        // bounded g) or as z -> inf (g decays faster than h, or vanishes).
        _ => Supremum::INFINITE,
    }
}

/// Numeric supremum of `phi` over `z > 0` on a log scale.
fn maximize_log(phi: impl Fn(f64) -> f64) -> Supremum {
    const LO: i32 = -240;
    const HI: i32 = 240;
    let at = |k: f64| phi(math::powf(10.0, k / 20.0));
    let mut best_k = LO;
    let mut best = f64::NEG_INFINITY;
    for k in LO..=HI {
        let v = at(f64::from(k));
        if v.is_nan() {
            continue;
        }
        if v == f64::INFINITY {
            return Supremum::INFINITE;
        }
        if v > best {
            best = v;
            best_k = k;
        }
    }
    if best_k == HI && at(f64::from(HI)) > at(f64::from(HI - 1)) * (1.0 + 1e-9) {
        return Supremum::INFINITE;
    }
    // Golden-section search on log10 z over the neighbouring scan cells.
    let (mut a, mut b) = (f64::from(best_k - 1), f64::from(best_k + 1));
    let ratio = (math::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (at(c), at(d));
    while (b - a) > 1e-10 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = at(d);
        }
    }
    let k = 0.5 * (a + b);
    let refined = at(k);
    if refined >= best {
        Supremum {
            value: refined,
            argmax: Some(math::powf(10.0, k / 20.0)),
        }
    } else {
        Supremum {
            value: best,
            argmax: Some(math::powf(10.0, f64::from(best_k) / 20.0)),
        }
    }
}
