//! Function classes and their membership checks.
//!
//! * `G_q`: functions on the line with q-action at most 1; `G_inf` bounds
//!   the absolute slope by 1 instead.
//! * `G_{q,d}`: functions on `R^d` whose axis-parallel slices are in `G_q`.
//!   Only the separable tent construction ([`SeparableTentFunction`]) is
//!   checked here, through its exact slice actions.
//! * `G_L(n, R, r)`: dot products truncated to zero outside `[-r, r]`.
//! * finite families of breakpoint functions, including the named
//!   constructions in [`family`].

pub mod family;
mod linear;
mod tent;

pub use family::{family_m_value, MValue};
pub use linear::truncated_linear_evaluate;
pub use tent::{Axis, SeparableTentFunction, SliceCheck, TentRound};

use alloc::vec::Vec;

use crate::pwl::{BreakpointFunction, Exponent};
use crate::{Error, Result, MEMBERSHIP_TOLERANCE};

/// A function class, also used as the serialisable family descriptor.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum SmoothClass {
    Gq { q: f64 },
    Ginf,
    Gqd { q: f64, d: usize },
    TruncatedLinear { n: usize, r: f64 },
    Finite { members: Vec<BreakpointFunction> },
}

/// JSON descriptor of a class or finite family: `{"kind": ..., ...}`.
pub type FamilySpec = SmoothClass;

impl SmoothClass {
    pub fn gq(q: f64) -> Result<Self> {
        let class = SmoothClass::Gq { q };
        class.validate()?;
        Ok(class)
    }

    pub fn finite(members: Vec<BreakpointFunction>) -> Result<Self> {
        let class = SmoothClass::Finite { members };
        class.validate()?;
        Ok(class)
    }

    /// Checks the parameter invariants (also needed after deserialising).
    pub fn validate(&self) -> Result<()> {
        match *self {
            SmoothClass::Gq { q } | SmoothClass::Gqd { q, .. } if !(q > 1.0) => Err(Error::InvalidExponent(q)),
            SmoothClass::Gqd { d: 0, .. } => Err(Error::param("d", "dimension must be at least 1")),
            SmoothClass::TruncatedLinear { n, r } if n == 0 || !(r > 0.0) => {
                Err(Error::param("n, r", "need n >= 1 and r > 0"))
            }
            SmoothClass::Finite { ref members } if members.is_empty() => {
                Err(Error::param("members", "a finite family must be nonempty"))
            }
            _ => Ok(()),
        }
    }

    /// Exponent of the action budget, for the classes that have one.
    pub fn exponent(&self) -> Option<Exponent> {
        match *self {
            SmoothClass::Gq { q } | SmoothClass::Gqd { q, .. } => Some(Exponent::Finite(q)),
            SmoothClass::Ginf => Some(Exponent::Infinite),
            _ => None,
        }
    }
}

/// Outcome of a membership test together with the quantity that decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Membership {
    pub member: bool,
    /// The computed action (or max slope for `G_inf`; member index for
    /// finite families).
    pub action: f64,
}

/// Membership of a one-dimensional breakpoint function.
///
/// `G_q` and `G_inf` compare the action against 1 with an absolute slack of
/// [`MEMBERSHIP_TOLERANCE`]. Finite families report whether `f` agrees with
/// some member on every breakpoint of either function; `action` then holds
/// the index of the first such member (or `NaN`).
pub fn is_member(class: &SmoothClass, f: &BreakpointFunction) -> Result<Membership> {
    match class {
        SmoothClass::Gq { .. } | SmoothClass::Ginf => {
            let q = class
                .exponent()
                .ok_or(Error::UnsupportedClass("class without exponent"))?;
            if let Exponent::Finite(v) = q {
                if !(v > 1.0) {
                    return Err(Error::InvalidExponent(v));
                }
            }
            let action = f.q_action(q).value;
            Ok(Membership {
                member: action <= 1.0 + MEMBERSHIP_TOLERANCE,
                action,
            })
        }
        SmoothClass::Finite { members } => {
            let found = members.iter().position(|g| same_function(f, g, 1e-9));
            Ok(Membership {
                member: found.is_some(),
                action: found.map_or(f64::NAN, |i| i as f64),
            })
        }
        SmoothClass::Gqd { .. } => Err(Error::UnsupportedClass(
            "slice classes are checked through SeparableTentFunction",
        )),
        SmoothClass::TruncatedLinear { .. } => Err(Error::UnsupportedClass("truncated linear targets are vectors")),
    }
}

/// Two breakpoint functions are equal iff they agree on the union of their
/// breakpoints (both are linear in between and constant outside).
pub fn same_function(f: &BreakpointFunction, g: &BreakpointFunction, tol: f64) -> bool {
    f.breakpoints()
        .iter()
        .chain(g.breakpoints())
        .all(|&(u, _)| (f.evaluate(u) - g.evaluate(u)).abs() <= tol)
        && (f.evaluate(0.0) - g.evaluate(0.0)).abs() <= tol
}
