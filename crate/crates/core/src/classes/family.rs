//! Named finite families and the two-member separation value `m`.
//!
//! The families separate the radius-restricted game (adversary must stay
//! near past inputs) from the free-guess game (far inputs are unscored):
//!
//! * [`f_eps`]: three functions with a gap `1 + 2^{-p}` vs `1 + eps^p`;
//! * [`f_n_eps`]: `n = 2^k` functions encoding the bits of their index, with
//!   a gap `k` vs `1 + (n eps)^p`;
//! * [`g_n_eps`]: `n` functions with a gap
//!   `c = (n-1) / ((1 + (n-1)^{1/p}) / 2)^p` vs `1 + (n eps)^p`.

use alloc::vec::Vec;

use crate::math;
use crate::pwl::BreakpointFunction;
use crate::{Error, Result};

fn member(points: Vec<(f64, f64)>) -> BreakpointFunction {
    BreakpointFunction::from_unsorted(points).expect("family point sets have distinct coordinates")
}

/// The three-member family `F_eps`.
pub fn f_eps(eps: f64) -> Result<Vec<BreakpointFunction>> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::param("eps", "must be positive"));
    }
    Ok(alloc::vec![
        member(alloc::vec![(1.0, 1.0), (2.0, 0.0), (3.0, -eps), (4.0, 0.0), (5.0, 1.0)]),
        member(alloc::vec![(1.0, 1.0), (2.0, 0.0), (3.0, 0.0), (4.0, 0.0), (5.0, -1.0)]),
        member(alloc::vec![
            (1.0, -1.0),
            (2.0, 0.0),
            (3.0, eps),
            (4.0, 0.0),
            (5.0, -1.0)
        ]),
    ])
}

/// `k = log2 n` for a power of two `n >= 2`.
pub fn log2_exact(n: usize) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::param("n", "must be a power of two, at least 2"));
    }
    Ok(n.trailing_zeros())
}

/// The bit label `(-1)^{floor(i / 2^j)}` shared by `S_{i,eps}` and the
/// adversary that reveals it.
pub fn bit_label(i: usize, j: u32) -> f64 {
    if (i >> j) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The family `F_{n,eps}` of the `n = 2^k` functions `f_{S_{i,eps}}`,
/// `i = 0..n`.
pub fn f_n_eps(n: usize, eps: f64) -> Result<Vec<BreakpointFunction>> {
    let k = log2_exact(n)?;
    if !(eps > 0.0) {
        return Err(Error::param("eps", "must be positive"));
    }
    Ok((0..n)
        .map(|i| {
            let mut pts = Vec::with_capacity(4 * k as usize);
            for j in 0..k {
                let base = 4.0 * f64::from(j);
                pts.push((base, 0.0));
                pts.push((base + 1.0, i as f64 * eps));
                pts.push((base + 2.0, 0.0));
                pts.push((base + 3.0, bit_label(i, j)));
            }
            member(pts)
        })
        .collect())
}

/// The family `G_{n,eps}` of the functions `f_{T_{i,eps}}`, `i = 1..=n`
/// (index `i - 1` in the returned vector).
pub fn g_n_eps(n: usize, eps: f64) -> Result<Vec<BreakpointFunction>> {
    if n < 2 {
        return Err(Error::param("n", "need at least two members"));
    }
    if !(eps > 0.0) {
        return Err(Error::param("eps", "must be positive"));
    }
    Ok((1..=n)
        .map(|i| {
            let mut pts: Vec<(f64, f64)> = (0..=2 * n).map(|j| (2.0 * j as f64, 0.0)).collect();
            for j in 1..=n {
                let jf = j as f64;
                pts.push((4.0 * jf - 3.0, i as f64 * eps));
                pts.push((4.0 * jf - 1.0, if j == i { 1.0 } else { -1.0 }));
            }
            member(pts)
        })
        .collect())
}

/// The threshold `c = (n - 1) / ((1 + (n - 1)^{1/p}) / 2)^p` forced by the
/// free-guess adversary on `G_{n,eps}`.
pub fn g_n_constant(n: usize, p: f64) -> f64 {
    let m = (n - 1) as f64;
    m / math::powf((1.0 + math::powf(m, 1.0 / p)) / 2.0, p)
}

/// Result of [`family_m_value`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MValue {
    /// `sup |f1 - f2|` over points within distance 1 of an agreement point.
    pub m: f64,
    /// A point attaining `m` (absent when the functions never agree).
    pub argmax: Option<f64>,
    /// An agreement point within distance 1 of `argmax`.
    pub anchor: Option<f64>,
}

/// Closed interval with possibly infinite ends.
#[derive(Debug, Clone, Copy)]
struct Span {
    lo: f64,
    hi: f64,
}

/// Agreement set `{x : f1(x) = f2(x)}` as disjoint closed components,
/// computed from the roots of the piecewise-linear difference.
fn agreement_components(d: &BreakpointFunction) -> Vec<Span> {
    let pts = d.breakpoints();
    let mut comps: Vec<Span> = Vec::new();
    let mut push = |lo: f64, hi: f64| match comps.last_mut() {
        Some(last) if lo <= last.hi => last.hi = last.hi.max(hi),
        _ => comps.push(Span { lo, hi }),
    };
    let Some(&(u_first, v_first)) = pts.first() else {
        push(f64::NEG_INFINITY, f64::INFINITY);
        return comps;
    };
    if v_first == 0.0 {
        push(f64::NEG_INFINITY, u_first);
    }
    for w in pts.windows(2) {
        let ((a, da), (b, db)) = (w[0], w[1]);
        match (da == 0.0, db == 0.0) {
            (true, true) => push(a, b),
            (true, false) => push(a, a),
            (false, true) => push(b, b),
            (false, false) if (da < 0.0) != (db < 0.0) => {
                let root = a + (b - a) * da / (da - db);
                push(root, root);
            }
            _ => {}
        }
    }
    let (u_last, v_last) = pts[pts.len() - 1];
    if v_last == 0.0 {
        push(u_last, f64::INFINITY);
    }
    comps
}

/// The separation value `m` of a two-member family.
///
/// Computed exactly: the agreement set of `f1` and `f2` is a finite union of
/// points and intervals, its 1-neighbourhood `S` is a finite union of
/// intervals, and `|f1 - f2|` is piecewise linear, so its supremum over `S`
/// is attained at a breakpoint of the difference or at an endpoint of a
/// component of `S`.
pub fn family_m_value(f1: &BreakpointFunction, f2: &BreakpointFunction) -> MValue {
    let d = f1.difference(f2);
    let zeros = agreement_components(&d);
    if zeros.is_empty() {
        return MValue {
            m: 0.0,
            argmax: None,
            anchor: None,
        };
    }
    let mut best = MValue {
        m: -1.0,
        argmax: None,
        anchor: None,
    };
    let mut consider = |x: f64, zero: &Span| {
        if !x.is_finite() {
            return;
        }
        let v = d.evaluate(x).abs();
        if v > best.m {
            best = MValue {
                m: v,
                argmax: Some(x),
                anchor: Some(x.clamp(zero.lo, zero.hi)),
            };
        }
    };
    for zero in &zeros {
        let lo = zero.lo - 1.0;
        let hi = zero.hi + 1.0;
        consider(lo, zero);
        consider(hi, zero);
        for &(u, _) in d.breakpoints() {
            if u >= lo && u <= hi {
                consider(u, zero);
            }
        }
        if d.is_empty() {
            // Both functions vanish identically.
            consider(0.0, zero);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(points: &[(f64, f64)]) -> BreakpointFunction {
        BreakpointFunction::new(points.to_vec()).unwrap()
    }

    /// Independent oracle: agreement points and the sup on a dense grid.
    fn grid_m(f1: &BreakpointFunction, f2: &BreakpointFunction, lo: f64, hi: f64, step: f64) -> f64 {
        let n = ((hi - lo) / step) as usize;
        let xs: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
        let diff: Vec<f64> = xs.iter().map(|&x| f1.evaluate(x) - f2.evaluate(x)).collect();
        // Agreement points: exact zeros, plus linear roots inside sign changes.
        let mut zeros = Vec::new();
        for i in 0..xs.len() {
            if diff[i] == 0.0 {
                zeros.push(xs[i]);
            } else if i + 1 < xs.len() && diff[i + 1] != 0.0 && (diff[i] < 0.0) != (diff[i + 1] < 0.0) {
                zeros.push(xs[i] - diff[i] * step / (diff[i + 1] - diff[i]));
            }
        }
        let mut m = 0.0f64;
        let mut j = 0;
        for (i, &x) in xs.iter().enumerate() {
            while j + 1 < zeros.len() && zeros[j + 1] <= x {
                j += 1;
            }
            let near = [j, j + 1]
                .iter()
                .any(|&k| zeros.get(k).is_some_and(|&z| (x - z).abs() <= 1.0 + 1e-12));
            if near {
                m = m.max(diff[i].abs());
            }
        }
        m
    }

    #[test]
    fn identical_functions_give_zero() {
        let f = bf(&[(0.0, 1.0), (3.0, -2.0)]);
        assert_eq!(family_m_value(&f, &f).m, 0.0);
        assert_eq!(
            family_m_value(&BreakpointFunction::empty(), &BreakpointFunction::empty()).m,
            0.0
        );
    }

    #[test]
    fn ramp_versus_zero() {
        let f1 = bf(&[(0.0, 0.0), (1.0, 1.0)]);
        let f2 = bf(&[(0.0, 0.0)]);
        let mv = family_m_value(&f1, &f2);
        assert_eq!(mv.m, 1.0);
        assert_eq!(mv.argmax, Some(1.0));
        assert_eq!(mv.anchor, Some(0.0));
        assert!((grid_m(&f1, &f2, -3.0, 4.0, 1e-4) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn f_eps_members_one_and_three() {
        let fam = f_eps(0.01).unwrap();
        let mv = family_m_value(&fam[0], &fam[2]);
        assert_eq!(mv.m, 2.0);
        assert!((grid_m(&fam[0], &fam[2], 0.0, 6.0, 1e-4) - 2.0).abs() < 1e-6);
        let x = mv.argmax.unwrap();
        let a = mv.anchor.unwrap();
        assert!((x - a).abs() <= 1.0);
        assert_eq!(fam[0].evaluate(a), fam[2].evaluate(a));
    }

    #[test]
    fn never_agreeing_functions() {
        let mv = family_m_value(&bf(&[(0.0, 1.0)]), &bf(&[(0.0, 2.0), (5.0, 3.0)]));
        assert_eq!(
            mv,
            MValue {
                m: 0.0,
                argmax: None,
                anchor: None
            }
        );
    }

    #[test]
    fn family_shapes() {
        let f = f_n_eps(8, 0.01).unwrap();
        assert_eq!(f.len(), 8);
        // Member 5 = 0b101: bits give labels -1, +1, -1 at x = 3, 7, 11.
        assert_eq!(f[5].evaluate(3.0), -1.0);
        assert_eq!(f[5].evaluate(7.0), 1.0);
        assert_eq!(f[5].evaluate(11.0), -1.0);
        assert_eq!(f[5].evaluate(1.0), 0.05);
        for g in &f {
            assert_eq!(g.evaluate(6.0), 0.0);
        }
        assert!(f_n_eps(6, 0.01).is_err());

        let g = g_n_eps(5, 0.01).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[1].evaluate(7.0), 1.0);
        assert_eq!(g[1].evaluate(3.0), -1.0);
        assert_eq!(g[1].evaluate(5.0), 0.02);
        assert_eq!(g[4].evaluate(20.0), 0.0);
        assert!((g_n_constant(5, 2.0) - 16.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn m_value_on_named_family_pairs_matches_grid() {
        let fam = f_n_eps(4, 0.05).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let exact = family_m_value(&fam[i], &fam[j]).m;
                let grid = grid_m(&fam[i], &fam[j], -2.0, 12.0, 1e-3);
                assert!((exact - grid).abs() < 1e-6, "pair ({i},{j}): {exact} vs {grid}");
            }
        }
    }
}
