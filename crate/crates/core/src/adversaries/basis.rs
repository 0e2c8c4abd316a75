use alloc::vec::Vec;

use super::{farther_of, Adversary, Certificate};
use crate::{math, Error, Point, Result};

/// Basis probes for truncated linear classes on `R^n`.
///
/// Round 0 asks the zero vector (label 0); round `i = 1..=n` asks `eps e_i`
/// and reveals `+r` or `-r`, whichever is farther from the guess. Every
/// scored round costs at least `r^p`. The labels are those of `g_v` with
/// `v_i = label_i / eps`, since `|v . eps e_i| = r`.
#[derive(Debug, Clone)]
pub struct BasisAdversary {
    n: usize,
    r: f64,
    eps: f64,
    labels: Vec<f64>,
}

impl BasisAdversary {
    /// `eps = 1` gives the unweighted construction on the unit vectors.
    pub fn new(n: usize, r: f64, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "dimension must be at least 1"));
        }
        if !(r > 0.0) || !(eps > 0.0) {
            return Err(Error::param("r, eps", "must be positive"));
        }
        Ok(Self {
            n,
            r,
            eps,
            labels: Vec::new(),
        })
    }

    /// `n r^p`.
    pub fn forced_loss(&self, p: f64) -> f64 {
        self.n as f64 * math::powf(self.r, p)
    }
}

impl Adversary for BasisAdversary {
    fn name(&self) -> &str {
        "basis"
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn next_input(&mut self, t: usize) -> Result<Option<Point>> {
        if t > self.n {
            return Ok(None);
        }
        let mut x = alloc::vec![0.0; self.n];
        if t > 0 {
            x[t - 1] = self.eps;
        }
        Ok(Some(x))
    }

    fn reveal(&mut self, t: usize, _x: &[f64], y_hat: f64) -> Result<f64> {
        if t == 0 {
            return Ok(0.0);
        }
        let y = farther_of(y_hat, self.r, -self.r);
        self.labels.push(y);
        Ok(y)
    }

    fn certificate(&self) -> Certificate {
        let mut v: Vec<f64> = self.labels.iter().map(|y| y / self.eps).collect();
        v.resize(self.n, 0.0);
        Certificate::TruncatedLinear { v, r: self.r }
    }
}
