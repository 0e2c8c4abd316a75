use alloc::vec::Vec;

use super::Learner;
use crate::{Error, Point, Result};

/// Learner for truncated linear targets `g_v`.
///
/// It keeps a basis of linearly independent past inputs whose labels were
/// nonzero. A query inside their span with coefficients `c` is answered by
/// `s = sum c_j y_j` when `|s| <= r` and 0 otherwise; a query outside the
/// span is answered by 0. Span membership is decided by a least-squares
/// solve with relative residual at most `1e-9`.
#[derive(Debug, Clone)]
pub struct SpanLearner {
    r: f64,
    basis: Vec<(Point, f64)>,
}

const SPAN_TOLERANCE: f64 = 1e-9;

impl SpanLearner {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::param("r", "truncation level must be positive"));
        }
        Ok(Self { r, basis: Vec::new() })
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Coefficients expressing `x` in the basis, if it lies in their span.
    fn coefficients(&self, x: &[f64]) -> Option<Vec<f64>> {
        let k = self.basis.len();
        let norm_x = x.iter().map(|v| v * v).sum::<f64>();
        if k == 0 {
            return (norm_x == 0.0).then(Vec::new);
        }
        // Normal equations G c = B^T x with G = B^T B.
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
        let mut m: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let mut row: Vec<f64> = (0..k).map(|j| dot(&self.basis[i].0, &self.basis[j].0)).collect();
                row.push(dot(&self.basis[i].0, x));
                row
            })
            .collect();
        let c = solve(&mut m)?;
        let residual: f64 = (0..x.len())
            .map(|d| {
                let fit: f64 = c.iter().zip(&self.basis).map(|(cj, (b, _))| cj * b[d]).sum();
                (fit - x[d]) * (fit - x[d])
            })
            .sum();
        (residual <= SPAN_TOLERANCE * SPAN_TOLERANCE * norm_x.max(f64::MIN_POSITIVE)).then_some(c)
    }
}

/// Gaussian elimination with partial pivoting on an augmented `k x (k+1)`
/// matrix.
#[allow(clippy::needless_range_loop)]
fn solve(m: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col] == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        for row in (col + 1)..k {
            let f = m[row][col] / m[col][col];
            for j in col..=k {
                m[row][j] -= f * m[col][j];
            }
        }
    }
    let mut c = alloc::vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|j| m[i][j] * c[j]).sum();
        c[i] = (m[i][k] - s) / m[i][i];
    }
    Some(c)
}

impl Learner for SpanLearner {
    fn name(&self) -> &str {
        "span"
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        let Some(c) = self.coefficients(x) else {
            return Ok(0.0);
        };
        let s: f64 = c.iter().zip(&self.basis).map(|(cj, (_, y))| cj * y).sum();
        Ok(if s.abs() <= self.r { s } else { 0.0 })
    }

    fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        if let Some((b, _)) = self.basis.first() {
            if b.len() != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: b.len(),
                    got: x.len(),
                });
            }
        }
        if y != 0.0 && self.coefficients(x).is_none() {
            self.basis.push((x.to_vec(), y));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let mut l = SpanLearner::new(1.0).unwrap();
        assert_eq!(l.predict(&[1.0, 0.0]).unwrap(), 0.0);
        l.observe(&[1.0, 0.0], 0.4).unwrap();
        assert!((l.predict(&[2.0, 0.0]).unwrap() - 0.8).abs() < 1e-15);
        let mut l = SpanLearner::new(1.0).unwrap();
        l.observe(&[1.0, 0.0], 0.8).unwrap();
        assert_eq!(l.predict(&[2.0, 0.0]).unwrap(), 0.0);
        assert_eq!(l.predict(&[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn zero_labels_and_dependent_inputs_do_not_grow_the_basis() {
        let mut l = SpanLearner::new(10.0).unwrap();
        l.observe(&[0.0, 0.0, 0.0], 0.0).unwrap();
        l.observe(&[1.0, 1.0, 0.0], 0.0).unwrap();
        assert_eq!(l.basis_len(), 0);
        l.observe(&[1.0, 2.0, 0.0], 1.0).unwrap();
        l.observe(&[0.0, 1.0, 1.0], 2.0).unwrap();
        l.observe(&[1.0, 3.0, 1.0], 3.0).unwrap();
        assert_eq!(l.basis_len(), 2);
        // (2, 5, 1) = 2 (1,2,0) + (0,1,1): prediction 2*1 + 2 = 4.
        assert!((l.predict(&[2.0, 5.0, 1.0]).unwrap() - 4.0).abs() < 1e-12);
        assert!(l.observe(&[1.0], 1.0).is_err());
    }
}
