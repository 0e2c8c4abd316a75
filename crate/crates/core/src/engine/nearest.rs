use alloc::vec::Vec;

use crate::math;
use crate::Point;

/// Nearest-earlier-input distances.
///
/// On the line the inputs are kept sorted and a query is a binary search;
/// in higher dimension a linear scan is used (games there are short).
#[derive(Debug, Clone, Default)]
pub struct NearestIndex {
    dimension: usize,
    sorted: Vec<f64>,
    points: Vec<Point>,
}

impl NearestIndex {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            sorted: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        if self.dimension == 1 {
            self.sorted.len()
        } else {
            self.points.len()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Euclidean distance from `x` to the closest stored input, `None` when
    /// the index is empty.
    pub fn nearest_distance(&self, x: &[f64]) -> Option<f64> {
        if self.dimension == 1 {
            let v = x[0];
            let i = self.sorted.partition_point(|&u| u < v);
            let right = self.sorted.get(i).map(|&u| u - v);
            let left = i.checked_sub(1).map(|j| v - self.sorted[j]);
            match (left, right) {
                (Some(l), Some(r)) => Some(l.min(r)),
                (l, r) => l.or(r),
            }
        } else {
            self.points.iter().map(|p| distance(p, x)).reduce(f64::min)
        }
    }

    pub fn insert(&mut self, x: &[f64]) {
        if self.dimension == 1 {
            let i = self.sorted.partition_point(|&u| u < x[0]);
            self.sorted.insert(i, x[0]);
        } else {
            self.points.push(x.to_vec());
        }
    }
}

/// Euclidean distance.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    math::sqrt(a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_queries_match_scan() {
        let mut idx = NearestIndex::new(1);
        let xs = [3.0, -1.0, 10.0, 0.5, 0.5, 7.25];
        let mut seen: Vec<f64> = Vec::new();
        assert_eq!(idx.nearest_distance(&[0.0]), None);
        for &x in &xs {
            let scan = seen.iter().map(|u| (u - x).abs()).reduce(f64::min);
            assert_eq!(idx.nearest_distance(&[x]), scan);
            idx.insert(&[x]);
            seen.push(x);
        }
        assert_eq!(idx.nearest_distance(&[0.5]), Some(0.0));
        assert_eq!(idx.nearest_distance(&[100.0]), Some(90.0));
    }

    #[test]
    fn euclidean_in_two_dimensions() {
        let mut idx = NearestIndex::new(2);
        idx.insert(&[0.0, 0.0]);
        idx.insert(&[3.0, 4.0]);
        assert_eq!(idx.nearest_distance(&[3.0, 0.0]), Some(3.0));
        assert_eq!(idx.nearest_distance(&[6.0, 8.0]), Some(5.0));
    }
}
