use crate::{Error, Result};

/// `g_v(x) = v . x` when `|v . x| <= r`, else 0.
pub fn truncated_linear_evaluate(v: &[f64], x: &[f64], r: f64) -> Result<f64> {
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: x.len(),
        });
    }
    let dot: f64 = v.iter().zip(x).map(|(a, b)| a * b).sum();
    Ok(if dot.abs() <= r { dot } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(truncated_linear_evaluate(&[1.0, 0.0], &[0.5, 9.0], 1.0).unwrap(), 0.5);
        assert_eq!(truncated_linear_evaluate(&[3.0, 0.0], &[1.0, 0.0], 1.0).unwrap(), 0.0);
        assert_eq!(
            truncated_linear_evaluate(&[0.0; 3], &[4.0, -2.0, 7.0], 0.1).unwrap(),
            0.0
        );
        assert_eq!(truncated_linear_evaluate(&[1.0], &[-1.0], 1.0).unwrap(), -1.0);
        assert!(truncated_linear_evaluate(&[1.0], &[1.0, 2.0], 1.0).is_err());
    }
}
