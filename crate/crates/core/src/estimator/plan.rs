use std::f64::consts::LOG2_E;

use serde::{Deserialize, Serialize};

use super::EstimatorError;

/// Trials per program so that, by the union/Chernoff bound over all
/// candidates, every estimate `m/k` is within a factor `1 +- epsilon` of its `q`
/// with probability at least `1 - alpha`:
///
/// ```text
/// k = ceil( 6 (2n - log2 alpha) / (epsilon^2 log2 e) )
/// ```
///
/// The bound's additive constant is taken as zero.
pub fn k_from_bound(n: usize, alpha: f64, epsilon: f64) -> Result<u64, EstimatorError> {
    k_from_bound_with_slack(n, alpha, epsilon, 0.0)
}

/// [`k_from_bound`] with an explicit additive constant `slack` (bits) added to `2n`.
pub fn k_from_bound_with_slack(
    n: usize,
    alpha: f64,
    epsilon: f64,
    slack: f64,
) -> Result<u64, EstimatorError> {
    check_params(n, alpha, epsilon)?;
    if !slack.is_finite() || slack < 0.0 {
        return Err(EstimatorError::InvalidParameter(format!(
            "slack must be >= 0, got {slack}"
        )));
    }
    let k = 6.0 * (2.0 * n as f64 + slack - alpha.log2()) / (epsilon * epsilon * LOG2_E);
    Ok(k.ceil().max(1.0) as u64)
}

fn check_params(n: usize, alpha: f64, epsilon: f64) -> Result<(), EstimatorError> {
    if n == 0 {
        return Err(EstimatorError::InvalidParameter(
            "n must be positive".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(EstimatorError::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(EstimatorError::InvalidParameter(format!(
            "epsilon must lie in (0, 1/2), got {epsilon}"
        )));
    }
    Ok(())
}

/// Error probability, relative accuracy and trial count of a sampled run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub alpha: f64,
    pub epsilon: f64,
    pub k: u64,
}

impl SamplingPlan {
    /// Plan with the smallest admissible `k`.
    pub fn new(n: usize, alpha: f64, epsilon: f64) -> Result<Self, EstimatorError> {
        Ok(Self {
            alpha,
            epsilon,
            k: k_from_bound(n, alpha, epsilon)?,
        })
    }

    /// Plan with a caller-chosen `k`, which must meet the bound.
    pub fn with_k(n: usize, alpha: f64, epsilon: f64, k: u64) -> Result<Self, EstimatorError> {
        let min = k_from_bound(n, alpha, epsilon)?;
        if k < min {
            return Err(EstimatorError::InvalidParameter(format!(
                "k = {k} is below the bound {min}"
            )));
        }
        Ok(Self { alpha, epsilon, k })
    }

    /// Plan that skips the bound check; for experiments that fix `k` directly.
    pub fn unchecked(alpha: f64, epsilon: f64, k: u64) -> Self {
        Self { alpha, epsilon, k }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_trial_counts() {
        // computed independently: ceil(6*(2n - log2 a)/(e^2 * log2(e)))
        assert_eq!(k_from_bound(4, 0.01, 0.25).unwrap(), 975);
        assert_eq!(k_from_bound(1, 0.5, 0.25).unwrap(), 200);
        assert_eq!(k_from_bound(2, 0.05, 0.25).unwrap(), 554);
        assert_eq!(k_from_bound(3, 0.1, 0.4).unwrap(), 243);
        assert_eq!(k_from_bound(1, 0.01, 0.1).unwrap(), 3595);
    }

    #[test]
    fn grows_with_n() {
        assert!(k_from_bound(4, 0.1, 0.25).unwrap() > k_from_bound(1, 0.1, 0.25).unwrap());
        assert!(
            k_from_bound_with_slack(2, 0.1, 0.25, 3.0).unwrap()
                > k_from_bound(2, 0.1, 0.25).unwrap()
        );
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(k_from_bound(2, 0.1, 0.6).is_err());
        assert!(k_from_bound(2, 0.1, 0.5).is_err());
        assert!(k_from_bound(2, 1.0, 0.25).is_err());
        assert!(k_from_bound(2, 0.0, 0.25).is_err());
        assert!(k_from_bound(2, f64::NAN, 0.25).is_err());
        assert!(k_from_bound(0, 0.1, 0.25).is_err());
        assert!(SamplingPlan::with_k(2, 0.05, 0.25, 553).is_err());
        assert_eq!(SamplingPlan::with_k(2, 0.05, 0.25, 600).unwrap().k, 600);
    }
}
