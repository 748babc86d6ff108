//! Aggregation of Monte Carlo results.
//!
//! Means are computed over value lists sorted by `total_cmp` first, so the
//! floating-point sum (and therefore every reported aggregate) is invariant
//! under permutation of the realizations. That makes parallel execution
//! order irrelevant to the output bytes.

use super::runner::RealizationResult;

/// Sample statistics of one (axis value, scheme) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    /// Realizations aggregated.
    pub count: usize,
    /// Mean sum rate over the horizon (bit/s/Hz summed across slots).
    pub mean_sum_rate: f64,
    /// Sample standard deviation of the sum rate.
    pub sd_sum_rate: f64,
    /// Mean per-slot rate (sum rate divided by the horizon).
    pub mean_rate_per_slot: f64,
    /// Mean of the per-realization system average age.
    pub mean_system_aoi: f64,
    /// Sample standard deviation of the system average age.
    pub sd_system_aoi: f64,
    /// Fraction of realizations whose schedule met every enforced limit.
    pub feasible_fraction: f64,
    /// Mean optimizer iteration count across users and realizations.
    pub mean_bcd_iters: f64,
    /// Per-user mean average age across realizations (index = user).
    pub mean_per_ue_aoi: Vec<f64>,
}

/// Permutation-invariant arithmetic mean.
pub fn stable_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum::<f64>() / sorted.len() as f64
}

/// Permutation-invariant sample standard deviation (n - 1 denominator);
/// zero when fewer than two values.
pub fn stable_sd(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mut squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    squares.sort_by(f64::total_cmp);
    (squares.iter().sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Aggregates a non-empty batch of realizations into cell statistics.
///
/// # Panics
/// Panics if `results` is empty or the realizations disagree on the user
/// count.
pub fn monte_carlo_mean(results: &[RealizationResult]) -> Aggregate {
    assert!(!results.is_empty(), "cannot aggregate zero realizations");
    let k_ues = results[0].per_ue_aoi.len();
    for r in results {
        assert_eq!(r.per_ue_aoi.len(), k_ues, "mixed user counts in one cell");
    }

    let sum_rates: Vec<f64> = results.iter().map(|r| r.sum_rate).collect();
    let per_slot: Vec<f64> = results.iter().map(|r| r.rate_per_slot).collect();
    let system_aoi: Vec<f64> = results.iter().map(|r| r.system_aoi).collect();
    let feasible: Vec<f64> = results
        .iter()
        .map(|r| if r.feasible { 1.0 } else { 0.0 })
        .collect();
    let iters: Vec<f64> = results
        .iter()
        .flat_map(|r| r.bcd_iterations.iter().map(|&i| i as f64))
        .collect();
    let mean_per_ue_aoi: Vec<f64> = (0..k_ues)
        .map(|k| {
            let vals: Vec<f64> = results.iter().map(|r| r.per_ue_aoi[k]).collect();
            stable_mean(&vals)
        })
        .collect();

    let mean_sum_rate = stable_mean(&sum_rates);
    let mean_system_aoi = stable_mean(&system_aoi);
    Aggregate {
        count: results.len(),
        mean_sum_rate,
        sd_sum_rate: stable_sd(&sum_rates, mean_sum_rate),
        mean_rate_per_slot: stable_mean(&per_slot),
        mean_system_aoi,
        sd_system_aoi: stable_sd(&system_aoi, mean_system_aoi),
        feasible_fraction: stable_mean(&feasible),
        mean_bcd_iters: stable_mean(&iters),
        mean_per_ue_aoi,
    }
}

/// Least-squares line fit: returns `(slope, intercept, r_squared)`.
/// `r_squared` is 1 when the points are perfectly collinear and is defined
/// as 1 when the y values are all identical (zero total variance).
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    assert!(points.len() >= 2, "need at least two points to fit a line");
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    assert!(sxx > 0.0, "x values must not be all identical");
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r_squared)
}
