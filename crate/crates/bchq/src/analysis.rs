//! Geometric-decay fits for coefficient sequences: ordinary least squares on
//! log(v_n * n^(3/2)) against n, with residual-bootstrap confidence
//! intervals. The polynomial correction exponent defaults to -3/2 but is a
//! parameter, since the data range is too short to pin it down.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_CORRECTION_EXPONENT: f64 = -1.5;
pub const DEFAULT_BOOTSTRAP_ITERATIONS: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct FitResult {
    /// Fitted geometric factor per degree.
    pub rate: f64,
    /// 95% percentile bootstrap interval for the rate.
    pub rate_ci: (f64, f64),
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_range: (u32, u32),
    pub bootstrap_iterations: usize,
    pub seed: u64,
    /// Polynomial correction exponent used in the transform.
    pub exponent: f64,
    pub points: usize,
}

/// Fits v_n ~ prefactor * n^exponent * rate^n over n in [n_min, n_max] by
/// regressing y_n = log(v_n) - exponent*log(n) on n. The bootstrap resamples
/// regression residuals (fixed design), `bootstrap` iterations, 95%
/// percentile interval.
pub fn fit_geometric(
    values: &[(u32, f64)],
    exponent: f64,
    n_min: u32,
    n_max: u32,
    bootstrap: usize,
    seed: u64,
) -> Result<FitResult> {
    if n_max < n_min + 3 {
        return Err(Error::InvalidArgument(format!(
            "degenerate fit range [{n_min}, {n_max}]: need n_max - n_min >= 3"
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (n, v) in values {
        if *n < n_min || *n > n_max {
            continue;
        }
        if !v.is_finite() || *v <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "fit requires positive values, got {v} at n = {n}"
            )));
        }
        xs.push(*n as f64);
        ys.push(v.ln() - exponent * (*n as f64).ln());
    }
    if xs.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "fit range [{n_min}, {n_max}] covers only {} points, need at least 4",
            xs.len()
        )));
    }

    let (slope, intercept) = ols(&xs, &ys);
    let fitted: Vec<f64> = xs.iter().map(|x| intercept + slope * x).collect();
    let residuals: Vec<f64> = ys.iter().zip(&fitted).map(|(y, f)| y - f).collect();

    let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };

    let rate = slope.exp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boot_rates = Vec::with_capacity(bootstrap);
    for _ in 0..bootstrap {
        let perturbed: Vec<f64> = fitted
            .iter()
            .map(|f| f + residuals[rng.random_range(0..residuals.len())])
            .collect();
        let (s, _) = ols(&xs, &perturbed);
        boot_rates.push(s.exp());
    }
    let rate_ci = if boot_rates.is_empty() {
        (rate, rate)
    } else {
        boot_rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lo = boot_rates[((boot_rates.len() as f64 - 1.0) * 0.025).round() as usize];
        let hi = boot_rates[((boot_rates.len() as f64 - 1.0) * 0.975).round() as usize];
        // the percentile interval always reports around the point estimate
        (lo.min(rate), hi.max(rate))
    };

    Ok(FitResult {
        rate,
        rate_ci,
        prefactor: intercept.exp(),
        r_squared,
        n_range: (n_min, n_max),
        bootstrap_iterations: bootstrap,
        seed,
        exponent,
        points: xs.len(),
    })
}

fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Effective radius 1/rate of a fitted geometric decay.
pub fn effective_radius(rate: f64) -> Result<f64> {
    if rate.is_nan() || rate <= 0.0 {
        return Err(Error::InvalidArgument(format!("rate must be positive, got {rate}")));
    }
    Ok(1.0 / rate)
}
