//! Monte Carlo verification of a predicted law.
//!
//! A verification runs three gates against one problem: the transform
//! factorization identity on the standard z grid, a Kolmogorov-Smirnov
//! test of simulated averages against the predicted distribution function,
//! and raw moment comparisons at Monte Carlo precision. The KS gate uses
//! the distribution-free Dvoretzky-Kiefer-Wolfowitz bound, so a pass is a
//! statement about the law itself, not about a fitted approximation.

use crate::dist::IntervalBeta;
use crate::error::{Error, Result};
use crate::rng;
use crate::rwa::{ast_product, predict_distribution, sample_rwa, RwaProblem, WeightPath};
use crate::transform::{ast_auto, z_grid};

/// One-sample KS statistic of sorted data against a distribution function.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    d
}

/// One-sample critical value at level alpha: sqrt(ln(2/alpha) / 2n).
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

/// Two-sample KS statistic; both inputs sorted.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> f64 {
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Two-sample critical value: sqrt(ln(2/alpha)/2) * sqrt((n + m) / (n m)).
pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = ((2.0 / alpha).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// One raw moment comparison: |sample mean of X^m - E X^m| next to the
/// Monte Carlo standard error of that mean.
#[derive(Debug, Clone, Copy)]
pub struct MomentCheck {
    pub order: u32,
    pub abs_error: f64,
    pub mc_std_error: f64,
}

/// Compare sample raw moments 1..=max_order against a law's exact moments.
pub fn moment_compare(xs: &[f64], law: &IntervalBeta, max_order: u32) -> Vec<MomentCheck> {
    let n = xs.len() as f64;
    (1..=max_order)
        .map(|order| {
            let pow = order as i32;
            let mean = xs.iter().map(|x| x.powi(pow)).sum::<f64>() / n;
            let var = xs.iter().map(|x| (x.powi(pow) - mean).powi(2)).sum::<f64>() / (n - 1.0);
            MomentCheck {
                order,
                abs_error: (mean - law.raw_moment(order)).abs(),
                mc_std_error: (var / n).sqrt(),
            }
        })
        .collect()
}

/// Gates and sample sizes for one verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub sample_count: usize,
    /// KS significance level; the critical value is distribution free.
    pub alpha: f64,
    /// Absolute tolerance for the transform identity on the z grid.
    pub z_tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            sample_count: 100_000,
            alpha: 1e-3,
            z_tolerance: 1e-8,
        }
    }
}

/// Everything one verification produced; `passed` folds all three gates.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub check_id: String,
    pub z_grid_max_abs_err: f64,
    pub ks_statistic: f64,
    pub ks_critical: f64,
    pub moment_errors: Vec<MomentCheck>,
    pub passed: bool,
    pub sample_count: usize,
    pub seed: u64,
}

/// Verify that the weighted average follows `expected` (or the predicted
/// law when `expected` is `None`): transform identity on the z grid, KS
/// test, and moments 1..=4 within five Monte Carlo standard errors. Draws
/// come from the substream named by `check_id`, so distinct checks never
/// share randomness.
pub fn verify_theorem(
    check_id: &str,
    problem: &RwaProblem,
    path: WeightPath,
    expected: Option<IntervalBeta>,
    config: &VerifyConfig,
    seed: u64,
) -> Result<VerificationReport> {
    let law = match expected {
        Some(law) => law,
        None => {
            predict_distribution(problem)
                .ok_or_else(|| {
                    Error::Domain(format!(
                        "no closed-form law applies to {check_id}; pass one explicitly"
                    ))
                })?
                .law
        }
    };
    let order = problem.order_total();
    let radius = problem
        .inputs()
        .iter()
        .map(IntervalBeta::support_radius)
        .fold(law.support_radius(), f64::max);
    let mut z_grid_max_abs_err = 0.0f64;
    for z in z_grid(radius) {
        let lhs = ast_product(problem, z)?;
        let rhs = ast_auto(&law, order, z)?.value;
        z_grid_max_abs_err = z_grid_max_abs_err.max((lhs - rhs).abs());
    }

    let mut rng = rng::substream(seed, check_id);
    let mut xs = sample_rwa(problem, path, &mut rng, config.sample_count)?;
    xs.sort_unstable_by(f64::total_cmp);
    let ks = ks_statistic(&xs, |x| law.cdf(x));
    let crit = ks_critical(xs.len(), config.alpha);
    let moment_errors = moment_compare(&xs, &law, 4);
    let moments_ok = moment_errors
        .iter()
        .all(|m| m.abs_error <= 5.0 * m.mc_std_error);

    let passed = z_grid_max_abs_err <= config.z_tolerance && ks <= crit && moments_ok;
    Ok(VerificationReport {
        check_id: check_id.to_owned(),
        z_grid_max_abs_err,
        ks_statistic: ks,
        ks_critical: crit,
        moment_errors,
        passed,
        sample_count: xs.len(),
        seed,
    })
}
