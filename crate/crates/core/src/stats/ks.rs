use super::model::FitResult;
use super::sample::Sample;
use crate::error::{Error, Result};

/// Gap between the empirical CDF of `sorted` and `cdf` at point `i`,
/// checked on both edges of the empirical step.
#[inline]
fn gap(i: usize, total: f64, f: f64) -> f64 {
    let below = i as f64 / total;
    let above = (i + 1) as f64 / total;
    (above - f).max(f - below)
}

/// Two-sided KS distance of an ascending sample against a CDF.
pub fn ks_distance_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let total = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| gap(i, total, cdf(x)))
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0)
}

/// KS distance, or `None` as soon as it is known to be `>= limit`.
///
/// A strided pass runs first: its maximum is a lower bound on the full
/// distance, so most hopeless candidates are rejected after a few dozen
/// CDF evaluations.
pub(crate) fn ks_distance_below(sorted: &[f64], cdf: impl Fn(f64) -> f64, limit: f64) -> Option<f64> {
    let total = sorted.len() as f64;
    let stride = (sorted.len() / 64).max(1);
    if stride > 1 {
        for i in (0..sorted.len()).step_by(stride) {
            if gap(i, total, cdf(sorted[i])) >= limit {
                return None;
            }
        }
    }
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        d = d.max(gap(i, total, cdf(x)));
        if d >= limit {
            return None;
        }
    }
    Some(d.clamp(0.0, 1.0))
}

/// KS distance between the points of `sample` at or above the fit's lower
/// bound and the fitted model conditioned on that tail.
pub fn ks_distance(sample: &Sample, fit: &FitResult) -> Result<f64> {
    let tail = sample.tail(fit.lower_bound);
    if tail.is_empty() {
        return Err(Error::InsufficientData(
            "no sample points at or above the lower bound".into(),
        ));
    }
    let at_bound = fit.ccdf(fit.lower_bound)?;
    let total = tail.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in tail.iter().enumerate() {
        let f = (1.0 - fit.ccdf(x)? / at_bound).clamp(0.0, 1.0);
        d = d.max(gap(i, total, f));
    }
    Ok(d.clamp(0.0, 1.0))
}

/// KS distance of raw values against the uniform law on `[0, range_max)`.
pub fn uniformity_ks(values: &[f64], range_max: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    if !(range_max > 0.0) {
        return Err(Error::invalid("range_max must be positive"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(ks_distance_sorted(&sorted, |x| (x / range_max).clamp(0.0, 1.0)))
}
