//! Maximum-likelihood fitters with KS-selected lower bounds.

use std::f64::consts::PI;

use super::gamma::upper_gamma_scaled;
use super::ks::{ks_distance_below, ks_distance_sorted};
use super::model::{cutoff_log_norm, model_pdf, FitResult, ModelKind, ModelParams};
use super::optimize::{nelder_mead, NelderMeadOptions};
use super::sample::Sample;
use crate::error::{Error, Result};

/// Smallest tail a candidate lower bound may leave.
pub const TAIL_MIN: usize = 50;

/// Suffix sums over an ascending sample: `sum_log[i] = sum_{j >= i} ln v_j`.
struct TailSums<'a> {
    values: &'a [f64],
    sum_log: Vec<f64>,
    sum: Vec<f64>,
}

impl<'a> TailSums<'a> {
    fn new(values: &'a [f64]) -> Self {
        let n = values.len();
        let mut sum_log = vec![0.0; n + 1];
        let mut sum = vec![0.0; n + 1];
        for i in (0..n).rev() {
            sum_log[i] = sum_log[i + 1] + values[i].ln();
            sum[i] = sum[i + 1] + values[i];
        }
        Self { values, sum_log, sum }
    }

    fn count(&self, start: usize) -> usize {
        self.values.len() - start
    }
}

/// Start indices of candidate lower bounds: each distinct value that keeps
/// at least `tail_min` points at or above it.
fn candidate_starts(values: &[f64], tail_min: usize) -> Vec<usize> {
    (0..values.len())
        .filter(|&i| values.len() - i >= tail_min && (i == 0 || values[i] != values[i - 1]))
        .collect()
}

struct Candidate {
    params: ModelParams,
    log_likelihood: f64,
}

/// Fast tail-conditional CDF for the KS scan; all bounded models have unit
/// CCDF at the lower bound, so no renormalization is needed.
fn tail_cdf(params: ModelParams, lb: f64) -> impl Fn(f64) -> f64 {
    let cutoff_norm = match params {
        ModelParams::PowerLawCutoff { alpha_c, lambda_c } => upper_gamma_scaled(1.0 - alpha_c, lambda_c * lb),
        _ => 1.0,
    };
    move |x: f64| {
        let ccdf = match params {
            ModelParams::PowerLaw { alpha } => (x / lb).powf(1.0 - alpha),
            ModelParams::PowerLawCutoff { alpha_c, lambda_c } => {
                let s = 1.0 - alpha_c;
                (x / lb).powf(s) * upper_gamma_scaled(s, lambda_c * x) / cutoff_norm
            }
            ModelParams::Exponential { lambda_e } => (-lambda_e * (x - lb)).exp(),
            ModelParams::LogNormal { .. } => unreachable!("log-normal is not scanned"),
        };
        (1.0 - ccdf).clamp(0.0, 1.0)
    }
}

/// Runs `fit_at` on every candidate bound and keeps the smallest KS
/// distance (ties go to the smaller bound). With `keep_all`, returns every
/// candidate's result instead.
fn scan(
    sample: &Sample,
    tail_min: usize,
    keep_all: bool,
    mut fit_at: impl FnMut(&TailSums, usize) -> Result<Option<Candidate>>,
) -> Result<Vec<FitResult>> {
    let values = sample.values();
    let starts = candidate_starts(values, tail_min.max(1));
    if starts.is_empty() {
        return Err(Error::InsufficientData(format!(
            "need at least {tail_min} positive values above a candidate bound, have {}",
            values.len()
        )));
    }
    let sums = TailSums::new(values);
    let mut results: Vec<FitResult> = Vec::new();
    let mut best_d = f64::INFINITY;
    let mut any_valid = false;
    for &start in &starts {
        let Some(cand) = fit_at(&sums, start)? else {
            continue;
        };
        any_valid = true;
        let lb = values[start];
        let tail = &values[start..];
        let cdf = tail_cdf(cand.params, lb);
        let d = if keep_all {
            Some(ks_distance_sorted(tail, cdf))
        } else {
            ks_distance_below(tail, cdf, best_d)
        };
        let Some(d) = d else { continue };
        let fit = FitResult {
            params: cand.params,
            lower_bound: lb,
            ks_distance: d,
            log_likelihood: cand.log_likelihood,
            tail_count: tail.len(),
            degenerate: false,
        };
        if keep_all {
            results.push(fit);
        } else if d < best_d {
            best_d = d;
            results.clear();
            results.push(fit);
        }
    }
    if !any_valid {
        return Err(Error::DegenerateSample("every candidate tail has zero spread".into()));
    }
    Ok(results)
}

fn power_law_at(sums: &TailSums, start: usize) -> Option<Candidate> {
    let t = sums.count(start) as f64;
    let lb = sums.values[start];
    let log_excess = sums.sum_log[start] - t * lb.ln();
    if !(log_excess > 0.0) {
        return None;
    }
    let alpha = 1.0 + t / log_excess;
    let log_likelihood = t * (alpha - 1.0).ln() + t * (alpha - 1.0) * lb.ln() - alpha * sums.sum_log[start];
    Some(Candidate {
        params: ModelParams::PowerLaw { alpha },
        log_likelihood,
    })
}

fn exponential_at(sums: &TailSums, start: usize) -> Option<Candidate> {
    let t = sums.count(start) as f64;
    let lb = sums.values[start];
    let excess = sums.sum[start] - t * lb;
    if !(excess > 0.0) {
        return None;
    }
    let lambda_e = t / excess;
    let log_likelihood = t * lambda_e.ln() + t * lambda_e * lb - lambda_e * sums.sum[start];
    Some(Candidate {
        params: ModelParams::Exponential { lambda_e },
        log_likelihood,
    })
}

fn unwrap_best(mut results: Vec<FitResult>) -> FitResult {
    results.pop().expect("scan returns at least one candidate")
}

/// Power law with the closed-form exponent `1 + T / sum ln(theta / theta_min)`.
pub fn fit_power_law(sample: &Sample) -> Result<FitResult> {
    scan(sample, TAIL_MIN, false, |s, i| Ok(power_law_at(s, i))).map(unwrap_best)
}

/// Exponential with rate `T / (sum theta - T theta_min)` on each tail.
pub fn fit_exponential(sample: &Sample) -> Result<FitResult> {
    scan(sample, TAIL_MIN, false, |s, i| Ok(exponential_at(s, i))).map(unwrap_best)
}

/// Per-candidate results for the closed-form models, in ascending bound
/// order, for inspecting the KS selection.
pub fn scan_candidates(sample: &Sample, model: ModelKind, tail_min: usize) -> Result<Vec<FitResult>> {
    match model {
        ModelKind::PowerLaw => scan(sample, tail_min, true, |s, i| Ok(power_law_at(s, i))),
        ModelKind::Exponential => scan(sample, tail_min, true, |s, i| Ok(exponential_at(s, i))),
        ModelKind::PowerLawCutoff => {
            let mut state = CutoffState::default();
            scan(sample, tail_min, true, |s, i| state.fit_at(s, i))
        }
        ModelKind::LogNormal => Err(Error::invalid("the log-normal fit has no lower-bound scan")),
    }
}

/// Scaled negative log-likelihood `-L / T` of the truncated power law.
fn cutoff_objective(alpha_c: f64, lambda_c: f64, lb: f64, mean_log: f64, mean: f64) -> f64 {
    if alpha_c < 0.0 || lambda_c < 0.0 {
        return f64::INFINITY;
    }
    let v = -cutoff_log_norm(alpha_c, lambda_c, lb) + alpha_c * mean_log + lambda_c * mean;
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

#[derive(Default)]
struct CutoffState {
    warm: Option<[f64; 2]>,
    failures: usize,
    best_failed: Option<Vec<f64>>,
}

impl CutoffState {
    fn fit_at(&mut self, sums: &TailSums, start: usize) -> Result<Option<Candidate>> {
        let t = sums.count(start) as f64;
        let lb = sums.values[start];
        let mean_log = sums.sum_log[start] / t;
        let mean = sums.sum[start] / t;
        if !(mean > lb) {
            return Ok(None);
        }
        let f = |x: &[f64]| cutoff_objective(x[0], x[1], lb, mean_log, mean);
        // the pure power law is the lambda_c = 0 edge of the feasible set
        let boundary = power_law_at(sums, start).map(|c| match c.params {
            ModelParams::PowerLaw { alpha } => [alpha, 0.0],
            _ => unreachable!(),
        });
        let exp_point = [0.0, 1.0 / (mean - lb)];
        let mut init = exp_point;
        for p in [boundary, self.warm].into_iter().flatten() {
            if f(&p) < f(&init) {
                init = p;
            }
        }
        let mut opts = NelderMeadOptions::new(vec![0.0, 0.0], vec![0.25, 0.25 * exp_point[1]]);
        opts.max_evals = 2000;
        let min = match nelder_mead(f, &init, &opts) {
            Ok(m) => m,
            Err(_) => return Ok(None),
        };
        let mut x = [min.x[0], min.x[1]];
        let mut value = min.value;
        if let Some(b) = boundary {
            let fb = f(&b);
            if fb < value {
                x = b;
                value = fb;
            }
        }
        if !min.converged && !boundary.is_some_and(|b| b == x) {
            self.failures += 1;
            self.best_failed = Some(x.to_vec());
            return Ok(None);
        }
        self.warm = Some(x);
        Ok(Some(Candidate {
            params: ModelParams::PowerLawCutoff {
                alpha_c: x[0],
                lambda_c: x[1],
            },
            log_likelihood: -value * t,
        }))
    }
}

/// Truncated power law fitted numerically under `alpha_c, lambda_c >= 0`.
pub fn fit_power_law_cutoff(sample: &Sample) -> Result<FitResult> {
    let mut state = CutoffState::default();
    let out = scan(sample, TAIL_MIN, false, |s, i| state.fit_at(s, i));
    match out {
        Err(Error::DegenerateSample(_)) if state.failures > 0 => Err(Error::FitFailure {
            reason: format!(
                "optimizer did not converge for any of {} candidate bounds",
                state.failures
            ),
            best: state.best_failed.unwrap_or_default(),
        }),
        other => other.map(unwrap_best),
    }
}

/// Log-normal fitted on the whole sample by numerical minimization of `-L`
/// with `sigma >= 0`.
pub fn fit_log_normal(sample: &Sample) -> Result<FitResult> {
    let v = sample.values();
    if v.len() < 2 {
        return Err(Error::InsufficientData(
            "log-normal fit needs at least two values".into(),
        ));
    }
    let m = v.len() as f64;
    let logs: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let mean_log = logs.iter().sum::<f64>() / m;
    let var_log = logs.iter().map(|l| (l - mean_log).powi(2)).sum::<f64>() / m;
    let lb = v[0];
    if logs.iter().all(|&l| l == logs[0]) {
        return Ok(FitResult {
            params: ModelParams::LogNormal {
                mu: logs[0],
                sigma: 0.0,
            },
            lower_bound: lb,
            ks_distance: 0.0,
            log_likelihood: f64::INFINITY,
            tail_count: v.len(),
            degenerate: true,
        });
    }
    // rough start from order statistics
    let median = logs[logs.len() / 2];
    let iqr = logs[(3 * logs.len()) / 4] - logs[logs.len() / 4];
    let sigma0 = if iqr > 0.0 { iqr / 1.349 } else { var_log.sqrt() };
    let objective = |x: &[f64]| {
        let (mu, sigma) = (x[0], x[1]);
        if sigma <= 0.0 {
            return f64::INFINITY;
        }
        mean_log + sigma.ln() + 0.5 * (2.0 * PI).ln() + (var_log + (mean_log - mu).powi(2)) / (2.0 * sigma * sigma)
    };
    let opts = NelderMeadOptions::new(vec![f64::NEG_INFINITY, 0.0], vec![0.5 * sigma0, 0.5 * sigma0]);
    let min = nelder_mead(objective, &[median, sigma0], &opts)?;
    let (mu, sigma) = (min.x[0], min.x[1]);
    let params = ModelParams::LogNormal { mu, sigma };
    let mut fit = FitResult {
        params,
        lower_bound: lb,
        ks_distance: 0.0,
        log_likelihood: -min.value * m,
        tail_count: v.len(),
        degenerate: false,
    };
    let at_bound = fit.ccdf(lb)?;
    let z = |x: f64| (1.0 - fit.ccdf(x).unwrap_or(0.0) / at_bound).clamp(0.0, 1.0);
    fit.ks_distance = ks_distance_sorted(v, z);
    Ok(fit)
}

/// Dispatches to the fitter for `model`.
pub fn fit_model(sample: &Sample, model: ModelKind) -> Result<FitResult> {
    match model {
        ModelKind::PowerLaw => fit_power_law(sample),
        ModelKind::PowerLawCutoff => fit_power_law_cutoff(sample),
        ModelKind::LogNormal => fit_log_normal(sample),
        ModelKind::Exponential => fit_exponential(sample),
    }
}

/// `sum ln p(theta)` over `tail`, evaluated pointwise from the density.
pub fn tail_log_likelihood(params: &ModelParams, lower_bound: f64, tail: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for &x in tail {
        acc += model_pdf(params, lower_bound, x)?.ln();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_exponent_on_two_points() {
        let values = [0.1, 0.2];
        let sums = TailSums::new(&values);
        let c = power_law_at(&sums, 0).unwrap();
        let ModelParams::PowerLaw { alpha } = c.params else {
            panic!()
        };
        assert!((alpha - (1.0 + 2.0 / 2f64.ln())).abs() < 1e-12);
        assert!((alpha - 3.8854).abs() < 1e-4);
    }

    #[test]
    fn exponential_rate_on_three_points() {
        let values = [1.0, 2.0, 3.0];
        let sums = TailSums::new(&values);
        let ModelParams::Exponential { lambda_e } = exponential_at(&sums, 0).unwrap().params else {
            panic!()
        };
        // three points with total excess 3 over the bound
        assert!((lambda_e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_likelihoods_match_pointwise_sums() {
        let values: Vec<f64> = (1..=80)
            .map(|k| 0.05 + 0.013 * k as f64 + 0.001 * (k * k) as f64)
            .collect();
        let sums = TailSums::new(&values);
        for start in [0, 10, 29] {
            let lb = values[start];
            for c in [
                power_law_at(&sums, start).unwrap(),
                exponential_at(&sums, start).unwrap(),
            ] {
                let direct = tail_log_likelihood(&c.params, lb, &values[start..]).unwrap();
                assert!((direct - c.log_likelihood).abs() < 1e-9 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn candidates_skip_duplicates_and_short_tails() {
        let v = [1.0, 1.0, 2.0, 3.0, 3.0, 4.0];
        assert_eq!(candidate_starts(&v, 2), vec![0, 2, 3]);
        assert_eq!(candidate_starts(&v, 7), Vec::<usize>::new());
    }

    #[test]
    fn too_small_samples_are_rejected() {
        let s = Sample::new((1..=20).map(|k| k as f64).collect()).unwrap();
        assert!(matches!(fit_power_law(&s), Err(Error::InsufficientData(_))));
        let flat = Sample::new(vec![0.5; 100]).unwrap();
        assert!(matches!(fit_power_law(&flat), Err(Error::DegenerateSample(_))));
        assert!(matches!(fit_exponential(&flat), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn log_normal_degenerate_and_closed_form() {
        let e = std::f64::consts::E;
        let fit = fit_log_normal(&Sample::new(vec![e, e]).unwrap()).unwrap();
        let ModelParams::LogNormal { mu, sigma } = fit.params else {
            panic!()
        };
        assert!((mu - 1.0).abs() < 1e-15 && sigma == 0.0 && fit.degenerate);

        let values: Vec<f64> = (1..=300).map(|k| (0.01 * k as f64).sin().abs() + 0.01).collect();
        let fit = fit_log_normal(&Sample::new(values.clone()).unwrap()).unwrap();
        let logs: Vec<f64> = values.iter().map(|x| x.ln()).collect();
        let m = logs.len() as f64;
        let mean = logs.iter().sum::<f64>() / m;
        let sd = (logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / m).sqrt();
        let ModelParams::LogNormal { mu, sigma } = fit.params else {
            panic!()
        };
        assert!(((mu - mean) / mean).abs() < 1e-6, "{mu} vs {mean}");
        assert!(((sigma - sd) / sd).abs() < 1e-6, "{sigma} vs {sd}");
    }
}
