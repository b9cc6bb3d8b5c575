use crate::error::{Error, Result};

/// Positive observations sorted ascending. Zeros are dropped on ingestion
/// and counted, since every fitted density is log-singular at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    excluded_zeros: usize,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid(format!(
                "sample values must be finite and non-negative, got {bad}"
            )));
        }
        let before = values.len();
        values.retain(|&v| v > 0.0);
        let excluded_zeros = before - values.len();
        values.sort_by(f64::total_cmp);
        Ok(Self { values, excluded_zeros })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn excluded_zeros(&self) -> usize {
        self.excluded_zeros
    }

    /// Values at or above `bound`.
    pub fn tail(&self, bound: f64) -> &[f64] {
        let start = self.values.partition_point(|&v| v < bound);
        &self.values[start..]
    }

    /// Fraction of the sample (zeros included) at or above `theta`.
    pub fn empirical_ccdf(&self, theta: f64) -> f64 {
        let total = self.values.len() + self.excluded_zeros;
        if total == 0 {
            return 0.0;
        }
        let above = if theta <= 0.0 { total } else { self.tail(theta).len() };
        above as f64 / total as f64
    }
}

/// One bin of a log-spaced density estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityBin {
    pub lower: f64,
    pub upper: f64,
    pub center: f64,
    pub count: usize,
    pub density: f64,
}

/// Histogram density over `bins` log-spaced bins spanning the sample range,
/// normalized by the positive sample size.
pub fn log_binned_pdf(sample: &Sample, bins: usize) -> Result<Vec<DensityBin>> {
    if bins == 0 {
        return Err(Error::invalid("need at least one bin"));
    }
    let v = sample.values();
    if v.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    let (lo, hi) = (v[0].ln(), v[v.len() - 1].ln());
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let edges: Vec<f64> = (0..=bins).map(|k| (lo + width * k as f64).exp()).collect();
    let mut counts = vec![0usize; bins];
    for &x in v {
        let k = (((x.ln() - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| {
            let (lower, upper) = (edges[k], edges[k + 1]);
            DensityBin {
                lower,
                upper,
                center: (lower * upper).sqrt(),
                count,
                density: count as f64 / (v.len() as f64 * (upper - lower)),
            }
        })
        .collect())
}
