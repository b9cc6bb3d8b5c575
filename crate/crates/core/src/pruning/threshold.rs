use std::collections::BTreeMap;

use super::defect::DefectMode;
use super::sweep::SweepRow;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdRow {
    pub n: usize,
    pub delta0: f64,
    pub baseline: DefectMode,
    pub threshold: f64,
}

/// Mean fidelity per ratio for rows matching `keep`, keyed by ratio bits.
fn mean_curve(rows: &[SweepRow], keep: impl Fn(&SweepRow) -> bool) -> BTreeMap<u64, (f64, f64)> {
    let mut acc: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
    for r in rows.iter().filter(|r| keep(r)) {
        let e = acc.entry(r.ratio.to_bits()).or_insert((r.ratio, 0.0, 0));
        e.1 += r.fidelity;
        e.2 += 1;
    }
    acc.into_iter().map(|(k, (x, s, c))| (k, (x, s / c as f64))).collect()
}

/// Largest defect ratio at which mean body-pruning fidelity still matches or
/// beats the mean fidelity of `baseline` at amplitude `delta0`.
///
/// When the curves cross between two grid points the crossing is located by
/// linear interpolation. Returns 0 when pruning never wins at a positive
/// ratio.
pub fn pruning_threshold(rows: &[SweepRow], n: usize, delta0: f64, baseline: DefectMode) -> Result<f64> {
    if !baseline.is_noise() {
        return Err(Error::invalid(format!("baseline must be a noise mode, got {baseline}")));
    }
    let prune = mean_curve(rows, |r| r.n == n && r.mode == DefectMode::PruneBody);
    let noise = mean_curve(rows, |r| {
        r.n == n && r.mode == baseline && (r.delta0 - delta0).abs() <= 1e-12
    });
    if prune.is_empty() || noise.is_empty() {
        return Err(Error::invalid(format!(
            "sweep lacks prune_body or {baseline} rows for n={n}, delta0={delta0}"
        )));
    }
    // ascending (ratio, prune - noise) on the common grid
    let diffs: Vec<(f64, f64)> = prune
        .iter()
        .filter_map(|(k, &(x, p))| noise.get(k).map(|&(_, q)| (x, p - q)))
        .collect();
    if diffs.is_empty() {
        return Err(Error::invalid("prune and noise rows share no ratio"));
    }
    let Some(i) = diffs.iter().rposition(|&(x, d)| x > 0.0 && d >= 0.0) else {
        return Ok(0.0);
    };
    let (x0, d0) = diffs[i];
    match diffs.get(i + 1) {
        Some(&(x1, d1)) => Ok(x0 + (x1 - x0) * d0 / (d0 - d1)),
        None => Ok(x0),
    }
}

/// Thresholds for every (n, delta0) in the sweep against each noise
/// baseline present, ordered by (n, delta0, baseline).
pub fn thresholds(rows: &[SweepRow]) -> Result<Vec<ThresholdRow>> {
    let mut keys: Vec<(usize, u64, DefectMode)> = rows
        .iter()
        .filter(|r| r.mode.is_noise())
        .map(|r| (r.n, r.delta0.to_bits(), r.mode))
        .collect();
    keys.sort_by(|a, b| {
        (a.0, f64::from_bits(a.1), a.2)
            .partial_cmp(&(b.0, f64::from_bits(b.1), b.2))
            .unwrap()
    });
    keys.dedup();
    keys.into_iter()
        .map(|(n, bits, baseline)| {
            let delta0 = f64::from_bits(bits);
            Ok(ThresholdRow {
                n,
                delta0,
                baseline,
                threshold: pruning_threshold(rows, n, delta0, baseline)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(prune: &[f64], noise: &[f64], delta0: f64) -> Vec<SweepRow> {
        let step = 1.0 / (prune.len() - 1) as f64;
        let mut out = Vec::new();
        for (mode, curve) in [(DefectMode::PruneBody, prune), (DefectMode::NoiseBody, noise)] {
            for (k, &f) in curve.iter().enumerate() {
                out.push(SweepRow {
                    n: 8,
                    mode,
                    delta0: if mode.is_noise() { delta0 } else { 0.0 },
                    ratio: k as f64 * step,
                    realization: 0,
                    fidelity: f,
                });
            }
        }
        out
    }

    #[test]
    fn crossing_is_interpolated() {
        // diff: 0, +0.1, +0.1, -0.1, -0.3 -> crossing halfway in [0.5, 0.75]
        let r = rows(&[1.0, 0.95, 0.9, 0.7, 0.5], &[1.0, 0.85, 0.8, 0.8, 0.8], 0.1);
        let t = pruning_threshold(&r, 8, 0.1, DefectMode::NoiseBody).unwrap();
        assert!((t - 0.625).abs() < 1e-12, "{t}");
    }

    #[test]
    fn never_winning_gives_zero() {
        let r = rows(&[1.0, 0.9, 0.8], &[1.0, 1.0, 1.0], 0.0);
        assert_eq!(pruning_threshold(&r, 8, 0.0, DefectMode::NoiseBody).unwrap(), 0.0);
    }

    #[test]
    fn winning_everywhere_gives_last_ratio() {
        let r = rows(&[1.0, 0.9, 0.8], &[1.0, 0.5, 0.4], 0.3);
        assert_eq!(pruning_threshold(&r, 8, 0.3, DefectMode::NoiseBody).unwrap(), 1.0);
    }

    #[test]
    fn missing_rows_are_an_error() {
        let r = rows(&[1.0, 0.9], &[1.0, 0.5], 0.3);
        assert!(pruning_threshold(&r, 8, 0.2, DefectMode::NoiseBody).is_err());
        assert!(pruning_threshold(&r, 8, 0.3, DefectMode::NoiseTail).is_err());
        assert!(pruning_threshold(&r, 9, 0.3, DefectMode::NoiseBody).is_err());
        assert!(pruning_threshold(&r, 8, 0.3, DefectMode::PruneTail).is_err());
        let all = thresholds(&r).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].baseline, DefectMode::NoiseBody);
    }
}
