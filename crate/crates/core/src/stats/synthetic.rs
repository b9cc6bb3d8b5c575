//! Samplers for the four models, used as estimator oracles.

use rand::Rng;
use rand_distr::{Distribution, Exp, LogNormal, Pareto};

use super::model::ModelParams;
use crate::error::{Error, Result};
use crate::unitary::RngSeed;

/// Draws `count` values from `params` with lower bound `lower_bound`
/// (ignored for the log-normal).
pub fn sample_model(params: &ModelParams, lower_bound: f64, count: usize, seed: RngSeed) -> Result<Vec<f64>> {
    let mut rng = seed.rng();
    let bad = |what: &str| Error::invalid(format!("cannot sample {what}"));
    match *params {
        ModelParams::PowerLaw { alpha } => {
            let d = Pareto::new(lower_bound, alpha - 1.0).map_err(|_| bad("power law"))?;
            Ok((0..count).map(|_| d.sample(&mut rng)).collect())
        }
        ModelParams::Exponential { lambda_e } => {
            let d = Exp::new(lambda_e).map_err(|_| bad("exponential"))?;
            Ok((0..count).map(|_| lower_bound + d.sample(&mut rng)).collect())
        }
        ModelParams::LogNormal { mu, sigma } => {
            let d = LogNormal::new(mu, sigma).map_err(|_| bad("log-normal"))?;
            Ok((0..count).map(|_| d.sample(&mut rng)).collect())
        }
        ModelParams::PowerLawCutoff { alpha_c, lambda_c } => {
            if !(lambda_c > 0.0) || !(alpha_c >= 0.0) || !(lower_bound > 0.0) {
                return Err(bad("truncated power law without a positive cutoff"));
            }
            // shifted exponential proposal, accepted with (x / lb)^-alpha_c
            let d = Exp::new(lambda_c).map_err(|_| bad("truncated power law"))?;
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let x = lower_bound + d.sample(&mut rng);
                if rng.random::<f64>() < (x / lower_bound).powf(-alpha_c) {
                    out.push(x);
                }
            }
            Ok(out)
        }
    }
}
