use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use statrs::function::erf::erfc;

use super::gamma::upper_gamma_scaled;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    PowerLaw,
    PowerLawCutoff,
    LogNormal,
    Exponential,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::PowerLaw,
        ModelKind::PowerLawCutoff,
        ModelKind::LogNormal,
        ModelKind::Exponential,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::PowerLaw => "power_law",
            ModelKind::PowerLawCutoff => "power_law_cutoff",
            ModelKind::LogNormal => "log_normal",
            ModelKind::Exponential => "exponential",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pl" | "power_law" => Ok(ModelKind::PowerLaw),
            "plc" | "power_law_cutoff" => Ok(ModelKind::PowerLawCutoff),
            "ln" | "log_normal" => Ok(ModelKind::LogNormal),
            "exp" | "exponential" => Ok(ModelKind::Exponential),
            other => Err(Error::invalid(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelParams {
    PowerLaw { alpha: f64 },
    PowerLawCutoff { alpha_c: f64, lambda_c: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Exponential { lambda_e: f64 },
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::PowerLaw { .. } => ModelKind::PowerLaw,
            ModelParams::PowerLawCutoff { .. } => ModelKind::PowerLawCutoff,
            ModelParams::LogNormal { .. } => ModelKind::LogNormal,
            ModelParams::Exponential { .. } => ModelKind::Exponential,
        }
    }

    /// Parameter names and values in declaration order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ModelParams::PowerLaw { alpha } => vec![("alpha", alpha)],
            ModelParams::PowerLawCutoff { alpha_c, lambda_c } => vec![("alpha_c", alpha_c), ("lambda_c", lambda_c)],
            ModelParams::LogNormal { mu, sigma } => vec![("mu", mu), ("sigma", sigma)],
            ModelParams::Exponential { lambda_e } => vec![("lambda_e", lambda_e)],
        }
    }
}

/// A fitted model together with its selected lower bound and diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub params: ModelParams,
    /// Lower bound of the fitted tail; the sample minimum for the log-normal.
    pub lower_bound: f64,
    pub ks_distance: f64,
    pub log_likelihood: f64,
    pub tail_count: usize,
    /// Set when the estimator hit a singular case (e.g. zero spread).
    pub degenerate: bool,
}

impl FitResult {
    pub fn model(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn pdf(&self, theta: f64) -> Result<f64> {
        model_pdf(&self.params, self.lower_bound, theta)
    }

    pub fn ccdf(&self, theta: f64) -> Result<f64> {
        model_ccdf(&self.params, self.lower_bound, theta)
    }

    /// Model CDF conditioned on `theta >= lower_bound`.
    pub fn tail_cdf(&self, theta: f64) -> Result<f64> {
        let at_bound = self.ccdf(self.lower_bound)?;
        Ok((1.0 - self.ccdf(theta)? / at_bound).clamp(0.0, 1.0))
    }
}

fn check_domain(params: &ModelParams, lower_bound: f64, theta: f64) -> Result<()> {
    let bound = match params {
        ModelParams::LogNormal { .. } => 0.0,
        _ => lower_bound,
    };
    let below = match params {
        ModelParams::LogNormal { .. } => theta <= 0.0,
        _ => theta < bound,
    };
    if below || theta.is_nan() {
        return Err(Error::Domain {
            value: theta,
            lower_bound: bound,
        });
    }
    Ok(())
}

/// Log-density of the truncated power law,
/// `lambda^(1-a) theta^-a e^(-lambda theta) / Gamma(1-a, lambda theta_min)`.
pub(crate) fn cutoff_log_norm(alpha_c: f64, lambda_c: f64, lower_bound: f64) -> f64 {
    let s = 1.0 - alpha_c;
    -upper_gamma_scaled(s, lambda_c * lower_bound).ln() - s * lower_bound.ln()
}

pub fn model_pdf(params: &ModelParams, lower_bound: f64, theta: f64) -> Result<f64> {
    check_domain(params, lower_bound, theta)?;
    Ok(match *params {
        ModelParams::PowerLaw { alpha } => (alpha - 1.0) / lower_bound * (theta / lower_bound).powf(-alpha),
        ModelParams::PowerLawCutoff { alpha_c, lambda_c } => {
            (cutoff_log_norm(alpha_c, lambda_c, lower_bound) - alpha_c * theta.ln() - lambda_c * theta).exp()
        }
        ModelParams::LogNormal { mu, sigma } => {
            if sigma == 0.0 {
                if theta.ln() == mu {
                    f64::INFINITY
                } else {
                    0.0
                }
            } else {
                let z = (theta.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / (sigma * theta * (2.0 * PI).sqrt())
            }
        }
        ModelParams::Exponential { lambda_e } => lambda_e * (-lambda_e * (theta - lower_bound)).exp(),
    })
}

pub fn model_ccdf(params: &ModelParams, lower_bound: f64, theta: f64) -> Result<f64> {
    check_domain(params, lower_bound, theta)?;
    Ok(match *params {
        ModelParams::PowerLaw { alpha } => (theta / lower_bound).powf(1.0 - alpha),
        ModelParams::PowerLawCutoff { alpha_c, lambda_c } => {
            let s = 1.0 - alpha_c;
            (theta / lower_bound).powf(s) * upper_gamma_scaled(s, lambda_c * theta)
                / upper_gamma_scaled(s, lambda_c * lower_bound)
        }
        ModelParams::LogNormal { mu, sigma } => {
            if sigma == 0.0 {
                if theta.ln() <= mu {
                    1.0
                } else {
                    0.0
                }
            } else {
                0.5 * erfc((theta.ln() - mu) / (sigma * SQRT_2))
            }
        }
        ModelParams::Exponential { lambda_e } => (-lambda_e * (theta - lower_bound)).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_models() -> Vec<(ModelParams, f64)> {
        vec![
            (ModelParams::PowerLaw { alpha: 2.7 }, 0.2),
            (
                ModelParams::PowerLawCutoff {
                    alpha_c: 1.6,
                    lambda_c: 3.0,
                },
                0.1,
            ),
            (
                ModelParams::PowerLawCutoff {
                    alpha_c: 0.4,
                    lambda_c: 2.0,
                },
                0.05,
            ),
            (ModelParams::LogNormal { mu: -1.0, sigma: 0.6 }, 0.0),
            (ModelParams::Exponential { lambda_e: 4.0 }, 0.1),
        ]
    }

    #[test]
    fn reference_values() {
        let pl = ModelParams::PowerLaw { alpha: 2.0 };
        assert_eq!(model_pdf(&pl, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(model_ccdf(&pl, 1.0, 1.0).unwrap(), 1.0);
        let ex = ModelParams::Exponential { lambda_e: 1.0 };
        for &t in &[0.0, 0.5, 2.0] {
            assert!((model_pdf(&ex, 0.0, t).unwrap() - (-t).exp()).abs() < 1e-15);
        }
        let ln = ModelParams::LogNormal { mu: 0.3, sigma: 1.2 };
        assert!((model_ccdf(&ln, 0.0, 0.3f64.exp()).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn below_bound_is_a_domain_error() {
        for (p, lb) in all_models() {
            let bad = if lb > 0.0 { lb * 0.5 } else { -1.0 };
            assert!(matches!(model_pdf(&p, lb, bad), Err(Error::Domain { .. })));
            assert!(matches!(model_ccdf(&p, lb, bad), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn bounded_models_have_unit_ccdf_at_bound() {
        for (p, lb) in all_models() {
            if lb > 0.0 {
                assert!((model_ccdf(&p, lb, lb).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ccdf_derivative_is_minus_pdf() {
        for (p, lb) in all_models() {
            let start = if lb > 0.0 { lb } else { 0.05 };
            for k in 1..=20 {
                let t = start * (1.0 + 0.3 * k as f64);
                let h = 1e-5 * t;
                let d = (model_ccdf(&p, lb, t + h).unwrap() - model_ccdf(&p, lb, t - h).unwrap()) / (2.0 * h);
                let pdf = model_pdf(&p, lb, t).unwrap();
                assert!((d + pdf).abs() <= 1e-6 * pdf.max(1e-3), "{p:?} at {t}: {d} vs {pdf}");
            }
        }
    }

    #[test]
    fn vanishing_cutoff_approaches_power_law() {
        let lb = 0.1;
        let pure = ModelParams::PowerLaw { alpha: 2.4 };
        let cut = ModelParams::PowerLawCutoff {
            alpha_c: 2.4,
            lambda_c: 1e-8,
        };
        for k in 0..=30 {
            let t = lb * (1.0 + 0.3 * k as f64);
            let a = model_pdf(&pure, lb, t).unwrap();
            let b = model_pdf(&cut, lb, t).unwrap();
            assert!(((a - b) / a).abs() < 1e-4, "{t}: {a} vs {b}");
        }
        // exactly zero cutoff reduces to the power law
        let zero = ModelParams::PowerLawCutoff {
            alpha_c: 2.4,
            lambda_c: 0.0,
        };
        let t = 0.37;
        assert!((model_ccdf(&zero, lb, t).unwrap() - model_ccdf(&pure, lb, t).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn model_names_parse() {
        for k in ModelKind::ALL {
            assert_eq!(k.as_str().parse::<ModelKind>().unwrap(), k);
        }
        assert_eq!("plc".parse::<ModelKind>().unwrap(), ModelKind::PowerLawCutoff);
        assert!("gauss".parse::<ModelKind>().is_err());
    }
}
