//! Upper incomplete gamma function for any real shape, including the
//! negative shapes that appear in the truncated power law.

use statrs::function::gamma::gamma;

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 10_000;
/// Half-width of the interpolation band around non-positive integer shapes,
/// where the downward recurrence divides by a vanishing `s`.
const POLE_BAND: f64 = 1e-3;

/// `Gamma(s, x) * x^(-s)` for `x >= 0`.
///
/// The scaling removes the `x^s` singularity, so the value stays finite as
/// `x -> 0` whenever `s < 0` (limit `-1/s`). Returns `+inf` for `x = 0`,
/// `s >= 0`.
pub fn upper_gamma_scaled(s: f64, x: f64) -> f64 {
    if x.is_nan() || s.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return if s < 0.0 { -1.0 / s } else { f64::INFINITY };
    }
    if x >= 1.5 + s.max(0.0) {
        return (-x).exp() * continued_fraction(s, x);
    }
    if s <= 0.5 {
        let pole = s.round();
        if pole <= 0.0 && (s - pole).abs() < POLE_BAND {
            // polynomial interpolation across the removable cancellation
            let u = (s - pole) / POLE_BAND;
            let nodes = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];
            return nodes
                .iter()
                .map(|&k| {
                    let weight: f64 = nodes.iter().filter(|&&j| j != k).map(|&j| (u - j) / (k - j)).product();
                    weight * recurrence(pole + k * POLE_BAND, x)
                })
                .sum();
        }
        return recurrence(s, x);
    }
    series(s, x)
}

/// `Gamma(s, x)`, the unscaled upper incomplete gamma function.
pub fn upper_gamma(s: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if s > 0.0 { gamma(s) } else { f64::INFINITY };
    }
    upper_gamma_scaled(s, x) * x.powf(s)
}

/// Steps down from a base shape in `(0.5, 1.5]` with
/// `Gamma(s, x) = (Gamma(s + 1, x) - x^s e^{-x}) / s`, which in scaled form
/// reads `g(s) = (x g(s + 1) - e^{-x}) / s`.
fn recurrence(s: f64, x: f64) -> f64 {
    let steps = (0.5 - s).floor() as i64 + 1;
    let base = s + steps as f64;
    let mut g = series(base, x);
    let ex = (-x).exp();
    for j in (0..steps).rev() {
        let shape = s + j as f64;
        g = (x * g - ex) / shape;
    }
    g
}

/// `Gamma(a) x^-a - e^{-x} sum_n x^n / (a (a+1) ... (a+n))`, for `a > 0`.
fn series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    gamma(a) * x.powf(-a) - (-x).exp() * sum
}

/// Modified Lentz evaluation of the Legendre continued fraction,
/// `Gamma(s, x) = e^{-x} x^s / (x + 1 - s - 1 (1 - s) / (x + 3 - s - ...))`;
/// returns the fraction without the `e^{-x} x^s` prefactor.
fn continued_fraction(s: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
