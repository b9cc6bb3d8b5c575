use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use super::block::Su2;
use crate::error::{Error, Result};
use crate::unitary::RngSeed;

/// Which block parameters are randomized when transforming Bloch states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlochMode {
    /// `T(theta, 0)` with `theta ~ U[0, pi/2]`.
    ThetaOnly,
    /// `T(0, phi)` with `phi ~ U[0, 2 pi)`.
    PhiOnly,
    /// `T(theta, phi)` with both random.
    Both,
}

impl BlochMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BlochMode::ThetaOnly => "theta-only",
            BlochMode::PhiOnly => "phi-only",
            BlochMode::Both => "both",
        }
    }
}

impl FromStr for BlochMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta-only" | "theta" => Ok(BlochMode::ThetaOnly),
            "phi-only" | "phi" => Ok(BlochMode::PhiOnly),
            "both" => Ok(BlochMode::Both),
            other => Err(Error::invalid(format!("unknown Bloch mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlochSampleSet {
    pub mode: BlochMode,
    pub polar_grid: usize,
    pub azimuthal_grid: usize,
    /// Transformed Bloch vectors `(x, y, z)`.
    pub points: Vec<[f64; 3]>,
}

fn bloch_vector(a: Complex64, b: Complex64) -> [f64; 3] {
    let cross = a.conj() * b;
    [2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()]
}

/// Applies randomly parameterized blocks to a polar x azimuthal grid of
/// initial states and returns the transformed Bloch vectors.
///
/// The grid uses cell-centred polar angles `(i + 1/2) pi / P` and azimuths
/// `2 pi j / A`.
pub fn bloch_transform_samples(
    mode: BlochMode,
    polar_grid: usize,
    azimuthal_grid: usize,
    seed: RngSeed,
) -> Result<BlochSampleSet> {
    if polar_grid == 0 || azimuthal_grid == 0 {
        return Err(Error::invalid("Bloch grids need at least one point each"));
    }
    let mut rng = seed.rng();
    let mut points = Vec::with_capacity(polar_grid * azimuthal_grid);
    for i in 0..polar_grid {
        let xi = (i as f64 + 0.5) * PI / polar_grid as f64;
        for j in 0..azimuthal_grid {
            let eta = TAU * j as f64 / azimuthal_grid as f64;
            let a = Complex64::new((xi / 2.0).cos(), 0.0);
            let b = Complex64::from_polar((xi / 2.0).sin(), eta);
            let (theta, phi) = match mode {
                BlochMode::ThetaOnly => (rng.random_range(0.0..=FRAC_PI_2), 0.0),
                BlochMode::PhiOnly => (0.0, rng.random_range(0.0..TAU)),
                BlochMode::Both => (rng.random_range(0.0..=FRAC_PI_2), rng.random_range(0.0..TAU)),
            };
            let [t00, t01, t10, t11] = Su2::block(theta, phi).0;
            points.push(bloch_vector(t00 * a + t01 * b, t10 * a + t11 * b));
        }
    }
    Ok(BlochSampleSet {
        mode,
        polar_grid,
        azimuthal_grid,
        points,
    })
}
