//! Bound-constrained Nelder–Mead minimisation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::unitary::RngSeed;

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    /// Lower bound per coordinate; `f64::NEG_INFINITY` for none. Trial points
    /// are projected onto the feasible box.
    pub lower: Vec<f64>,
    /// Initial simplex edge per coordinate.
    pub step: Vec<f64>,
    pub x_tol: f64,
    /// Relative spread of objective values, scaled by `max(1, |f|)`.
    pub f_tol: f64,
    pub max_evals: usize,
    /// Extra runs started from jittered copies of the best point so far.
    pub restarts: usize,
    pub seed: u64,
}

impl NelderMeadOptions {
    pub fn new(lower: Vec<f64>, step: Vec<f64>) -> Self {
        Self {
            lower,
            step,
            x_tol: 1e-10,
            f_tol: 1e-12,
            max_evals: 4000,
            restarts: 5,
            seed: 0x4e4d,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub evals: usize,
}

fn project(x: &mut [f64], lower: &[f64]) {
    for (v, &lo) in x.iter_mut().zip(lower) {
        if *v < lo {
            *v = lo;
        }
    }
}

fn eval(f: &mut impl FnMut(&[f64]) -> f64, x: &[f64]) -> f64 {
    let v = f(x);
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimises `f` from `init`. Non-finite objective values count as `+inf`.
///
/// Fails only when no evaluated point had a finite objective.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, init: &[f64], opts: &NelderMeadOptions) -> Result<Minimum> {
    let dim = init.len();
    if dim == 0 || opts.lower.len() != dim || opts.step.len() != dim {
        return Err(Error::invalid("optimizer dimensions do not match"));
    }
    let mut start = init.to_vec();
    project(&mut start, &opts.lower);
    let mut best = run(&mut f, &start, &opts.step, opts);
    let mut rng = RngSeed::new(opts.seed, 0).rng();
    let mut evals = best.evals;
    for _ in 0..opts.restarts {
        let base = if best.value.is_finite() {
            best.x.clone()
        } else {
            start.clone()
        };
        let mut jittered: Vec<f64> = base
            .iter()
            .zip(&opts.step)
            .map(|(&v, &s)| v + (rng.random::<f64>() - 0.5) * 2.0 * (0.1 * v.abs()).max(s))
            .collect();
        project(&mut jittered, &opts.lower);
        let attempt = run(&mut f, &jittered, &opts.step, opts);
        evals += attempt.evals;
        let better =
            attempt.value < best.value || (attempt.value == best.value && attempt.converged && !best.converged);
        if better {
            best = attempt;
        }
    }
    best.evals = evals;
    if !best.value.is_finite() {
        return Err(Error::FitFailure {
            reason: "objective was not finite at any visited point".into(),
            best: best.x,
        });
    }
    Ok(best)
}

fn run(f: &mut impl FnMut(&[f64]) -> f64, start: &[f64], step: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let dim = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), eval(f, start)));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += step[i];
        project(&mut x, &opts.lower);
        if x[i] == start[i] {
            x[i] -= step[i];
        }
        let v = eval(f, &x);
        simplex.push((x, v));
    }
    let mut evals = dim + 1;
    let mut converged = false;
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (lo, hi) = (simplex[0].1, simplex[dim].1);
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let spread_ok = hi.is_finite() && (hi - lo) <= opts.f_tol * lo.abs().max(1.0);
        if diameter < opts.x_tol && spread_ok {
            converged = true;
            break;
        }
        if diameter < opts.x_tol * 1e-3 {
            // collapsed without agreeing values; nothing left to explore
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / dim as f64;
            }
        }
        let towards = |coef: f64, worst: &[f64]| -> Vec<f64> {
            let mut p: Vec<f64> = centroid.iter().zip(worst).map(|(c, w)| c + coef * (w - c)).collect();
            project(&mut p, &opts.lower);
            p
        };
        let worst = simplex[dim].0.clone();
        let reflected = towards(-1.0, &worst);
        let fr = eval(f, &reflected);
        evals += 1;
        if fr < simplex[0].1 {
            let expanded = towards(-2.0, &worst);
            let fe = eval(f, &expanded);
            evals += 1;
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < simplex[dim].1 {
            let p = towards(-0.5, &worst);
            let v = eval(f, &p);
            (p, v)
        } else {
            let p = towards(0.5, &worst);
            let v = eval(f, &p);
            (p, v)
        };
        evals += 1;
        if fc < fr.min(simplex[dim].1) {
            simplex[dim] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let mut p: Vec<f64> = anchor.iter().zip(&entry.0).map(|(a, x)| a + 0.5 * (x - a)).collect();
            project(&mut p, &opts.lower);
            entry.1 = eval(f, &p);
            entry.0 = p;
        }
        evals += dim;
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        converged,
        evals,
    }
}
