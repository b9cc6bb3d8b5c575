//! One function per subcommand. Each computes its tables, writes them into
//! the output directory and returns the file names it produced.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use meshprune::mesh::{bloch_transform_samples, BlochMode, MeshPlan};
use meshprune::pruning::{
    fidelity_sweep, ratio_grid, read_sweep_csv, realization_plan, thresholds, DefectMode, SweepConfig, SweepRow,
    ThresholdRow,
};
use meshprune::stats::{fit_model, log_binned_pdf, FitResult, ModelKind, Sample};
use meshprune::universal::{universal_defect_sweep, PositionStats, UniversalConfig};
use meshprune::RngSeed;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::Settings;
use crate::table::{Cell, Meta, Table};

/// Log-spaced bins of the plotted density.
pub const PDF_BINS: usize = 40;

const FIT_PARAMS: [&str; 6] = ["alpha", "alpha_c", "lambda_c", "mu", "sigma", "lambda_e"];

/// Tables and extra manifest entries produced by a command.
pub struct Output {
    pub files: Vec<PathBuf>,
    pub extra: Value,
}

fn meta(s: &Settings) -> Meta {
    Meta {
        command: s.command.clone(),
        seed: s.seed,
    }
}

fn radians(s: &Settings) -> Vec<f64> {
    s.delta0.as_deref().unwrap_or_default().iter().map(|d| d * PI).collect()
}

pub fn plan_file_name(n: usize, realization: u64) -> String {
    format!("plan_n{n}_r{realization}.json")
}

/// Parses `plan_n{n}_r{k}.json`.
pub fn parse_plan_file_name(name: &str) -> Option<(usize, u64)> {
    let (n, r) = name.strip_prefix("plan_n")?.strip_suffix(".json")?.split_once("_r")?;
    Some((n.parse().ok()?, r.parse().ok()?))
}

pub fn gen(s: &Settings) -> Result<Output> {
    let jobs: Vec<(usize, u64)> =
        s.n.iter()
            .flat_map(|&n| (0..s.ensemble as u64).map(move |r| (n, r)))
            .collect();
    let plans: Vec<MeshPlan> = jobs
        .par_iter()
        .map(|&(n, r)| realization_plan(n, s.seed, r).map(|(_, p)| p))
        .collect::<meshprune::Result<_>>()?;
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for (&(n, r), plan) in jobs.iter().zip(&plans) {
        let name = plan_file_name(n, r);
        let path = s.out.join(&name);
        fs::write(&path, plan.to_json()).with_context(|| format!("writing {}", path.display()))?;
        entries.push(json!({"file": name, "n": n, "realization": r, "seed": RngSeed::new(s.seed, r)}));
        files.push(path);
    }
    Ok(Output {
        files,
        extra: json!({ "plans": entries }),
    })
}

fn parse_models(spec: &str) -> Result<Vec<ModelKind>> {
    if spec.trim() == "all" {
        return Ok(ModelKind::ALL.to_vec());
    }
    let mut models = Vec::new();
    for part in spec.split(',') {
        let m = ModelKind::from_str(part.trim()).map_err(|e| anyhow!(e))?;
        if !models.contains(&m) {
            models.push(m);
        }
    }
    Ok(models)
}

fn load_plans(dir: &Path, sizes: &[usize]) -> Result<Vec<(usize, u64, MeshPlan)>> {
    let mut found = Vec::new();
    let listing = fs::read_dir(dir).with_context(|| format!("reading plan directory {}", dir.display()))?;
    for entry in listing {
        let entry = entry.with_context(|| format!("reading plan directory {}", dir.display()))?;
        let name = entry.file_name();
        let Some((n, r)) = name.to_str().and_then(parse_plan_file_name) else {
            continue;
        };
        if sizes.is_empty() || sizes.contains(&n) {
            found.push((n, r, entry.path()));
        }
    }
    if found.is_empty() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("no matching plan_n*_r*.json files in {}", dir.display()),
        )
        .into());
    }
    found.sort();
    found
        .into_iter()
        .map(|(n, r, path)| {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let plan = MeshPlan::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
            if plan.n != n {
                bail!("{} holds a plan with n={}", path.display(), plan.n);
            }
            Ok((n, r, plan))
        })
        .collect()
}

fn fit_row(n: usize, r: u64, model: ModelKind, fit: &meshprune::Result<FitResult>) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![n.into(), r.into(), model.as_str().into()];
    match fit {
        Ok(f) => {
            row.extend([
                "ok".into(),
                f.lower_bound.into(),
                f.ks_distance.into(),
                f.log_likelihood.into(),
                f.tail_count.into(),
            ]);
            let named = f.params.named();
            row.extend(FIT_PARAMS.iter().map(|p| {
                named
                    .iter()
                    .find(|(k, _)| k == p)
                    .map_or(Cell::Empty, |&(_, v)| v.into())
            }));
        }
        Err(e) => {
            row.push(e.kind().into());
            row.extend((0..4 + FIT_PARAMS.len()).map(|_| Cell::Empty));
        }
    }
    row
}

pub fn fit(s: &Settings) -> Result<Output> {
    let models = parse_models(s.model.as_deref().unwrap_or("all"))?;
    let from = s.from.as_deref().ok_or_else(|| anyhow!("fit needs --from"))?;
    let plans = load_plans(from, &s.n)?;
    type PlanTables = (Vec<Vec<Cell>>, Vec<Vec<Cell>>, Vec<Vec<Cell>>);
    let per_plan: Vec<PlanTables> = plans
        .par_iter()
        .map(|(n, r, plan)| {
            let (n, r) = (*n, *r);
            let sample = Sample::new(plan.thetas())?;
            let fits = models
                .iter()
                .map(|&m| fit_row(n, r, m, &fit_model(&sample, m)))
                .collect();
            let mut ccdf = Vec::new();
            let values = sample.values();
            for (i, &v) in values.iter().enumerate() {
                if i == 0 || values[i - 1] != v {
                    ccdf.push(vec![n.into(), r.into(), v.into(), sample.empirical_ccdf(v).into()]);
                }
            }
            let pdf = log_binned_pdf(&sample, PDF_BINS)?
                .into_iter()
                .map(|b| {
                    vec![
                        n.into(),
                        r.into(),
                        b.lower.into(),
                        b.upper.into(),
                        b.center.into(),
                        b.count.into(),
                        b.density.into(),
                    ]
                })
                .collect();
            Ok((fits, ccdf, pdf))
        })
        .collect::<meshprune::Result<_>>()?;

    let mut columns = vec![
        "n",
        "realization",
        "model",
        "status",
        "lower_bound",
        "ks_distance",
        "log_likelihood",
        "tail_count",
    ];
    columns.extend(FIT_PARAMS);
    let mut fits = Table::new(&columns);
    let mut ccdf = Table::new(&["n", "realization", "theta", "ccdf"]);
    let mut pdf = Table::new(&["n", "realization", "lower", "upper", "center", "count", "density"]);
    for (f, c, p) in per_plan {
        fits.rows.extend(f);
        ccdf.rows.extend(c);
        pdf.rows.extend(p);
    }
    let m = meta(s);
    let files = vec![
        fits.write(&s.out, "fits", s.format, &m)?,
        ccdf.write(&s.out, "ccdf", s.format, &m)?,
        pdf.write(&s.out, "pdf", s.format, &m)?,
    ];
    Ok(Output {
        files,
        extra: json!({ "plans_read": plans.len() }),
    })
}

fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&meshprune::pruning::SWEEP_HEADER);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.mode.as_str().into(),
            r.delta0.into(),
            r.ratio.into(),
            r.realization.into(),
            r.fidelity.into(),
        ]);
    }
    t
}

fn threshold_table(rows: &[ThresholdRow]) -> Table {
    let mut t = Table::new(&["n", "delta0", "delta0_over_pi", "baseline_mode", "threshold"]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.delta0.into(),
            (r.delta0 / PI).into(),
            r.baseline.as_str().into(),
            r.threshold.into(),
        ]);
    }
    t
}

fn run_sweeps(s: &Settings, modes: &[DefectMode]) -> Result<Vec<SweepRow>> {
    let grid = ratio_grid(s.ratio_step.unwrap_or(crate::config::DEFAULT_RATIO_STEP))?;
    let mut rows = Vec::new();
    for &n in &s.n {
        let mut cfg = SweepConfig::new(n, s.ensemble, grid.clone(), radians(s), s.seed);
        cfg.modes = modes.to_vec();
        rows.extend(fidelity_sweep(&cfg).with_context(|| format!("sweep at n={n}"))?);
    }
    Ok(rows)
}

pub fn sweep(s: &Settings) -> Result<Output> {
    let rows = run_sweeps(s, &DefectMode::ALL)?;
    let file = sweep_table(&rows).write(&s.out, "sweep", s.format, &meta(s))?;
    Ok(Output {
        files: vec![file],
        extra: json!({ "rows": rows.len() }),
    })
}

pub fn threshold(s: &Settings) -> Result<Output> {
    let m = meta(s);
    let mut files = Vec::new();
    let rows = match &s.from {
        Some(path) => {
            let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            read_sweep_csv(file).with_context(|| format!("reading {}", path.display()))?
        }
        None => {
            let rows = run_sweeps(
                s,
                &[DefectMode::PruneBody, DefectMode::NoiseBody, DefectMode::NoiseTail],
            )?;
            files.push(sweep_table(&rows).write(&s.out, "sweep", s.format, &m)?);
            rows
        }
    };
    let table = thresholds(&rows)?;
    files.push(threshold_table(&table).write(&s.out, "thresholds", s.format, &m)?);
    Ok(Output {
        files,
        extra: json!({ "thresholds": table.len() }),
    })
}

fn positions_table(p: &PositionStats) -> Table {
    let mut t = Table::new(&["m", "l", "mesh_column", "mean_theta", "mean_phi", "rank"]);
    for (i, ((&(m, l), col), rank)) in p.positions.iter().zip(&p.mesh_column).zip(p.ranks()).enumerate() {
        t.push(vec![
            m.into(),
            l.into(),
            (*col).into(),
            p.mean_theta[i].into(),
            p.mean_phi[i].into(),
            rank.into(),
        ]);
    }
    t
}

pub fn universal(s: &Settings) -> Result<Output> {
    let grid = ratio_grid(s.ratio_step.unwrap_or(crate::config::DEFAULT_RATIO_STEP))?;
    let (train, test) = (s.train.unwrap_or(1), s.test.unwrap_or(1));
    let m = meta(s);
    let mut files = Vec::new();
    let mut rows = Vec::new();
    for &n in &s.n {
        let cfg = UniversalConfig::new(n, train, test, grid.clone(), radians(s), s.seed);
        let (stats, r) = universal_defect_sweep(&cfg).with_context(|| format!("universal sweep at n={n}"))?;
        files.push(positions_table(&stats).write(&s.out, &format!("positions_n{n}"), s.format, &m)?);
        rows.extend(r);
    }
    files.push(sweep_table(&rows).write(&s.out, "universal_sweep", s.format, &m)?);
    files.push(threshold_table(&thresholds(&rows)?).write(&s.out, "universal_thresholds", s.format, &m)?);
    Ok(Output {
        files,
        extra: json!({ "train_realizations": [0, train], "test_realizations": [train, train + test] }),
    })
}

pub fn bloch(s: &Settings) -> Result<Output> {
    let spec = s.mode.as_deref().unwrap_or("both");
    let modes = if spec == "all" {
        vec![BlochMode::ThetaOnly, BlochMode::PhiOnly, BlochMode::Both]
    } else {
        vec![BlochMode::from_str(spec)?]
    };
    let (polar, azimuthal) = (s.polar.unwrap_or(200), s.azimuthal.unwrap_or(400));
    let m = meta(s);
    let mut files = Vec::new();
    for (k, mode) in modes.into_iter().enumerate() {
        let set = bloch_transform_samples(mode, polar, azimuthal, RngSeed::new(s.seed, k as u64))?;
        let mut t = Table::new(&["polar_index", "azimuthal_index", "x", "y", "z"]);
        for (i, p) in set.points.iter().enumerate() {
            t.push(vec![
                (i / azimuthal).into(),
                (i % azimuthal).into(),
                p[0].into(),
                p[1].into(),
                p[2].into(),
            ]);
        }
        files.push(t.write(&s.out, &format!("bloch_{}", mode.as_str()), s.format, &m)?);
    }
    Ok(Output {
        files,
        extra: json!({}),
    })
}
