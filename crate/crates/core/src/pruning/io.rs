use std::io::{Read, Write};

use super::defect::DefectMode;
use super::sweep::SweepRow;
use super::threshold::ThresholdRow;
use crate::error::{Error, Result};
use crate::fmt::f64_17;

pub const SWEEP_HEADER: [&str; 6] = ["n", "mode", "delta0", "ratio", "realization", "fidelity"];
pub const THRESHOLD_HEADER: [&str; 4] = ["n", "delta0", "baseline_mode", "threshold"];

pub fn write_sweep_csv(out: impl Write, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.mode.to_string(),
            f64_17(r.delta0),
            f64_17(r.ratio),
            r.realization.to_string(),
            f64_17(r.fidelity),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sweep table; lines starting with `#` are skipped.
pub fn read_sweep_csv(input: impl Read) -> Result<Vec<SweepRow>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::Parse(format!(
            "sweep header must be {}, got {}",
            SWEEP_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let bad = |what: &str| {
            Error::Parse(format!(
                "row {line}: bad {what} '{}'",
                field(SWEEP_HEADER.iter().position(|h| *h == what).unwrap())
            ))
        };
        let num = |k: usize, what: &str| -> Result<f64> {
            field(k)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(what))
        };
        let row = SweepRow {
            n: field(0).parse().map_err(|_| bad("n"))?,
            mode: field(1).parse::<DefectMode>().map_err(|_| bad("mode"))?,
            delta0: num(2, "delta0")?,
            ratio: num(3, "ratio")?,
            realization: field(4).parse().map_err(|_| bad("realization"))?,
            fidelity: num(5, "fidelity")?,
        };
        if !(0.0..=1.0).contains(&row.ratio) || row.delta0 < 0.0 {
            return Err(Error::Parse(format!("row {line}: ratio or delta0 out of range")));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_threshold_csv(out: impl Write, rows: &[ThresholdRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(THRESHOLD_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            f64_17(r.delta0),
            r.baseline.to_string(),
            f64_17(r.threshold),
        ])?;
    }
    w.flush()?;
    Ok(())
}
