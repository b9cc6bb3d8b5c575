//! Experiment runner behind the `meshprune` binary.
//!
//! Every command writes its tables plus a `manifest.json` holding the
//! resolved settings, so a directory of outputs can be regenerated
//! byte-for-byte from its manifest.

pub mod commands;
pub mod config;
pub mod table;

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde_json::json;

pub use config::{Cli, Command, FileConfig, Format, Settings};

/// Runs one parsed command line and returns the files written, manifest
/// last.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let settings = Settings::resolve(&cli.command)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .context("starting worker threads")?;
    fs::create_dir_all(&settings.out)
        .with_context(|| format!("creating output directory {}", settings.out.display()))?;
    let output = pool.install(|| match &cli.command {
        Command::Gen(_) => commands::gen(&settings),
        Command::Fit(_) => commands::fit(&settings),
        Command::Sweep(_) => commands::sweep(&settings),
        Command::Threshold(_) => commands::threshold(&settings),
        Command::Universal(_) => commands::universal(&settings),
        Command::Bloch(_) => commands::bloch(&settings),
    })?;

    let names: Vec<String> = output
        .files
        .iter()
        .map(|p| {
            p.file_name()
                .map_or_else(String::new, |f| f.to_string_lossy().into_owned())
        })
        .collect();
    let manifest = json!({
        "tool": "meshprune",
        "version": meshprune::VERSION,
        "settings": settings,
        "files": names,
        "details": output.extra,
    });
    let path = settings.out.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    let mut files = output.files;
    files.push(path);
    Ok(files)
}

/// Machine-readable class of an error: the library error kind when one is
/// in the chain, otherwise a coarse tag.
pub fn error_kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<meshprune::Error>() {
            return e.kind();
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
        if cause.is::<serde_json::Error>() {
            return "parse";
        }
    }
    "invalid-argument"
}

/// `error: <kind>: <message>` on a single line.
pub fn error_line(err: &anyhow::Error) -> String {
    let msg = format!("{err:#}").replace(['\n', '\r'], " ");
    format!("error: {}: {msg}", error_kind(err))
}
