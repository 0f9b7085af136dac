//! CSV and JSON artifacts. The CSV starts with one timestamp comment line;
//! everything after it is a deterministic function of config and seed
//! (rows sorted by the full parameter tuple).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::json;

use crate::config::Config;
use crate::experiments::Outcome;

pub fn write_outputs(
    cfg: &Config,
    outcome: &Outcome,
    runtime_ms: u128,
) -> anyhow::Result<(PathBuf, PathBuf)> {
    let dir = Path::new(&cfg.out_dir);
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;

    let csv_path = dir.join(format!("{}.csv", outcome.experiment));
    let mut file = fs::File::create(&csv_path)
        .with_context(|| format!("cannot write {}", csv_path.display()))?;
    writeln!(file, "# generated: {}", chrono::Utc::now().to_rfc3339())?;
    {
        let mut w = csv::Writer::from_writer(&mut file);
        w.write_record(&outcome.header)?;
        for row in outcome.sorted_rows() {
            w.write_record(&row)?;
        }
        w.flush()?;
    }

    let summary_path = dir.join("summary.json");
    let summary = json!({
        "experiment": outcome.experiment,
        "params": serde_json::to_value(cfg)?,
        "metrics": outcome.metrics,
        "pass": outcome.pass,
        "tolerance": outcome.tolerance,
        "runtime_ms": runtime_ms,
    });
    fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)
        .with_context(|| format!("cannot write {}", summary_path.display()))?;
    Ok((csv_path, summary_path))
}
