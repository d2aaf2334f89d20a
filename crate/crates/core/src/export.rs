//! Result export: aggregate metrics as JSON plus per-trial CSV tables.
//!
//! Output is byte-stable for a fixed seed: rows are emitted in trial order
//! and floats use Rust's shortest round-trip formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::{TrialMetrics, TrialRecord};

fn io_err<'a>(action: &'static str, path: &'a Path) -> impl FnOnce(std::io::Error) -> Error + 'a {
    move |source| Error::Io {
        action,
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(io_err("create", path))?,
    ))
}

/// Writes `metrics.json`, `curves.csv`, `detections.csv`, `estimates.csv`,
/// and, when sweeps were retained, `sweeps.csv` into `out_dir`.
pub fn export_results(
    metrics: &TrialMetrics,
    records: &[TrialRecord],
    out_dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(io_err("create directory", out_dir))?;

    write_metrics(metrics, &out_dir.join("metrics.json"))?;
    write_curves(metrics, &out_dir.join("curves.csv"))?;
    write_detections(records, &out_dir.join("detections.csv"))?;
    write_estimates(records, &out_dir.join("estimates.csv"))?;
    if records.iter().any(|r| r.series.is_some()) {
        write_sweeps(records, &out_dir.join("sweeps.csv"))?;
    }
    Ok(())
}

fn write_metrics(metrics: &TrialMetrics, path: &PathBuf) -> Result<()> {
    let mut out = create(path)?;
    let json = serde_json::to_string_pretty(metrics)
        .map_err(|e| Error::InvalidConfig(format!("metrics serialization failed: {e}")))?;
    writeln!(out, "{json}").map_err(io_err("write", path))?;
    out.flush().map_err(io_err("write", path))
}

fn write_curves(metrics: &TrialMetrics, path: &PathBuf) -> Result<()> {
    let mut out = create(path)?;
    writeln!(
        out,
        "trial_index,cum_correct,cum_false_alarms,running_rmse_m"
    )
    .map_err(io_err("write", path))?;
    for point in &metrics.cumulative_curves {
        writeln!(
            out,
            "{},{},{},{}",
            point.trial_index, point.cum_correct, point.cum_false_alarms, point.running_rmse_m
        )
        .map_err(io_err("write", path))?;
    }
    out.flush().map_err(io_err("write", path))
}

fn write_detections(records: &[TrialRecord], path: &PathBuf) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "trial,detected,max_deviation_db,ap,angle_deg").map_err(io_err("write", path))?;
    for record in records {
        // The fine outcome carries the informative deviation; fall back to
        // the coarse row-mean drop when the gate never opened.
        let outcome = record.fine.unwrap_or(record.coarse);
        let ap = outcome
            .triggering_ap
            .map(|a| a.to_string())
            .unwrap_or_default();
        let angle = outcome
            .triggering_angle
            .map(|a| a.to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            record.trial_index,
            record.detected(),
            outcome.max_deviation,
            ap,
            angle
        )
        .map_err(io_err("write", path))?;
    }
    out.flush().map_err(io_err("write", path))
}

fn write_estimates(records: &[TrialRecord], path: &PathBuf) -> Result<()> {
    let mut out = create(path)?;
    writeln!(
        out,
        "trial,theta_true_deg,theta_hat_deg,range_hat_m,x_hat,y_hat"
    )
    .map_err(io_err("write", path))?;
    for record in records {
        let Some(estimate) = record.estimate else {
            continue;
        };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            record.trial_index,
            record.true_angle_deg,
            estimate.angle_deg,
            estimate.range_m,
            estimate.position.x,
            estimate.position.y
        )
        .map_err(io_err("write", path))?;
    }
    out.flush().map_err(io_err("write", path))
}

fn write_sweeps(records: &[TrialRecord], path: &PathBuf) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "trial,sample,ap_index,angle_deg,rss_db").map_err(io_err("write", path))?;
    for record in records {
        let Some(series) = &record.series else {
            continue;
        };
        for sweep in series {
            for ap in 0..sweep.num_aps() {
                for j in 0..sweep.num_angles() {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        record.trial_index,
                        sweep.sample_index,
                        ap,
                        sweep.angle_deg(j),
                        sweep.rss(ap, j).db()
                    )
                    .map_err(io_err("write", path))?;
                }
            }
        }
    }
    out.flush().map_err(io_err("write", path))
}
