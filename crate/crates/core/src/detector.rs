//! Two-stage intrusion detection: a coarse gate on windowed row means and a
//! fine check on per-cell deviations from each AP's within-sweep mean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::BeamSweep;

/// Detection thresholds and windowing.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectionConfig {
    /// Fine-stage threshold on per-cell deviations (dB).
    pub tau: f64,
    /// Coarse-stage threshold on row-mean drops (dB). Row means dilute the
    /// windowed reduction by w/A, so this sits well below `tau`.
    pub tau_coarse: f64,
    /// Trailing sweeps averaged into the coarse reference.
    pub mean_window: usize,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            tau: 5.0,
            tau_coarse: 0.3,
            mean_window: 5,
        }
    }
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.tau.is_finite() || self.tau <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tau must be > 0, got {}",
                self.tau
            )));
        }
        if !self.tau_coarse.is_finite() || self.tau_coarse <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tau_coarse must be > 0, got {}",
                self.tau_coarse
            )));
        }
        if self.mean_window < 1 {
            return Err(Error::InvalidConfig("mean_window must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a detection stage.
///
/// `detected` holds iff `max_deviation` strictly exceeds the stage threshold.
/// The triggering fields identify the argmax cell and are populated only on
/// detection; the coarse stage has no angular resolution, so it never fills
/// `triggering_angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionOutcome {
    pub detected: bool,
    pub max_deviation: f64,
    pub triggering_ap: Option<usize>,
    pub triggering_angle: Option<f64>,
}

/// Absolute deviations of each sweep cell from its row mean, same shape as
/// the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationMatrix {
    values: Vec<f64>,
    num_aps: usize,
    num_angles: usize,
}

impl DeviationMatrix {
    pub fn num_aps(&self) -> usize {
        self.num_aps
    }

    pub fn num_angles(&self) -> usize {
        self.num_angles
    }

    pub fn deviation(&self, ap: usize, angle_index: usize) -> f64 {
        self.values[ap * self.num_angles + angle_index]
    }

    pub fn row(&self, ap: usize) -> &[f64] {
        &self.values[ap * self.num_angles..(ap + 1) * self.num_angles]
    }

    /// Bearing of column `j`, in degrees.
    pub fn angle_deg(&self, j: usize) -> f64 {
        j as f64 * 360.0 / self.num_angles as f64
    }

    /// Argmax cell as `(ap, angle_index, value)`; ties resolve to the lowest
    /// AP index, then the lowest angle.
    pub fn max_cell(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for ap in 0..self.num_aps {
            for j in 0..self.num_angles {
                let v = self.deviation(ap, j);
                if v > best.2 {
                    best = (ap, j, v);
                }
            }
        }
        best
    }
}

/// Per-cell deviation `|rss(i, j) - mean_j rss(i, :)|` for every AP row.
pub fn deviation_matrix(sweep: &BeamSweep) -> DeviationMatrix {
    let num_aps = sweep.num_aps();
    let num_angles = sweep.num_angles();
    let mut values = Vec::with_capacity(num_aps * num_angles);
    for ap in 0..num_aps {
        let mean = sweep.row_mean_db(ap);
        values.extend(sweep.row(ap).iter().map(|r| (r.db() - mean).abs()));
    }
    DeviationMatrix {
        values,
        num_aps,
        num_angles,
    }
}

/// Coarse stage: compares the latest sweep's row means against the trailing
/// mean of the previous `mean_window` sweeps and triggers on any AP whose
/// mean dropped by more than `tau_coarse` (one-sided; rises never trigger).
pub fn coarse_detect(series: &[BeamSweep], cfg: &DetectionConfig) -> Result<DetectionOutcome> {
    cfg.validate()?;
    if series.len() < cfg.mean_window + 1 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            window: cfg.mean_window,
        });
    }
    let latest = series.last().expect("nonempty series");
    let window = &series[series.len() - 1 - cfg.mean_window..series.len() - 1];

    let mut best_ap = 0usize;
    let mut max_drop = f64::NEG_INFINITY;
    for ap in 0..latest.num_aps() {
        let trailing = window.iter().map(|s| s.row_mean_db(ap)).sum::<f64>() / window.len() as f64;
        let drop = trailing - latest.row_mean_db(ap);
        if drop > max_drop {
            max_drop = drop;
            best_ap = ap;
        }
    }

    let detected = max_drop > cfg.tau_coarse;
    Ok(DetectionOutcome {
        detected,
        max_deviation: max_drop,
        triggering_ap: detected.then_some(best_ap),
        triggering_angle: None,
    })
}

/// Fine stage: triggers when the largest cell of the deviation matrix
/// strictly exceeds `tau`.
pub fn fine_detect(sweep: &BeamSweep, cfg: &DetectionConfig) -> DetectionOutcome {
    fine_detect_on(&deviation_matrix(sweep), cfg.tau)
}

/// Fine-stage decision on a precomputed deviation matrix.
pub fn fine_detect_on(deviations: &DeviationMatrix, tau: f64) -> DetectionOutcome {
    let (ap, angle_index, value) = deviations.max_cell();
    let detected = value > tau;
    DetectionOutcome {
        detected,
        max_deviation: value,
        triggering_ap: detected.then_some(ap),
        triggering_angle: detected.then(|| deviations.angle_deg(angle_index)),
    }
}
