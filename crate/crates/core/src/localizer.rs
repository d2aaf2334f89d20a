//! Intruder bearing, range, and position estimation from a detected
//! beam-sweep deviation pattern.
//!
//! The bearing is the circular mean of every supra-threshold cell on the
//! triggering AP's row; under noise the bare argmax is uniform over the
//! affected window, while the mean converges to the window center. The range
//! comes from a calibrated log-distance inversion of the measured in-window
//! drop, anchored so a drop of exactly `delta_rss` maps to the configured
//! reference obstruction distance. That mapping is a heuristic: the sweep
//! generator applies a fixed reduction regardless of intruder range, so
//! angle accuracy is the meaningful localization metric.

use serde::{Deserialize, Serialize};

use crate::angles::{circular_diff_deg, circular_mean_deg, wrap_deg};
use crate::channel::{Position2D, RadioConfig};
use crate::detector::DeviationMatrix;
use crate::error::{Error, Result};
use crate::scenario::{BeamSweep, ScenarioConfig};

/// Range below which the drop-to-range inversion is clamped (m).
pub const MIN_RANGE_M: f64 = 0.1;

/// Estimated intruder state relative to the anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntruderEstimate {
    /// Bearing from the anchor, degrees in [0, 360).
    pub angle_deg: f64,
    /// Range from the anchor (m).
    pub range_m: f64,
    pub position: Position2D,
}

/// Bearing estimate: circular mean of the supra-threshold cells on the row
/// of the globally strongest deviation.
pub fn estimate_angle(deviations: &DeviationMatrix, tau: f64) -> Result<f64> {
    let (ap, _, max_value) = deviations.max_cell();
    if max_value <= tau {
        return Err(Error::NoCellAboveThreshold(tau));
    }
    let supra = (0..deviations.num_angles())
        .filter(|&j| deviations.deviation(ap, j) > tau)
        .map(|j| deviations.angle_deg(j));
    circular_mean_deg(supra).ok_or(Error::NoCellAboveThreshold(tau))
}

/// Measured in-window drop on the triggering row: mean RSS of the cells
/// outside the supra-threshold set minus mean RSS inside it (dB).
pub fn window_drop_db(sweep: &BeamSweep, deviations: &DeviationMatrix, tau: f64) -> Result<f64> {
    let (ap, _, max_value) = deviations.max_cell();
    if max_value <= tau {
        return Err(Error::NoCellAboveThreshold(tau));
    }
    let mut inside = (0.0, 0usize);
    let mut outside = (0.0, 0usize);
    for j in 0..deviations.num_angles() {
        let rss = sweep.rss(ap, j).db();
        if deviations.deviation(ap, j) > tau {
            inside = (inside.0 + rss, inside.1 + 1);
        } else {
            outside = (outside.0 + rss, outside.1 + 1);
        }
    }
    if outside.1 == 0 {
        // Every cell is supra-threshold; there is no reference level left.
        return Err(Error::InvalidDrop(0.0));
    }
    Ok(outside.0 / outside.1 as f64 - inside.0 / inside.1 as f64)
}

/// Maps a measured drop to a range through the log-distance law, anchored at
/// `(delta_rss -> reference_obstruction_distance)` and clamped to
/// `[MIN_RANGE_M, distance_threshold]`.
pub fn estimate_range(
    observed_drop_db: f64,
    radio: &RadioConfig,
    scenario: &ScenarioConfig,
) -> Result<f64> {
    if !observed_drop_db.is_finite() || observed_drop_db <= 0.0 {
        return Err(Error::InvalidDrop(observed_drop_db));
    }
    let exponent = -(observed_drop_db - scenario.delta_rss) / (10.0 * radio.path_loss_exponent);
    let range = scenario.reference_obstruction_distance * 10f64.powf(exponent);
    Ok(range.clamp(MIN_RANGE_M, scenario.distance_threshold))
}

/// Projects a bearing/range pair from the anchor into plane coordinates.
pub fn estimate_position(anchor: Position2D, angle_deg: f64, range_m: f64) -> Position2D {
    let r = angle_deg.to_radians();
    Position2D::new(anchor.x + range_m * r.cos(), anchor.y + range_m * r.sin())
}

/// Root-mean-square circular angle error converted to meters by arc length
/// at `range_m`. Pairs are `(true_deg, estimated_deg)`.
pub fn rmse_meters(pairs: &[(f64, f64)], range_m: f64) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !range_m.is_finite() || range_m <= 0.0 {
        return Err(Error::DegenerateDistance(range_m));
    }
    let mean_sq = pairs
        .iter()
        .map(|(truth, estimate)| circular_diff_deg(*truth, *estimate).to_radians().powi(2))
        .sum::<f64>()
        / pairs.len() as f64;
    Ok(mean_sq.sqrt() * range_m)
}

/// Full per-sweep localization: bearing from the supra-threshold set, range
/// from the measured drop, position from both.
pub fn localize_intruder(
    sweep: &BeamSweep,
    deviations: &DeviationMatrix,
    tau: f64,
    radio: &RadioConfig,
    scenario: &ScenarioConfig,
) -> Result<IntruderEstimate> {
    let angle_deg = wrap_deg(estimate_angle(deviations, tau)?);
    let drop = window_drop_db(sweep, deviations, tau)?;
    let range_m = estimate_range(drop, radio, scenario)?;
    Ok(IntruderEstimate {
        angle_deg,
        range_m,
        position: estimate_position(scenario.anchor, angle_deg, range_m),
    })
}
