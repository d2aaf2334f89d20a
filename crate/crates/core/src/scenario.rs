//! Synthetic beam-sweep RSS generation for the no-intrusion and intrusion
//! scenarios.
//!
//! Each sweep is a K x A matrix: one row per access point, one column per
//! sweep bearing at the anchor. A cell in the no-intrusion scenario is the
//! deterministic baseline RSS for that AP plus fresh fading and shadowing
//! draws. In the intrusion scenario, cells whose bearing falls inside a
//! circular window around the intruder bearing, on APs whose anchor-to-AP
//! path passes near the intruder, lose `delta_rss` dB.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angles::circular_diff_deg;
use crate::channel::{
    baseline_rss, draw_fading, draw_shadowing, euclidean_distance, Position2D, RadioConfig, RssDb,
};
use crate::error::{Error, Result};
use crate::locate::ApConstellation;

/// How an AP qualifies as obstructed by the intruder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntruderGate {
    /// The intruder lies within `distance_threshold` of the anchor-to-AP
    /// segment (default: an intruder obstructs the paths it stands near).
    PathProximity,
    /// The anchor-to-AP distance itself is under `distance_threshold`,
    /// independent of where the intruder stands.
    AnchorApDistance,
}

/// Shape of the RSS reduction across the angular window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionProfile {
    /// Full `delta_rss` on every in-window cell.
    Step,
    /// Raised-cosine taper: full `delta_rss` at the window center, zero at
    /// the window edges.
    RaisedCosine,
}

/// Geometry, intruder model, and sweep parameters for one scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    /// Access-point positions (K >= 3).
    pub constellation: ApConstellation,
    /// Anchor-node position; sweep bearings are measured here.
    pub anchor: Position2D,
    /// Number of sweep angles A per full circle.
    pub sweep_resolution: usize,
    /// Ground-truth intruder bearing from the anchor (degrees).
    pub intruder_angle: f64,
    /// Ground-truth intruder range from the anchor (m).
    pub intruder_distance: f64,
    /// Magnitude of the RSS reduction an obstructing intruder causes (dB).
    pub delta_rss: f64,
    /// Distance threshold below which the intruder affects a link (m).
    pub distance_threshold: f64,
    /// Half-width of the affected angular window (degrees).
    pub angular_window_halfwidth: f64,
    /// Sweeps per generated time series.
    pub samples: usize,
    /// Range the localizer reports when the measured drop equals
    /// `delta_rss` (m).
    pub reference_obstruction_distance: f64,
    pub gate: IntruderGate,
    pub reduction_profile: ReductionProfile,
    pub radio: RadioConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        // Three APs 5 m from the anchor on evenly spread bearings, with the
        // intruder 2 m out on the 120-degree bearing: directly on the path
        // to the second AP.
        let anchor = Position2D::new(0.0, 0.0);
        let constellation = ApConstellation::new(
            [0.0f64, 120.0, 240.0]
                .iter()
                .map(|bearing| {
                    let r = bearing.to_radians();
                    Position2D::new(anchor.x + 5.0 * r.cos(), anchor.y + 5.0 * r.sin())
                })
                .collect(),
        );
        Self {
            constellation,
            anchor,
            sweep_resolution: 360,
            intruder_angle: 120.0,
            intruder_distance: 2.0,
            delta_rss: 10.0,
            distance_threshold: 3.0,
            angular_window_halfwidth: 10.0,
            samples: 5,
            reference_obstruction_distance: 2.0,
            gate: IntruderGate::PathProximity,
            reduction_profile: ReductionProfile::Step,
            radio: RadioConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.constellation.validate()?;
        self.radio.validate()?;
        if !self.anchor.is_finite() {
            return Err(Error::InvalidConfig("anchor position is not finite".into()));
        }
        if self.sweep_resolution < 8 {
            return Err(Error::InvalidConfig(format!(
                "sweep_resolution must be >= 8, got {}",
                self.sweep_resolution
            )));
        }
        if !(0.0..360.0).contains(&self.intruder_angle) {
            return Err(Error::InvalidConfig(format!(
                "intruder_angle must be in [0, 360), got {}",
                self.intruder_angle
            )));
        }
        if !self.intruder_distance.is_finite() || self.intruder_distance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "intruder_distance must be > 0, got {}",
                self.intruder_distance
            )));
        }
        if !self.delta_rss.is_finite() || self.delta_rss < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "delta_rss must be >= 0, got {}",
                self.delta_rss
            )));
        }
        if !self.distance_threshold.is_finite() || self.distance_threshold <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "distance_threshold must be > 0, got {}",
                self.distance_threshold
            )));
        }
        if !self.angular_window_halfwidth.is_finite()
            || self.angular_window_halfwidth <= 0.0
            || self.angular_window_halfwidth >= 90.0
        {
            return Err(Error::InvalidConfig(format!(
                "angular_window_halfwidth must be in (0, 90), got {}",
                self.angular_window_halfwidth
            )));
        }
        if self.samples < 1 {
            return Err(Error::InvalidConfig("samples must be >= 1".into()));
        }
        if !self.reference_obstruction_distance.is_finite()
            || self.reference_obstruction_distance <= 0.0
        {
            return Err(Error::InvalidConfig(format!(
                "reference_obstruction_distance must be > 0, got {}",
                self.reference_obstruction_distance
            )));
        }
        for (i, ap) in self.constellation.positions().iter().enumerate() {
            if euclidean_distance(*ap, self.anchor) <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "access point {i} coincides with the anchor"
                )));
            }
        }
        Ok(())
    }

    /// Ground-truth intruder position implied by the bearing/range fields.
    pub fn intruder_position(&self) -> Position2D {
        let r = self.intruder_angle.to_radians();
        Position2D::new(
            self.anchor.x + self.intruder_distance * r.cos(),
            self.anchor.y + self.intruder_distance * r.sin(),
        )
    }

    /// Bearing of sweep column `j`, in degrees.
    pub fn angle_deg(&self, j: usize) -> f64 {
        j as f64 * 360.0 / self.sweep_resolution as f64
    }

    /// Which APs the intruder currently obstructs, per the configured gate.
    pub fn gated_aps(&self) -> Vec<bool> {
        let intruder = self.intruder_position();
        self.constellation
            .positions()
            .iter()
            .map(|ap| match self.gate {
                IntruderGate::PathProximity => {
                    point_segment_distance(intruder, self.anchor, *ap) < self.distance_threshold
                }
                IntruderGate::AnchorApDistance => {
                    euclidean_distance(self.anchor, *ap) < self.distance_threshold
                }
            })
            .collect()
    }

    /// RSS reduction applied at bearing `angle_deg` on a gated AP.
    fn reduction_db(&self, angle_deg: f64) -> f64 {
        let offset = circular_diff_deg(angle_deg, self.intruder_angle);
        if offset > self.angular_window_halfwidth {
            return 0.0;
        }
        match self.reduction_profile {
            ReductionProfile::Step => self.delta_rss,
            ReductionProfile::RaisedCosine => {
                let phase = std::f64::consts::PI * offset / self.angular_window_halfwidth;
                self.delta_rss * 0.5 * (1.0 + phase.cos())
            }
        }
    }
}

/// Shortest distance from point `p` to the segment `a`..`b`.
fn point_segment_distance(p: Position2D, a: Position2D, b: Position2D) -> f64 {
    let ab = (b.x - a.x, b.y - a.y);
    let ap = (p.x - a.x, p.y - a.y);
    let len_sq = ab.0 * ab.0 + ab.1 * ab.1;
    if len_sq == 0.0 {
        return euclidean_distance(p, a);
    }
    let t = ((ap.0 * ab.0 + ap.1 * ab.1) / len_sq).clamp(0.0, 1.0);
    euclidean_distance(p, Position2D::new(a.x + t * ab.0, a.y + t * ab.1))
}

/// One beam sweep: RSS per (AP, bearing) cell, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamSweep {
    values: Vec<RssDb>,
    num_aps: usize,
    num_angles: usize,
    /// Position of this sweep in its time series.
    pub sample_index: usize,
}

impl BeamSweep {
    pub fn num_aps(&self) -> usize {
        self.num_aps
    }

    pub fn num_angles(&self) -> usize {
        self.num_angles
    }

    pub fn rss(&self, ap: usize, angle_index: usize) -> RssDb {
        self.values[ap * self.num_angles + angle_index]
    }

    pub fn row(&self, ap: usize) -> &[RssDb] {
        &self.values[ap * self.num_angles..(ap + 1) * self.num_angles]
    }

    /// Bearing of column `j`, in degrees.
    pub fn angle_deg(&self, j: usize) -> f64 {
        j as f64 * 360.0 / self.num_angles as f64
    }

    /// Mean RSS of one AP's row, in dB.
    pub fn row_mean_db(&self, ap: usize) -> f64 {
        let row = self.row(ap);
        row.iter().map(|r| r.db()).sum::<f64>() / row.len() as f64
    }

    /// Builds a sweep directly from cell values; rows must share one length.
    pub fn from_rows(rows: Vec<Vec<f64>>, sample_index: usize) -> Result<Self> {
        let num_aps = rows.len();
        let num_angles = rows.first().map_or(0, Vec::len);
        if num_aps == 0 || num_angles == 0 {
            return Err(Error::EmptyInput);
        }
        let mut values = Vec::with_capacity(num_aps * num_angles);
        for row in &rows {
            if row.len() != num_angles {
                return Err(Error::InvalidConfig(
                    "all sweep rows must have the same length".into(),
                ));
            }
            if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "sweep entries must be finite, got {bad}"
                )));
            }
            values.extend(row.iter().map(|&v| RssDb(v)));
        }
        Ok(Self {
            values,
            num_aps,
            num_angles,
            sample_index,
        })
    }
}

fn generate_sweep<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    rng: &mut R,
    with_intruder: bool,
    sample_index: usize,
) -> Result<BeamSweep> {
    let num_aps = cfg.constellation.len();
    let num_angles = cfg.sweep_resolution;

    let baselines: Vec<f64> = cfg
        .constellation
        .positions()
        .iter()
        .map(|ap| baseline_rss(*ap, cfg.anchor, &cfg.radio).map(RssDb::db))
        .collect::<Result<_>>()?;
    let gated = if with_intruder {
        cfg.gated_aps()
    } else {
        vec![false; num_aps]
    };

    let mut values = Vec::with_capacity(num_aps * num_angles);
    for (&baseline, &is_gated) in baselines.iter().zip(&gated) {
        for j in 0..num_angles {
            let fading = draw_fading(&cfg.radio, rng);
            let shadowing = draw_shadowing(&cfg.radio, rng);
            let reduction = if is_gated {
                cfg.reduction_db(cfg.angle_deg(j))
            } else {
                0.0
            };
            values.push(RssDb(baseline - reduction + fading + shadowing));
        }
    }

    Ok(BeamSweep {
        values,
        num_aps,
        num_angles,
        sample_index,
    })
}

/// Sweep with no intruder: baseline plus fresh fading/shadowing per cell.
pub fn generate_baseline_sweep<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    rng: &mut R,
) -> Result<BeamSweep> {
    cfg.validate()?;
    generate_sweep(cfg, rng, false, 0)
}

/// Sweep with the configured intruder obstructing its gated APs.
pub fn generate_intrusion_sweep<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    rng: &mut R,
) -> Result<BeamSweep> {
    cfg.validate()?;
    generate_sweep(cfg, rng, true, 0)
}

/// `cfg.samples` independent sweeps drawn sequentially from one stream.
pub fn generate_time_series<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    rng: &mut R,
    with_intruder: bool,
) -> Result<Vec<BeamSweep>> {
    cfg.validate()?;
    (0..cfg.samples)
        .map(|sample_index| generate_sweep(cfg, rng, with_intruder, sample_index))
        .collect()
}
