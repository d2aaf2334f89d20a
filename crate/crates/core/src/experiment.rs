//! Monte-Carlo experiment orchestration: per-trial detection pipeline,
//! metric aggregation, and cumulative curves.
//!
//! Each trial draws its randomness from a dedicated ChaCha stream keyed by
//! `(seed, trial_index)`, so trials are order-independent and can run in
//! parallel without perturbing results.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::circular_diff_deg;
use crate::detector::{
    coarse_detect, deviation_matrix, fine_detect_on, DetectionConfig, DetectionOutcome,
};
use crate::error::{Error, Result};
use crate::localizer::{localize_intruder, rmse_meters, IntruderEstimate};
use crate::ofdm;
use crate::scenario::{generate_time_series, BeamSweep, ScenarioConfig};

/// Full configuration of one Monte-Carlo experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub detection: DetectionConfig,
    pub trials: usize,
    /// Fraction of trials that contain an intruder.
    pub intrusion_prevalence: f64,
    /// Bearing error (degrees) within which a detection scores as correct.
    pub angle_tolerance: f64,
    pub seed: u64,
    /// Retain per-trial sweeps so they can be exported.
    pub emit_sweeps: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            detection: DetectionConfig::default(),
            trials: 100,
            intrusion_prevalence: 0.5,
            angle_tolerance: 20.0,
            seed: 1,
            emit_sweeps: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.detection.validate()?;
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.intrusion_prevalence) {
            return Err(Error::InvalidConfig(format!(
                "intrusion_prevalence must be in [0, 1], got {}",
                self.intrusion_prevalence
            )));
        }
        if !self.angle_tolerance.is_finite() || self.angle_tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "angle_tolerance must be > 0, got {}",
                self.angle_tolerance
            )));
        }
        Ok(())
    }

    /// Loads a TOML config file whose keys mirror this struct's fields.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            action: "read",
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| Error::ConfigParse {
            path: path.to_path_buf(),
            source: Box::new(source),
        })
    }
}

/// Everything observed in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub intruder_present: bool,
    pub true_angle_deg: f64,
    pub coarse: DetectionOutcome,
    /// Fine-stage outcome; `None` whenever the coarse gate did not trigger.
    pub fine: Option<DetectionOutcome>,
    /// Localization result; `None` unless the fine stage detected.
    pub estimate: Option<IntruderEstimate>,
    /// Generated sweeps, retained only when `emit_sweeps` is set.
    pub series: Option<Vec<BeamSweep>>,
}

impl TrialRecord {
    /// The trial's end-to-end detection decision.
    pub fn detected(&self) -> bool {
        self.coarse.detected && self.fine.is_some_and(|f| f.detected)
    }
}

/// How a trial scores against ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialClass {
    CorrectDetection,
    FalseAlarm,
    Miss,
    TrueRejection,
}

/// Scores one trial: a detection is correct only when an intruder was
/// present and the estimated bearing lands within `angle_tolerance` of truth.
pub fn classify_trial(record: &TrialRecord, angle_tolerance: f64) -> TrialClass {
    match (record.intruder_present, record.detected()) {
        (true, true) => {
            let angle_ok = record.estimate.is_some_and(|estimate| {
                circular_diff_deg(estimate.angle_deg, record.true_angle_deg) <= angle_tolerance
            });
            if angle_ok {
                TrialClass::CorrectDetection
            } else {
                TrialClass::Miss
            }
        }
        (true, false) => TrialClass::Miss,
        (false, true) => TrialClass::FalseAlarm,
        (false, false) => TrialClass::TrueRejection,
    }
}

/// One point of the cumulative detection-performance curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub trial_index: usize,
    /// Correctly scored trials so far (correct detections plus true
    /// rejections).
    pub cum_correct: usize,
    pub cum_false_alarms: usize,
    /// Angle RMSE in meters over the correct detections so far.
    pub running_rmse_m: f64,
}

/// Aggregate experiment metrics.
#[derive(Debug, Clone, Serialize)]
pub struct TrialMetrics {
    pub trials: usize,
    pub correct_detections: usize,
    pub false_alarms: usize,
    pub misses: usize,
    pub true_rejections: usize,
    pub accuracy: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub angle_rmse_m: f64,
    #[serde(skip)]
    pub cumulative_curves: Vec<CurvePoint>,
}

/// Metrics plus the per-trial records they were computed from.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub metrics: TrialMetrics,
    pub records: Vec<TrialRecord>,
}

/// Independent deterministic stream for one trial of one experiment.
pub fn trial_rng(seed: u64, trial_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index as u64 + 1);
    rng
}

/// Runs one trial of the detection/localization pipeline.
///
/// The trailing window of no-intrusion sweeps plus the current sweep are
/// generated first; the coarse gate then decides whether the current sweep
/// is examined at fine (per-bearing) resolution, and only a fine detection
/// proceeds to localization.
pub fn run_trial(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialRecord> {
    cfg.validate()?;
    let mut rng = trial_rng(cfg.seed, trial_index);
    let intruder_present = rng.random::<f64>() < cfg.intrusion_prevalence;

    let mut window_cfg = cfg.scenario.clone();
    window_cfg.samples = cfg.detection.mean_window;
    let mut series = generate_time_series(&window_cfg, &mut rng, false)?;
    window_cfg.samples = 1;
    let mut current = generate_time_series(&window_cfg, &mut rng, intruder_present)?;
    if let Some(sweep) = current.first_mut() {
        sweep.sample_index = cfg.detection.mean_window;
    }
    series.append(&mut current);

    let coarse = coarse_detect(&series, &cfg.detection)?;
    let mut fine = None;
    let mut estimate = None;
    if coarse.detected {
        let sweep = series.last().expect("series holds the current sweep");
        let deviations = deviation_matrix(sweep);
        let outcome = fine_detect_on(&deviations, cfg.detection.tau);
        if outcome.detected {
            // A failed localization (for example a positive noise spike with
            // no coherent drop) leaves the estimate empty but keeps the
            // detection outcome.
            estimate = localize_intruder(
                sweep,
                &deviations,
                cfg.detection.tau,
                &cfg.scenario.radio,
                &cfg.scenario,
            )
            .ok();
        }
        fine = Some(outcome);
    }

    Ok(TrialRecord {
        trial_index,
        intruder_present,
        true_angle_deg: cfg.scenario.intruder_angle,
        coarse,
        fine,
        estimate,
        series: cfg.emit_sweeps.then_some(series),
    })
}

/// Runs every trial (in parallel) and aggregates metrics and curves.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    log::info!(
        "running {} trials (seed {}, prevalence {})",
        cfg.trials,
        cfg.seed,
        cfg.intrusion_prevalence
    );
    if let Ok(energy) = ofdm::ofdm_modulate(&unit_pilot()).map(|s| ofdm::symbol_energy(&s)) {
        log::info!(
            "ofdm pilot: {} subcarriers, per-symbol transmit energy {energy:.6}",
            ofdm::DEFAULT_SUBCARRIERS
        );
    }

    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial_index| run_trial(cfg, trial_index))
        .collect::<Result<_>>()?;

    Ok(ExperimentOutput {
        metrics: aggregate(cfg, &records),
        records,
    })
}

fn unit_pilot() -> ofdm::SubcarrierSymbols {
    ofdm::SubcarrierSymbols::new(vec![
        num_complex::Complex64::new(1.0, 0.0);
        ofdm::DEFAULT_SUBCARRIERS
    ])
}

fn aggregate(cfg: &ExperimentConfig, records: &[TrialRecord]) -> TrialMetrics {
    let mut correct_detections = 0usize;
    let mut false_alarms = 0usize;
    let mut misses = 0usize;
    let mut true_rejections = 0usize;
    let mut rmse_pairs: Vec<(f64, f64)> = Vec::new();
    let mut range_sum = 0.0f64;
    let mut curves = Vec::with_capacity(records.len());

    for record in records {
        match classify_trial(record, cfg.angle_tolerance) {
            TrialClass::CorrectDetection => {
                correct_detections += 1;
                let estimate = record.estimate.expect("correct detection has an estimate");
                rmse_pairs.push((record.true_angle_deg, estimate.angle_deg));
                range_sum += estimate.range_m;
            }
            TrialClass::FalseAlarm => false_alarms += 1,
            TrialClass::Miss => misses += 1,
            TrialClass::TrueRejection => true_rejections += 1,
        }
        let running_rmse_m = if rmse_pairs.is_empty() {
            0.0
        } else {
            let mean_range = range_sum / rmse_pairs.len() as f64;
            rmse_meters(&rmse_pairs, mean_range).expect("nonempty pairs, positive range")
        };
        curves.push(CurvePoint {
            trial_index: record.trial_index,
            cum_correct: correct_detections + true_rejections,
            cum_false_alarms: false_alarms,
            running_rmse_m,
        });
    }

    let trials = records.len();
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    TrialMetrics {
        trials,
        correct_detections,
        false_alarms,
        misses,
        true_rejections,
        accuracy: ratio(correct_detections + true_rejections, trials),
        fpr: ratio(false_alarms, false_alarms + true_rejections),
        fnr: ratio(misses, misses + correct_detections),
        angle_rmse_m: curves.last().map_or(0.0, |c| c.running_rmse_m),
        cumulative_curves: curves,
    }
}
