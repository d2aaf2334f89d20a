//! Desk-scale simulator for RSS-based intrusion detection and localization
//! over a simulated ISAC/Wi-Fi network.
//!
//! The pipeline mirrors how such a system operates in a smart-home setting:
//!
//! 1. [`channel`] models log-distance propagation between fixed access
//!    points and an anchor node, with Gaussian fading and shadowing.
//! 2. [`locate`] trilaterates the anchor from RSS-derived ranges.
//! 3. [`scenario`] synthesizes beam-sweep RSS matrices with and without an
//!    obstructing intruder.
//! 4. [`detector`] runs coarse (windowed row-mean) and fine (per-bearing
//!    deviation) detection.
//! 5. [`localizer`] turns a detected deviation pattern into an intruder
//!    bearing, range, and position.
//! 6. [`experiment`] orchestrates Monte-Carlo trials and [`export`] writes
//!    metrics and curves to disk.
//!
//! [`ofdm`] provides the transmit-waveform transform pair; it is kept
//! decoupled from the dB-domain RSS pipeline.

pub mod angles;
pub mod channel;
pub mod detector;
pub mod error;
pub mod experiment;
pub mod export;
pub mod localizer;
pub mod locate;
pub mod ofdm;
pub mod scenario;

pub use channel::{Position2D, RadioConfig, RssDb};
pub use detector::{DetectionConfig, DetectionOutcome};
pub use error::{Error, Result};
pub use experiment::{
    run_experiment, run_trial, ExperimentConfig, ExperimentOutput, TrialMetrics, TrialRecord,
};
pub use export::export_results;
pub use localizer::IntruderEstimate;
pub use locate::{ApConstellation, LocalizationFix};
pub use scenario::{BeamSweep, ScenarioConfig};
