//! Radio propagation primitives: log-distance path loss, baseline RSS,
//! fading/shadowing draws, and the RSS-to-distance inverse used by
//! trilateration.
//!
//! All power quantities are in dB. The baseline model is
//! `rss = P_t - 10*n*log10(4*pi*d/lambda) + noise_power_db + calibration_offset_db`,
//! a sum of dB terms with no random component. Randomness enters only through
//! the explicit fading/shadowing draws.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance at which the default radio configuration is calibrated.
pub const CALIBRATION_DISTANCE_M: f64 = 5.0;

/// Baseline RSS pinned at [`CALIBRATION_DISTANCE_M`] by the default
/// configuration; typical of indoor Wi-Fi at short range.
pub const CALIBRATION_RSS_DB: f64 = -39.0;

/// Planar coordinate of an access point, anchor node, or intruder, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position2D {
    pub x: f64,
    pub y: f64,
}

impl Position2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Both coordinates are finite (no NaN or infinity).
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Received signal strength in dB.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RssDb(pub f64);

impl RssDb {
    pub fn db(self) -> f64 {
        self.0
    }
}

/// Radio-link parameters shared by every AP-to-anchor path.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RadioConfig {
    /// Transmit power P_t (dBm).
    pub transmit_power_db: f64,
    /// Carrier wavelength (m).
    pub wavelength: f64,
    /// Log-distance path-loss exponent n (2 = free space).
    pub path_loss_exponent: f64,
    /// Std dev of the multipath fading term (dB).
    pub sigma_fading: f64,
    /// Std dev of the shadowing term (dB).
    pub sigma_shadowing: f64,
    /// Noise power term added directly in the dB-domain sum.
    pub noise_power_db: f64,
    /// Constant offset pinning the absolute RSS level; the default anchors
    /// the baseline at [`CALIBRATION_DISTANCE_M`] to [`CALIBRATION_RSS_DB`].
    pub calibration_offset_db: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        let mut cfg = Self {
            transmit_power_db: 20.0,
            wavelength: 0.125,
            path_loss_exponent: 3.0,
            sigma_fading: 1.5,
            sigma_shadowing: 1.0,
            noise_power_db: -90.0,
            calibration_offset_db: 0.0,
        };
        let uncalibrated = cfg.transmit_power_db
            - path_loss_db(CALIBRATION_DISTANCE_M, &cfg).expect("positive calibration distance")
            + cfg.noise_power_db;
        cfg.calibration_offset_db = CALIBRATION_RSS_DB - uncalibrated;
        cfg
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.wavelength.is_finite() || self.wavelength <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "wavelength must be > 0, got {}",
                self.wavelength
            )));
        }
        if !self.path_loss_exponent.is_finite() || self.path_loss_exponent < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "path_loss_exponent must be >= 1, got {}",
                self.path_loss_exponent
            )));
        }
        if !self.sigma_fading.is_finite() || self.sigma_fading < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sigma_fading must be >= 0, got {}",
                self.sigma_fading
            )));
        }
        if !self.sigma_shadowing.is_finite() || self.sigma_shadowing < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sigma_shadowing must be >= 0, got {}",
                self.sigma_shadowing
            )));
        }
        for (name, v) in [
            ("transmit_power_db", self.transmit_power_db),
            ("noise_power_db", self.noise_power_db),
            ("calibration_offset_db", self.calibration_offset_db),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Straight-line distance between two planar points.
pub fn euclidean_distance(p: Position2D, q: Position2D) -> f64 {
    ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt()
}

/// Log-distance path loss `10*n*log10(4*pi*d/lambda)` in dB.
///
/// Strictly increasing in `d`; zero at the reference distance `lambda/(4*pi)`.
pub fn path_loss_db(distance_m: f64, cfg: &RadioConfig) -> Result<f64> {
    if !distance_m.is_finite() || distance_m <= 0.0 {
        return Err(Error::DegenerateDistance(distance_m));
    }
    Ok(10.0 * cfg.path_loss_exponent * (4.0 * PI * distance_m / cfg.wavelength).log10())
}

/// Deterministic baseline RSS observed at the anchor from one AP.
pub fn baseline_rss(ap: Position2D, anchor: Position2D, cfg: &RadioConfig) -> Result<RssDb> {
    let d = euclidean_distance(ap, anchor);
    let loss = path_loss_db(d, cfg)?;
    Ok(RssDb(
        cfg.transmit_power_db - loss + cfg.noise_power_db + cfg.calibration_offset_db,
    ))
}

/// Analytic inverse of [`baseline_rss`]: the distance at which the baseline
/// model would produce `rss`. Any finite RSS maps to a positive distance.
pub fn rss_to_distance(rss: RssDb, cfg: &RadioConfig) -> f64 {
    let loss = cfg.transmit_power_db + cfg.noise_power_db + cfg.calibration_offset_db - rss.db();
    cfg.wavelength / (4.0 * PI) * 10f64.powf(loss / (10.0 * cfg.path_loss_exponent))
}

/// Zero-mean Gaussian multipath fading draw with std dev `sigma_fading` (dB).
///
/// Exactly 0.0 when sigma is zero; a fixed seed reproduces the sequence.
pub fn draw_fading<R: Rng + ?Sized>(cfg: &RadioConfig, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z * cfg.sigma_fading
}

/// Zero-mean Gaussian shadowing draw with std dev `sigma_shadowing` (dB).
pub fn draw_shadowing<R: Rng + ?Sized>(cfg: &RadioConfig, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z * cfg.sigma_shadowing
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn flat_config() -> RadioConfig {
        // P_t = 0, noise = 0, no calibration: RSS is pure negated path loss.
        RadioConfig {
            transmit_power_db: 0.0,
            noise_power_db: 0.0,
            calibration_offset_db: 0.0,
            ..RadioConfig::default()
        }
    }

    #[test]
    fn euclidean_distance_cases() {
        let d = euclidean_distance(Position2D::new(0.0, 0.0), Position2D::new(3.0, 4.0));
        assert_eq!(d, 5.0);
        let d = euclidean_distance(Position2D::new(2.0, 7.0), Position2D::new(2.0, 7.0));
        assert_eq!(d, 0.0);
        // Hand evaluation: sqrt((1-(-2))^2 + (1-5)^2) = sqrt(9+16) = 5.
        let d = euclidean_distance(Position2D::new(1.0, 1.0), Position2D::new(-2.0, 5.0));
        assert_eq!(d, 5.0);
    }

    #[test]
    fn path_loss_reference_distance_is_zero() {
        let cfg = RadioConfig::default();
        let d_ref = cfg.wavelength / (4.0 * PI);
        assert!(path_loss_db(d_ref, &cfg).unwrap().abs() < 1e-12);
    }

    #[test]
    fn path_loss_one_decade_at_exponent_two() {
        let cfg = RadioConfig {
            path_loss_exponent: 2.0,
            ..RadioConfig::default()
        };
        let d = 10.0 * cfg.wavelength / (4.0 * PI);
        let loss = path_loss_db(d, &cfg).unwrap();
        assert!((loss - 20.0).abs() < 1e-12);
    }

    #[test]
    fn path_loss_matches_scalar_oracle() {
        // Independent evaluation of 30*log10(4*pi*5/0.125).
        let cfg = RadioConfig {
            wavelength: 0.125,
            path_loss_exponent: 3.0,
            ..RadioConfig::default()
        };
        let loss = path_loss_db(5.0, &cfg).unwrap();
        assert!((loss - 81.038_095_660_501_76).abs() < 1e-9);
    }

    #[test]
    fn path_loss_rejects_degenerate_distance() {
        let cfg = RadioConfig::default();
        assert!(matches!(
            path_loss_db(0.0, &cfg),
            Err(Error::DegenerateDistance(_))
        ));
        assert!(matches!(
            path_loss_db(-1.0, &cfg),
            Err(Error::DegenerateDistance(_))
        ));
        assert!(matches!(
            path_loss_db(f64::NAN, &cfg),
            Err(Error::DegenerateDistance(_))
        ));
    }

    #[test]
    fn baseline_rss_is_calibrated_at_five_meters() {
        let cfg = RadioConfig::default();
        let rss = baseline_rss(Position2D::new(0.0, 0.0), Position2D::new(5.0, 0.0), &cfg).unwrap();
        assert!((rss.db() - CALIBRATION_RSS_DB).abs() < 1e-9);
    }

    #[test]
    fn baseline_rss_zero_at_reference_distance_without_power() {
        let cfg = flat_config();
        let d_ref = cfg.wavelength / (4.0 * PI);
        let rss =
            baseline_rss(Position2D::new(0.0, 0.0), Position2D::new(d_ref, 0.0), &cfg).unwrap();
        assert!(rss.db().abs() < 1e-12);
    }

    #[test]
    fn baseline_rss_rejects_coincident_positions() {
        let cfg = RadioConfig::default();
        let p = Position2D::new(1.0, 2.0);
        assert!(matches!(
            baseline_rss(p, p, &cfg),
            Err(Error::DegenerateDistance(_))
        ));
    }

    #[test]
    fn doubling_distance_drops_rss_by_three_exponent_decades_of_two() {
        // At n = 3 the drop is 30*log10(2) dB, independent of absolute level.
        let cfg = RadioConfig::default();
        let an = Position2D::new(0.0, 0.0);
        let near = baseline_rss(Position2D::new(4.0, 0.0), an, &cfg).unwrap();
        let far = baseline_rss(Position2D::new(8.0, 0.0), an, &cfg).unwrap();
        assert!((near.db() - far.db() - 9.030_899_869_919_436).abs() < 1e-9);
    }

    #[test]
    fn rss_to_distance_round_trip() {
        let cfg = RadioConfig::default();
        let an = Position2D::new(0.0, 0.0);
        let rss = baseline_rss(Position2D::new(5.0, 0.0), an, &cfg).unwrap();
        let d = rss_to_distance(rss, &cfg);
        assert!((d - 5.0).abs() < 5.0 * 1e-9);
    }

    #[test]
    fn rss_to_distance_zero_loss_inverse() {
        let cfg = RadioConfig::default();
        let rss = RssDb(cfg.transmit_power_db + cfg.noise_power_db + cfg.calibration_offset_db);
        let d = rss_to_distance(rss, &cfg);
        assert!((d - cfg.wavelength / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn noise_draws_are_zero_at_zero_sigma() {
        let cfg = RadioConfig {
            sigma_fading: 0.0,
            sigma_shadowing: 0.0,
            ..RadioConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(draw_fading(&cfg, &mut rng), 0.0);
            assert_eq!(draw_shadowing(&cfg, &mut rng), 0.0);
        }
    }

    #[test]
    fn noise_draws_match_configured_moments() {
        let cfg = RadioConfig {
            sigma_fading: 2.0,
            ..RadioConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| draw_fading(&cfg, &mut rng)).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.05, "sample mean {mean}");
        assert!((var.sqrt() - 2.0).abs() < 0.05, "sample std {}", var.sqrt());
    }

    #[test]
    fn noise_draws_are_deterministic_per_seed() {
        let cfg = RadioConfig::default();
        let draw = |seed: u64| -> Vec<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..32).map(|_| draw_fading(&cfg, &mut rng)).collect()
        };
        assert_eq!(draw(99), draw(99));
        assert_ne!(draw(99), draw(100));
    }

    #[test]
    fn default_config_validates() {
        RadioConfig::default().validate().unwrap();
    }

    #[test]
    fn validate_rejects_bad_fields() {
        let bad = RadioConfig {
            wavelength: 0.0,
            ..RadioConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = RadioConfig {
            sigma_fading: -1.0,
            ..RadioConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = RadioConfig {
            path_loss_exponent: 0.5,
            ..RadioConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
