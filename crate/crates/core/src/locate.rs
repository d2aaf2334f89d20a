//! Anchor-node trilateration from RSS-derived ranges to access points at
//! known positions.
//!
//! The solver subtracts the first range equation from the rest, which turns
//! `d_i = ||p - p_i||` into a linear system in (x, y), and solves it by least
//! squares. That is exact for consistent ranges. If the linear system is
//! numerically rank-deficient the solver falls back to a coarse-to-fine grid
//! search over the nonlinear range residuals.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::channel::{euclidean_distance, rss_to_distance, Position2D, RadioConfig, RssDb};
use crate::error::{Error, Result};

/// Known access-point positions used as trilateration anchors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ApConstellation {
    positions: Vec<Position2D>,
}

impl ApConstellation {
    pub fn new(positions: Vec<Position2D>) -> Self {
        Self { positions }
    }

    pub fn positions(&self) -> &[Position2D] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Checks the trilateration geometry: at least three finite anchors and
    /// some triple spanning a triangle whose area exceeds a scale-free
    /// tolerance (1e-9 of the squared constellation span).
    pub fn validate(&self) -> Result<()> {
        let k = self.positions.len();
        if k < 3 {
            return Err(Error::InsufficientAnchors(k));
        }
        for p in &self.positions {
            if !p.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "access-point position ({}, {}) is not finite",
                    p.x, p.y
                )));
            }
        }

        let mut span = 0.0f64;
        for i in 0..k {
            for j in (i + 1)..k {
                span = span.max(euclidean_distance(self.positions[i], self.positions[j]));
            }
        }
        let tolerance = 1e-9 * span * span;
        for i in 0..k {
            for j in (i + 1)..k {
                for l in (j + 1)..k {
                    if triangle_area(self.positions[i], self.positions[j], self.positions[l])
                        > tolerance
                    {
                        return Ok(());
                    }
                }
            }
        }
        Err(Error::AmbiguousGeometry)
    }
}

fn triangle_area(a: Position2D, b: Position2D, c: Position2D) -> f64 {
    0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)).abs()
}

/// Result of a trilateration solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationFix {
    pub position: Position2D,
    /// Root-sum-square of the range residuals `d_i - ||p - p_i||` (m);
    /// zero iff the ranges are exactly consistent.
    pub residual_norm: f64,
}

/// Least-squares position from ranges to the constellation anchors.
pub fn trilaterate(constellation: &ApConstellation, distances: &[f64]) -> Result<LocalizationFix> {
    constellation.validate()?;
    let positions = constellation.positions();
    let k = positions.len();
    if distances.len() != k {
        return Err(Error::InvalidConfig(format!(
            "expected {k} ranges for {k} access points, got {}",
            distances.len()
        )));
    }
    for (index, &value) in distances.iter().enumerate() {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidRange { index, value });
        }
    }

    let reference = positions[0];
    let d0 = distances[0];
    let rows = k - 1;
    let mut coeffs = DMatrix::zeros(rows, 2);
    let mut rhs = DVector::zeros(rows);
    for i in 1..k {
        let p = positions[i];
        coeffs[(i - 1, 0)] = 2.0 * (p.x - reference.x);
        coeffs[(i - 1, 1)] = 2.0 * (p.y - reference.y);
        rhs[i - 1] = d0 * d0 - distances[i] * distances[i] + p.x * p.x + p.y * p.y
            - reference.x * reference.x
            - reference.y * reference.y;
    }

    let svd = coeffs.svd(true, true);
    let max_sv = svd.singular_values.max();
    let min_sv = svd.singular_values.min();
    let position = if !min_sv.is_finite() || min_sv <= max_sv * 1e-12 {
        grid_refine(positions, distances)
    } else {
        let solution = svd
            .solve(&rhs, 0.0)
            .map_err(|e| Error::InvalidConfig(format!("least-squares solve failed: {e}")))?;
        Position2D::new(solution[0], solution[1])
    };

    Ok(LocalizationFix {
        residual_norm: range_residual_norm(positions, distances, position),
        position,
    })
}

/// Trilateration after inverting observed RSS levels into ranges through the
/// baseline channel model.
pub fn localize_anchor(
    constellation: &ApConstellation,
    observed_rss: &[RssDb],
    cfg: &RadioConfig,
) -> Result<LocalizationFix> {
    if observed_rss.len() != constellation.len() {
        return Err(Error::InvalidConfig(format!(
            "expected {} RSS observations, got {}",
            constellation.len(),
            observed_rss.len()
        )));
    }
    let distances: Vec<f64> = observed_rss
        .iter()
        .map(|rss| rss_to_distance(*rss, cfg))
        .collect();
    trilaterate(constellation, &distances)
}

fn range_residual_norm(positions: &[Position2D], distances: &[f64], p: Position2D) -> f64 {
    positions
        .iter()
        .zip(distances)
        .map(|(anchor, d)| (d - euclidean_distance(p, *anchor)).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Coarse-to-fine grid minimization of the squared range residuals, used when
/// the linearized system cannot be solved reliably.
fn grid_refine(positions: &[Position2D], distances: &[f64]) -> Position2D {
    let max_range = distances.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut x_min = positions.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) - max_range;
    let mut x_max = positions
        .iter()
        .map(|p| p.x)
        .fold(f64::NEG_INFINITY, f64::max)
        + max_range;
    let mut y_min = positions.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) - max_range;
    let mut y_max = positions
        .iter()
        .map(|p| p.y)
        .fold(f64::NEG_INFINITY, f64::max)
        + max_range;

    const CELLS: usize = 32;
    let mut best = Position2D::new(0.5 * (x_min + x_max), 0.5 * (y_min + y_max));
    let mut best_cost = f64::INFINITY;
    for _ in 0..14 {
        let dx = (x_max - x_min) / CELLS as f64;
        let dy = (y_max - y_min) / CELLS as f64;
        for ix in 0..=CELLS {
            for iy in 0..=CELLS {
                let candidate = Position2D::new(x_min + ix as f64 * dx, y_min + iy as f64 * dy);
                let cost = positions
                    .iter()
                    .zip(distances)
                    .map(|(anchor, d)| (d - euclidean_distance(candidate, *anchor)).powi(2))
                    .sum::<f64>();
                if cost < best_cost {
                    best_cost = cost;
                    best = candidate;
                }
            }
        }
        // Zoom in around the incumbent by a factor of four per level.
        let half_x = (x_max - x_min) / 8.0;
        let half_y = (y_max - y_min) / 8.0;
        x_min = best.x - half_x;
        x_max = best.x + half_x;
        y_min = best.y - half_y;
        y_max = best.y + half_y;
    }
    best
}
