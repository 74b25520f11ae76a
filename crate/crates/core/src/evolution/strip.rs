use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::spectral::{self, FrontState, Spectrum};

/// Minimum number of modes above the floor for an unflagged fit.
pub const MIN_FIT_MODES: usize = 16;

/// The modes used must span at least this ratio in k; over narrower ranges
/// log k and k are nearly collinear and p, δ cannot be separated.
pub const MIN_FIT_SPAN: f64 = 2.0;

/// Fit window and noise floor for the analyticity-strip estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripFitConfig {
    /// Lower end of the k-window; `k_max / 8` when absent.
    #[serde(default)]
    pub k_lo: Option<f64>,
    /// Upper end of the k-window; `k_max / 2` when absent.
    #[serde(default)]
    pub k_hi: Option<f64>,
    /// Modes with |c(k)| below `floor · max|c|` are ignored.
    #[serde(default = "default_floor")]
    pub floor: f64,
}

fn default_floor() -> f64 {
    1e-8
}

impl Default for StripFitConfig {
    fn default() -> Self {
        StripFitConfig {
            k_lo: None,
            k_hi: None,
            floor: default_floor(),
        }
    }
}

impl StripFitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.floor > 0.0 && self.floor < 1.0) {
            return Err(FrontError::Config(format!("strip fit floor {} not in (0, 1)", self.floor)));
        }
        if let (Some(lo), Some(hi)) = (self.k_lo, self.k_hi) {
            if !(lo >= 1.0 && hi > lo) {
                return Err(FrontError::Config(format!("strip fit window [{lo}, {hi}] is empty")));
            }
        }
        Ok(())
    }

    fn window(&self, k_max: i64) -> (f64, f64) {
        let k_max = k_max as f64;
        (
            self.k_lo.unwrap_or(k_max / 8.0).max(1.0),
            self.k_hi.unwrap_or(k_max / 2.0).min(k_max),
        )
    }
}

/// Fit of log|c(k)| ≈ log C − p log k − δ k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripEstimate {
    /// Strip width δ, clamped at 0. For flagged fits this is the largest
    /// decay rate the window can resolve.
    pub delta: f64,
    pub power: f64,
    pub log_c: f64,
    pub modes_used: usize,
    /// Too few modes above the floor; `delta` is a window bound, not a fit.
    pub flagged: bool,
}

pub fn estimate_strip_width(state: &FrontState) -> StripEstimate {
    estimate_strip_width_with(state, &StripFitConfig::default())
}

pub fn estimate_strip_width_with(state: &FrontState, config: &StripFitConfig) -> StripEstimate {
    let grid = state.grid();
    let (lo, hi) = config.window(grid.k_max());
    let peak = (1..=grid.k_max())
        .map(|k| state.coeff(k).norm())
        .fold(0.0, f64::max);
    let threshold = config.floor * peak;
    let samples: Vec<(f64, f64)> = (1..=grid.k_max())
        .filter(|&k| (k as f64) >= lo && (k as f64) <= hi)
        .filter_map(|k| {
            let m = state.coeff(k).norm();
            (m > threshold && m > 0.0).then(|| (k as f64, m.ln()))
        })
        .collect();
    let bound = -config.floor.ln() / lo;
    let span = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => b.0 / a.0,
        _ => 0.0,
    };
    if samples.len() < MIN_FIT_MODES || span < MIN_FIT_SPAN {
        return StripEstimate {
            delta: bound,
            power: 0.0,
            log_c: 0.0,
            modes_used: samples.len(),
            flagged: true,
        };
    }
    // normal equations for the basis (1, −log k, −k)
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(k, y) in &samples {
        let row = [1.0, -k.ln(), -k];
        for i in 0..3 {
            atb[i] += row[i] * y;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    match solve3(ata, atb) {
        Some([log_c, power, delta]) => StripEstimate {
            delta: delta.max(0.0),
            power,
            log_c,
            modes_used: samples.len(),
            flagged: false,
        },
        None => StripEstimate {
            delta: bound,
            power: 0.0,
            log_c: 0.0,
            modes_used: samples.len(),
            flagged: true,
        },
    }
}

/// Position of the steepest slope of the part of φ inside the fit window,
/// where an emerging singularity shows up before it dominates φₓ.
pub fn singularity_location(state: &FrontState, config: &StripFitConfig) -> f64 {
    let grid = state.grid();
    let (lo, hi) = config.window(grid.k_max());
    let band: Vec<Complex64> = state
        .coeffs()
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, k)| {
            let ak = k.unsigned_abs() as f64;
            if ak >= lo && ak <= hi {
                Complex64::new(0.0, k as f64) * c
            } else {
                Complex64::default()
            }
        })
        .collect();
    let slope = spectral::inverse_transform(&Spectrum::from_raw(grid, band));
    let (i, _) = slope
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v.abs() > best.1 { (i, v.abs()) } else { best });
    grid.points()[i]
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
