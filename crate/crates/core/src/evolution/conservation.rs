//! Drift of the Hamiltonian and momentum in viscosity-free runs, and the
//! order at which it shrinks under step halving.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::kernels::{AlphaFamily, SymbolTable};
use crate::spectral::Grid;

use super::config::{InitialData, ViscositySpec};
use super::diagnostics::{hamiltonian_with, momentum};
use super::stepper::Stepper;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConservationSpec {
    pub grid: Grid,
    pub alpha: AlphaFamily,
    pub dt: f64,
    pub t_end: f64,
    pub initial_data: InitialData,
    #[serde(default = "default_h_tol")]
    pub h_tolerance: f64,
    #[serde(default = "default_p_tol")]
    pub p_tolerance: f64,
    /// Accepted distance of the observed order from 4.
    #[serde(default = "default_order_tol")]
    pub order_tolerance: f64,
}

fn default_h_tol() -> f64 {
    1e-8
}

fn default_p_tol() -> f64 {
    1e-10
}

fn default_order_tol() -> f64 {
    0.2
}

impl Default for ConservationSpec {
    fn default() -> Self {
        ConservationSpec {
            grid: Grid::new(512).expect("valid grid"),
            alpha: AlphaFamily::sqg(),
            dt: 1e-3,
            t_end: 1.0,
            initial_data: InitialData::fourier_list(&[
                (1, Complex64::new(0.1, 0.0)),
                (2, Complex64::new(0.0, 0.05)),
                (3, Complex64::new(0.025, 0.025)),
            ]),
            h_tolerance: default_h_tol(),
            p_tolerance: default_p_tol(),
            order_tolerance: default_order_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub dt: f64,
    pub steps: usize,
    /// Largest |H(t) − H(0)|/|H(0)| over the run.
    pub h_max: f64,
    pub p_max: f64,
    /// Relative drifts at t_end, used for the order estimate.
    pub h_final: f64,
    pub p_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub spec: ConservationSpec,
    pub h0: f64,
    pub p0: f64,
    pub coarse: Drift,
    pub fine: Drift,
    pub h_order: f64,
    pub p_order: f64,
    pub h_passed: bool,
    pub p_passed: bool,
    /// None when the drift at `dt/2` is at the roundoff floor, where the
    /// ratio of drifts says nothing about the time discretization.
    pub order_passed: Option<bool>,
    /// Drift bounds hold and the order, where resolvable, is within
    /// tolerance of 4.
    pub passed: bool,
}

/// Relative drift below which differences are roundoff.
pub const DRIFT_FLOOR: f64 = 1e3 * f64::EPSILON;

fn drift(spec: &ConservationSpec, dt: f64) -> Result<(f64, f64, Drift)> {
    let steps = (spec.t_end / dt).round() as usize;
    if steps == 0 || ((steps as f64) * dt - spec.t_end).abs() > 1e-9 * spec.t_end {
        return Err(FrontError::Config(format!(
            "t_end = {} is not a whole number of steps of {dt}",
            spec.t_end
        )));
    }
    let symbols = SymbolTable::new(spec.grid, spec.alpha);
    let mut stepper = Stepper::new(symbols, ViscositySpec::none())?;
    let mut state = spec.initial_data.build(spec.grid)?;
    let h0 = hamiltonian_with(&state, stepper.evaluator());
    let p0 = momentum(&state);
    if h0 == 0.0 || p0 == 0.0 {
        return Err(FrontError::Config("initial data has zero Hamiltonian or momentum".into()));
    }
    let mut d = Drift {
        dt,
        steps,
        h_max: 0.0,
        p_max: 0.0,
        h_final: 0.0,
        p_final: 0.0,
    };
    for _ in 0..steps {
        state = stepper.step(&state, dt)?;
        d.h_final = (hamiltonian_with(&state, stepper.evaluator()) - h0).abs() / h0.abs();
        d.p_final = (momentum(&state) - p0).abs() / p0;
        d.h_max = d.h_max.max(d.h_final);
        d.p_max = d.p_max.max(d.p_final);
    }
    Ok((h0, p0, d))
}

/// Runs at `dt` and `dt/2` without viscosity.
pub fn conservation_check(spec: &ConservationSpec) -> Result<ConservationReport> {
    if !(spec.dt > 0.0 && spec.t_end > 0.0) {
        return Err(FrontError::Config("dt and t_end must be positive".into()));
    }
    let (h0, p0, coarse) = drift(spec, spec.dt)?;
    let (_, _, fine) = drift(spec, 0.5 * spec.dt)?;
    let h_order = (coarse.h_final / fine.h_final).log2();
    let p_order = (coarse.p_final / fine.p_final).log2();
    let h_passed = coarse.h_max <= spec.h_tolerance;
    let p_passed = coarse.p_max <= spec.p_tolerance;
    let resolved = fine.h_final > DRIFT_FLOOR && fine.p_final > DRIFT_FLOOR;
    let order_passed = resolved.then(|| {
        (h_order - 4.0).abs() <= spec.order_tolerance && (p_order - 4.0).abs() <= spec.order_tolerance
    });
    Ok(ConservationReport {
        spec: spec.clone(),
        h0,
        p0,
        coarse,
        fine,
        h_order,
        p_order,
        h_passed,
        p_passed,
        order_passed,
        passed: h_passed && p_passed && order_passed != Some(false),
    })
}
