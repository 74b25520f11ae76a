//! Browser bindings for the demo page in `www/`: dispersion curves, an
//! interactive front simulation, and the |f| landscape over the feasible
//! region. Every export is a thin wrapper over a plain function so the
//! crate also builds and tests natively.

use frontlab::analysis::appendix::in_region;
use frontlab::analysis::{c0_constant, dispersion_omega0, f_value, sigma2};
use frontlab::evolution::{InitialData, Simulation, SimulationConfig, ViscositySpec};
use frontlab::{AlphaFamily, Grid};
use wasm_bindgen::prelude::*;

fn family(alpha: f64) -> Result<AlphaFamily, String> {
    AlphaFamily::new(alpha).map_err(|e| e.to_string())
}

/// `[k, ω₀(k), σ₂(k)]` triples at `samples` points of (0, k_max].
pub fn dispersion_table(alpha: f64, k_max: f64, samples: usize) -> Result<Vec<f64>, String> {
    let a = family(alpha)?;
    if !(k_max > 0.0 && k_max.is_finite()) || samples == 0 {
        return Err(format!("need k_max > 0 and samples > 0, got {k_max} and {samples}"));
    }
    let mut out = Vec::with_capacity(3 * samples);
    for i in 1..=samples {
        let k = k_max * i as f64 / samples as f64;
        out.extend([k, dispersion_omega0(k, &a).map_err(|e| e.to_string())?, sigma2(k, &a)]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn dispersion(alpha: f64, k_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    dispersion_table(alpha, k_max, samples).map_err(|e| JsError::new(&e))
}

/// |f(x, y)| on a `resolution²` lattice over [0, 1]², row-major with y
/// increasing down the rows; NaN outside the feasible region.
pub fn f_landscape(s: f64, resolution: usize) -> Result<Vec<f64>, String> {
    if !(s > 0.0 && s.is_finite()) || resolution < 2 {
        return Err(format!("need s > 0 and resolution >= 2, got {s} and {resolution}"));
    }
    let step = 1.0 / (resolution - 1) as f64;
    let mut out = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        let y = row as f64 * step;
        for col in 0..resolution {
            let x = col as f64 * step;
            out.push(if in_region(x, y) && y > 0.0 { f_value(x, y, s).abs() } else { f64::NAN });
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn f_field(s: f64, resolution: usize) -> Result<Vec<f64>, JsError> {
    f_landscape(s, resolution).map_err(|e| JsError::new(&e))
}

/// C₀(s) = 3^{s+1} − 3^{1−s}, the value of |f| at (1/3, 1/3).
#[wasm_bindgen]
pub fn c0(s: f64) -> f64 {
    c0_constant(s).unwrap_or(f64::NAN)
}

/// A running front integration with the default filter.
#[wasm_bindgen]
pub struct FrontSim {
    sim: Simulation,
}

impl FrontSim {
    pub fn create(n: usize, alpha: f64, profile: &str, amplitude: f64, dt: f64) -> Result<FrontSim, String> {
        let grid = Grid::new(n).map_err(|e| e.to_string())?;
        let mut initial = match profile {
            "two_cosine" => InitialData::two_cosine(),
            "sech_squared" => InitialData::sech_squared(),
            other => return Err(format!("unknown profile {other:?}")),
        };
        initial.parameters = vec![amplitude];
        let mut config = SimulationConfig::new(grid, family(alpha)?, f64::MAX / 4.0, initial);
        config.viscosity = ViscositySpec::exp_filter();
        if dt > 0.0 {
            config.dt = Some(dt);
        }
        Simulation::new(config).map(|sim| FrontSim { sim }).map_err(|e| e.to_string())
    }

    /// Advances `steps` steps; false once the state has stopped being finite.
    pub fn advance(&mut self, steps: usize) -> bool {
        (0..steps).all(|_| self.sim.advance().is_ok())
    }
}

#[wasm_bindgen]
impl FrontSim {
    /// `profile` is `two_cosine` or `sech_squared`; `dt <= 0` picks the
    /// default step.
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, alpha: f64, profile: &str, amplitude: f64, dt: f64) -> Result<FrontSim, JsError> {
        FrontSim::create(n, alpha, profile, amplitude, dt).map_err(|e| JsError::new(&e))
    }

    pub fn step(&mut self, steps: usize) -> bool {
        self.advance(steps)
    }

    pub fn time(&self) -> f64 {
        self.sim.state().time
    }

    pub fn dt(&self) -> f64 {
        self.sim.dt()
    }

    pub fn values(&self) -> Vec<f64> {
        self.sim.state().values()
    }

    pub fn points(&self) -> Vec<f64> {
        self.sim.state().grid().points()
    }

    /// log₁₀|c(k)| for k = 1..=k_max.
    pub fn spectrum(&self) -> Vec<f64> {
        let state = self.sim.state();
        (1..=state.grid().k_max())
            .map(|k| state.coeff(k).norm().max(1e-300).log10())
            .collect()
    }

    /// `[H, P, strip width, max slope]` at the current time.
    pub fn diagnostics(&mut self) -> Vec<f64> {
        let r = self.sim.diagnostics();
        vec![r.hamiltonian, r.momentum, r.strip.delta, r.max_slope]
    }
}
