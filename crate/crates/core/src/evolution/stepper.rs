use num_complex::Complex64;

use crate::error::{FrontError, Result};
use crate::kernels::SymbolTable;
use crate::spectral::{self, FrontState};

use super::config::{ViscosityKind, ViscositySpec};
use super::rhs::Evaluator;

/// Integrating-factor RK4 for φₜ = N(φ) + Lφ with L = −ik b(k): the linear
/// phase is integrated exactly and RK4 acts on e^{−Lt}φ.
#[derive(Debug, Clone)]
pub struct Stepper {
    eval: Evaluator,
    viscosity: ViscositySpec,
    nonlinear: bool,
    cached_dt: f64,
    half_phase: Vec<Complex64>,
    damping: Vec<f64>,
    stages: [Vec<Complex64>; 5],
}

impl Stepper {
    pub fn new(symbols: SymbolTable, viscosity: ViscositySpec) -> Result<Self> {
        viscosity.validate()?;
        let n = symbols.grid().n_modes();
        let zero = || vec![Complex64::default(); n];
        Ok(Stepper {
            eval: Evaluator::new(symbols),
            viscosity,
            nonlinear: true,
            cached_dt: f64::NAN,
            half_phase: zero(),
            damping: vec![1.0; n],
            stages: [zero(), zero(), zero(), zero(), zero()],
        })
    }

    /// Disables the cubic term, leaving the exact linear flow.
    pub fn with_nonlinearity(mut self, enabled: bool) -> Self {
        self.nonlinear = enabled;
        self
    }

    pub fn symbols(&self) -> &SymbolTable {
        self.eval.symbols()
    }

    pub fn evaluator(&mut self) -> &mut Evaluator {
        &mut self.eval
    }

    fn prepare(&mut self, dt: f64) {
        if dt == self.cached_dt {
            return;
        }
        let symbols = self.eval.symbols();
        let grid = symbols.grid();
        for (j, e) in self.half_phase.iter_mut().enumerate() {
            let k = grid.wavenumber(j) as f64;
            *e = Complex64::from_polar(1.0, -k * symbols.b()[j] * 0.5 * dt);
        }
        self.damping = self.viscosity.factors(grid, dt);
        self.cached_dt = dt;
    }

    fn nonlinear_into(&mut self, input: usize, output: usize) {
        if !self.nonlinear {
            self.stages[output].iter_mut().for_each(|c| *c = Complex64::default());
            return;
        }
        let (src, dst) = if input < output {
            let (lo, hi) = self.stages.split_at_mut(output);
            (&lo[input], &mut hi[0])
        } else {
            let (lo, hi) = self.stages.split_at_mut(input);
            (&hi[0], &mut lo[output])
        };
        self.eval.nonlinear(src, dst);
    }

    /// Advances by `dt`. Negative steps are accepted only without viscosity,
    /// where the scheme is used to integrate backwards in time.
    pub fn step(&mut self, state: &FrontState, dt: f64) -> Result<FrontState> {
        spectral::check_same_grid(state.grid(), self.symbols().grid())?;
        if !dt.is_finite() || dt == 0.0 || (dt < 0.0 && self.viscosity.kind != ViscosityKind::None) {
            return Err(FrontError::Config(format!("invalid time step {dt}")));
        }
        self.prepare(dt);
        let n = state.grid().n_modes();
        let e = self.half_phase.clone();
        let u = state.coeffs();
        // stages: 0 = k1, 1 = k2, 2 = k3, 3 = k4, 4 = scratch
        self.stages[4].copy_from_slice(u);
        self.nonlinear_into(4, 0);
        for j in 0..n {
            self.stages[4][j] = e[j] * (u[j] + 0.5 * dt * self.stages[0][j]);
        }
        self.nonlinear_into(4, 1);
        for j in 0..n {
            self.stages[4][j] = e[j] * u[j] + 0.5 * dt * self.stages[1][j];
        }
        self.nonlinear_into(4, 2);
        for j in 0..n {
            self.stages[4][j] = e[j] * (e[j] * u[j] + dt * self.stages[2][j]);
        }
        self.nonlinear_into(4, 3);
        let mut out = vec![Complex64::default(); n];
        for j in 0..n {
            let e2 = e[j] * e[j];
            let incr = e2 * self.stages[0][j]
                + 2.0 * e[j] * (self.stages[1][j] + self.stages[2][j])
                + self.stages[3][j];
            out[j] = (e2 * u[j] + dt / 6.0 * incr) * self.damping[j];
        }
        let next = FrontState::from_raw(state.grid(), out, state.time + dt);
        if !next.is_finite() {
            return Err(FrontError::NumericalAbort {
                time: state.time,
                reason: "non-finite coefficients after step".into(),
            });
        }
        debug_assert!(next.satisfies_invariants());
        Ok(next)
    }
}

/// One integrating-factor RK4 step followed by the viscosity filter.
pub fn step(state: &FrontState, dt: f64, symbols: &SymbolTable, viscosity: &ViscositySpec) -> Result<FrontState> {
    Stepper::new(symbols.clone(), *viscosity)?.step(state, dt)
}
