use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernels::SymbolTable;
use crate::spectral::{self, index_of, FrontState};

use super::rhs::Evaluator;
use super::strip::{estimate_strip_width_with, StripEstimate, StripFitConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub hamiltonian: f64,
    /// P = ½∫φ² dx.
    pub momentum: f64,
    /// (s, ‖φ‖_{Ḣˢ}) pairs.
    pub sobolev_norms: Vec<(f64, f64)>,
    pub strip: StripEstimate,
    pub max_slope: f64,
    /// Collocation point where |φₓ| is largest.
    pub max_slope_x: f64,
}

impl DiagnosticsRecord {
    pub fn strip_width(&self) -> f64 {
        self.strip.delta
    }
}

/// Hamiltonian ∫[⅙φ𝐀φ³ − ⅛φ²𝐀φ²]dx + ½∫φ𝓛φ dx using alias-free products.
pub fn hamiltonian(state: &FrontState, symbols: &SymbolTable) -> Result<f64> {
    spectral::check_same_grid(state.grid(), symbols.grid())?;
    let mut eval = Evaluator::new(symbols.clone());
    Ok(hamiltonian_with(state, &mut eval))
}

pub(crate) fn hamiltonian_with(state: &FrontState, eval: &mut Evaluator) -> f64 {
    let symbols = eval.symbols().clone();
    let grid = state.grid();
    let m = grid.padded_len();
    let powers = eval.powers(state.coeffs());
    let mut cubic = 0.0;
    let mut quadratic = 0.0;
    for (j, c) in state.coeffs().iter().enumerate() {
        let k = grid.wavenumber(j);
        if k == 0 {
            continue;
        }
        let pj = index_of(k, m);
        cubic += (c.conj() * powers.cube[pj]).re * symbols.a()[j];
        quadratic += symbols.b()[j] * c.norm_sqr();
    }
    let square: f64 = powers
        .square
        .iter()
        .zip(symbols.a_padded())
        .map(|(s, a)| a * s.norm_sqr())
        .sum();
    2.0 * PI * (cubic / 6.0 - square / 8.0) + PI * quadratic
}

/// P = ½∫φ² dx = π Σ|c(k)|².
pub fn momentum(state: &FrontState) -> f64 {
    PI * state.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>()
}

/// ‖φ‖_{Ḣˢ} = (Σ_{k≠0} |k|^{2s} |c(k)|²)^{1/2}.
pub fn sobolev_norm(state: &FrontState, s: f64) -> f64 {
    let grid = state.grid();
    state
        .coeffs()
        .iter()
        .zip(grid.wavenumbers())
        .filter(|(_, k)| *k != 0)
        .map(|(c, k)| (k.abs() as f64).powf(2.0 * s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// max |φₓ| over the collocation points and its location.
pub fn max_slope(state: &FrontState) -> (f64, f64) {
    let d = state.derivative_values();
    let points = state.grid().points();
    d.iter()
        .zip(points)
        .fold((0.0, 0.0), |best, (v, x)| if v.abs() > best.0 { (v.abs(), x) } else { best })
}

pub fn diagnostics(state: &FrontState, symbols: &SymbolTable, s_list: &[f64]) -> Result<DiagnosticsRecord> {
    spectral::check_same_grid(state.grid(), symbols.grid())?;
    let mut eval = Evaluator::new(symbols.clone());
    Ok(diagnostics_with(state, &mut eval, s_list, &StripFitConfig::default()))
}

pub(crate) fn diagnostics_with(
    state: &FrontState,
    eval: &mut Evaluator,
    s_list: &[f64],
    strip: &StripFitConfig,
) -> DiagnosticsRecord {
    let (slope, slope_x) = max_slope(state);
    DiagnosticsRecord {
        time: state.time,
        hamiltonian: hamiltonian_with(state, eval),
        momentum: momentum(state),
        sobolev_norms: s_list.iter().map(|&s| (s, sobolev_norm(state, s))).collect(),
        strip: estimate_strip_width_with(state, strip),
        max_slope: slope,
        max_slope_x: slope_x,
    }
}
