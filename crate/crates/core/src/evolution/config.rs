use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::kernels::{AlphaFamily, SymbolTable};
use crate::spectral::{FrontState, Grid};

use super::strip::StripFitConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    TwoCosine,
    SechSquared,
    SingleMode,
    FourierList,
}

/// Initial profile. `two_cosine` and `sech_squared` accept an optional
/// amplitude; `single_mode` takes `[k, re, im]` and `fourier_list` a flat
/// list of such triples. The coefficient of the mode k is set to `re + i im`
/// and its conjugate to `-k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub kind: InitialKind,
    #[serde(default)]
    pub parameters: Vec<f64>,
}

impl InitialData {
    pub fn two_cosine() -> Self {
        InitialData {
            kind: InitialKind::TwoCosine,
            parameters: Vec::new(),
        }
    }

    pub fn sech_squared() -> Self {
        InitialData {
            kind: InitialKind::SechSquared,
            parameters: Vec::new(),
        }
    }

    pub fn single_mode(k: i64, coeff: Complex64) -> Self {
        InitialData {
            kind: InitialKind::SingleMode,
            parameters: vec![k as f64, coeff.re, coeff.im],
        }
    }

    pub fn fourier_list(modes: &[(i64, Complex64)]) -> Self {
        InitialData {
            kind: InitialKind::FourierList,
            parameters: modes.iter().flat_map(|(k, c)| [*k as f64, c.re, c.im]).collect(),
        }
    }

    fn amplitude(&self) -> Result<f64> {
        match self.parameters.as_slice() {
            [] => Ok(1.0),
            [a] if a.is_finite() => Ok(*a),
            _ => Err(FrontError::Config(format!(
                "{:?} takes at most one finite amplitude parameter",
                self.kind
            ))),
        }
    }

    /// Samples (or assembles) the profile on `grid`; sampled profiles are
    /// mean-subtracted.
    pub fn build(&self, grid: Grid) -> Result<FrontState> {
        match self.kind {
            InitialKind::TwoCosine => {
                let amp = self.amplitude()?;
                let values: Vec<f64> = grid
                    .points()
                    .iter()
                    .map(|&x| amp * ((x + PI).cos() + 0.5 * (2.0 * (x + PI + 2.0 * PI * PI)).cos()))
                    .collect();
                FrontState::from_values(grid, &values, 0.0)
            }
            InitialKind::SechSquared => {
                let amp = self.amplitude()?;
                let values: Vec<f64> = grid
                    .points()
                    .iter()
                    .map(|&x| amp / (2.5 * (x - PI)).cosh().powi(2))
                    .collect();
                FrontState::from_values(grid, &values, 0.0)
            }
            InitialKind::SingleMode | InitialKind::FourierList => {
                let p = &self.parameters;
                if p.is_empty() || p.len() % 3 != 0 || (self.kind == InitialKind::SingleMode && p.len() != 3) {
                    return Err(FrontError::Config(format!(
                        "{:?} needs (k, re, im) triples, got {} numbers",
                        self.kind,
                        p.len()
                    )));
                }
                let n = grid.n_modes();
                let mut coeffs = vec![Complex64::default(); n];
                for triple in p.chunks(3) {
                    let k = triple[0];
                    if k.fract() != 0.0 || k == 0.0 || k.abs() > grid.k_max() as f64 {
                        return Err(FrontError::Config(format!(
                            "mode {k} must be a nonzero integer with |k| <= {}",
                            grid.k_max()
                        )));
                    }
                    let c = Complex64::new(triple[1], triple[2]);
                    if !c.re.is_finite() || !c.im.is_finite() {
                        return Err(FrontError::Config(format!("non-finite coefficient for mode {k}")));
                    }
                    let (k, c) = if k > 0.0 { (k as i64, c) } else { (-k as i64, c.conj()) };
                    coeffs[grid.index(k)] += c;
                    coeffs[grid.index(-k)] += c.conj();
                }
                FrontState::from_coeffs(grid, coeffs, 0.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViscosityKind {
    None,
    ExpFilter,
    SpectralViscosity,
}

/// High-mode damping applied once per step.
///
/// `exp_filter` multiplies c(k) by `exp(-strength (|k|/k_max)^order)`.
/// `spectral_viscosity` integrates `-strength k² c(k)` exactly over the
/// step for `|k| > cutoff_fraction k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscositySpec {
    pub kind: ViscosityKind,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default)]
    pub strength: f64,
    #[serde(default = "default_cutoff")]
    pub cutoff_fraction: f64,
}

fn default_order() -> u32 {
    36
}

fn default_cutoff() -> f64 {
    0.5
}

impl Default for ViscositySpec {
    fn default() -> Self {
        ViscositySpec::exp_filter()
    }
}

impl ViscositySpec {
    pub fn none() -> Self {
        ViscositySpec {
            kind: ViscosityKind::None,
            order: default_order(),
            strength: 0.0,
            cutoff_fraction: default_cutoff(),
        }
    }

    pub fn exp_filter() -> Self {
        ViscositySpec {
            kind: ViscosityKind::ExpFilter,
            order: 36,
            strength: 36.0,
            cutoff_fraction: default_cutoff(),
        }
    }

    pub fn spectral_viscosity(strength: f64, cutoff_fraction: f64) -> Self {
        ViscositySpec {
            kind: ViscosityKind::SpectralViscosity,
            order: 2,
            strength,
            cutoff_fraction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FrontError::Config(msg));
        if !(self.strength >= 0.0 && self.strength.is_finite()) {
            return bad(format!("viscosity strength {} must be finite and >= 0", self.strength));
        }
        if (self.strength == 0.0) != (self.kind == ViscosityKind::None) {
            return bad("viscosity strength must be 0 exactly when kind is none".into());
        }
        if self.order == 0 || self.order % 2 != 0 {
            return bad(format!("viscosity order {} must be a positive even integer", self.order));
        }
        if !(self.cutoff_fraction > 0.0 && self.cutoff_fraction < 1.0) {
            return bad(format!("cutoff_fraction {} not in (0, 1)", self.cutoff_fraction));
        }
        Ok(())
    }

    /// Per-mode damping factors for one step of size `dt`, in storage order.
    pub fn factors(&self, grid: Grid, dt: f64) -> Vec<f64> {
        let kmax = grid.k_max() as f64;
        grid.wavenumbers()
            .map(|k| {
                let r = (k as f64).abs() / kmax;
                match self.kind {
                    ViscosityKind::None => 1.0,
                    ViscosityKind::ExpFilter => (-self.strength * r.powi(self.order as i32)).exp(),
                    ViscosityKind::SpectralViscosity => {
                        if r > self.cutoff_fraction {
                            (-self.strength * (k * k) as f64 * dt.abs()).exp()
                        } else {
                            1.0
                        }
                    }
                }
            })
            .collect()
    }
}

/// Diagnostics and stopping controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSpec {
    /// Orders s of the reported Ḣˢ seminorms.
    #[serde(default = "default_sobolev")]
    pub sobolev: Vec<f64>,
    #[serde(default)]
    pub strip_fit: StripFitConfig,
    /// End the run once the strip width falls below two grid wavelengths.
    #[serde(default = "default_true")]
    pub stop_at_singularity: bool,
    /// Steps between strip-width checks; defaults to `output_every`.
    #[serde(default)]
    pub check_every: Option<usize>,
    /// Write collocation snapshots and spectra at output steps.
    #[serde(default = "default_true")]
    pub snapshots: bool,
}

fn default_sobolev() -> Vec<f64> {
    vec![1.0, 2.0]
}

fn default_true() -> bool {
    true
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        DiagnosticsSpec {
            sobolev: default_sobolev(),
            strip_fit: StripFitConfig::default(),
            stop_at_singularity: true,
            check_every: None,
            snapshots: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub grid: Grid,
    pub alpha: AlphaFamily,
    /// Time step; `0.5 / max|k b(k)|` when absent.
    #[serde(default)]
    pub dt: Option<f64>,
    pub t_end: f64,
    pub initial_data: InitialData,
    #[serde(default)]
    pub viscosity: ViscositySpec,
    pub output_every: usize,
    pub output_dir: String,
    #[serde(default)]
    pub diagnostics: DiagnosticsSpec,
}

impl SimulationConfig {
    pub fn new(grid: Grid, alpha: AlphaFamily, t_end: f64, initial_data: InitialData) -> Self {
        SimulationConfig {
            grid,
            alpha,
            dt: None,
            t_end,
            initial_data,
            viscosity: ViscositySpec::default(),
            output_every: 100,
            output_dir: "out".into(),
            diagnostics: DiagnosticsSpec::default(),
        }
    }

    pub fn default_dt(grid: Grid, alpha: AlphaFamily) -> f64 {
        0.5 / SymbolTable::new(grid, alpha).max_frequency()
    }

    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or_else(|| Self::default_dt(self.grid, self.alpha))
    }

    /// `dt · max|k b(k)|`, the linear phase advanced per step at the top of
    /// the band.
    pub fn stability_proxy(&self) -> f64 {
        self.time_step() * SymbolTable::new(self.grid, self.alpha).max_frequency()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(FrontError::Config(format!("dt = {dt} must be positive")));
            }
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(FrontError::Config(format!("t_end = {} must be positive", self.t_end)));
        }
        if self.output_every == 0 {
            return Err(FrontError::Config("output_every must be positive".into()));
        }
        if self.diagnostics.check_every == Some(0) {
            return Err(FrontError::Config("check_every must be positive".into()));
        }
        if self.diagnostics.sobolev.iter().any(|s| !s.is_finite()) {
            return Err(FrontError::Config("sobolev orders must be finite".into()));
        }
        self.viscosity.validate()?;
        self.diagnostics.strip_fit.validate()?;
        self.initial_data.build(self.grid)?;
        Ok(())
    }
}
