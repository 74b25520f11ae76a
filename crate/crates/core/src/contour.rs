//! Quadrature evaluation of the full periodic front equation, used as an
//! independent check on the cubic approximation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::evolution::{rhs_approx, rhs_approx_nonlinear};
use crate::kernels::{periodic_green_difference, AlphaFamily, LatticeSum, SymbolTable};
use crate::spectral::{self, FrontState, Grid, Transform};

/// η-quadrature settings. Offsets live on a lattice of `n_eta` points, a
/// multiple of the grid size, so φ(x + η) is exact trigonometric
/// interpolation and no resampling error enters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub n_eta: usize,
    pub gp_tolerance: f64,
    pub tail_terms: usize,
    /// Richardson levels on the halved lattices. The integrand behaves like
    /// |η|^{1−β}·(analytic) at the excluded node, β = 2 − α, so the
    /// trapezoid error runs in powers h^{α+1}, h^{α+3}, …
    #[serde(default)]
    pub refinements: usize,
}

impl QuadratureSpec {
    /// Four offsets per grid point and three Richardson levels; without the
    /// extrapolation the α < 2 sums converge only algebraically.
    pub fn for_grid(grid: Grid) -> Self {
        QuadratureSpec {
            n_eta: 4 * grid.n_modes(),
            gp_tolerance: 1e-13,
            tail_terms: 12,
            refinements: 3,
        }
    }

    pub fn validate(&self, grid: Grid) -> Result<()> {
        let n = grid.n_modes();
        if self.n_eta == 0 || self.n_eta % n != 0 {
            return Err(FrontError::Config(format!(
                "n_eta = {} is not a multiple of the grid size {n}",
                self.n_eta
            )));
        }
        if self.n_eta % (1 << self.refinements) != 0 || self.n_eta >> self.refinements < 4 {
            return Err(FrontError::Config(format!(
                "n_eta = {} cannot be halved {} times",
                self.n_eta, self.refinements
            )));
        }
        if !(self.gp_tolerance > 0.0 && self.gp_tolerance.is_finite()) {
            return Err(FrontError::Config(format!("gp_tolerance = {}", self.gp_tolerance)));
        }
        if self.tail_terms == 0 {
            return Err(FrontError::Config("tail_terms must be positive".into()));
        }
        Ok(())
    }

    fn lattice(&self) -> LatticeSum {
        LatticeSum {
            tolerance: self.gp_tolerance,
            tail_terms: self.tail_terms,
            ..LatticeSum::default()
        }
    }
}

/// Values of φ and φₓ on the lattice of `m` points.
fn fine_values(state: &FrontState, m: usize) -> (Vec<f64>, Vec<f64>) {
    let grid = state.grid();
    let mut transform = Transform::new(m);
    let mut buf = vec![Complex64::default(); m];
    spectral::pad_into(state.coeffs(), &mut buf);
    transform.synthesize(&mut buf);
    let phi = buf.iter().map(|c| c.re).collect();
    let dx: Vec<Complex64> = state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| Complex64::new(0.0, grid.wavenumber(j) as f64) * c)
        .collect();
    spectral::pad_into(&dx, &mut buf);
    transform.synthesize(&mut buf);
    (phi, buf.iter().map(|c| c.re).collect())
}

/// Extrapolates trapezoid sums ordered from finest to coarsest, each lattice
/// twice as coarse as the previous one.
fn richardson(levels: &[f64], alpha: f64) -> f64 {
    let mut t = levels.to_vec();
    for (i, p) in (0..levels.len() - 1).map(|i| (i, alpha + 1.0 + 2.0 * i as f64)) {
        let r = 2f64.powf(p);
        for j in 0..t.len() - 1 - i {
            t[j] = (r * t[j] - t[j + 1]) / (r - 1.0);
        }
    }
    t[0]
}

/// Right-hand side of the full periodic front equation,
/// φₜ = −∫_𝕋 [φₓ(x) − φₓ(x+η)]{G_p(η,0) − G_p(η, φ(x) − φ(x+η))} dη − 𝓛φₓ,
/// by the trapezoid rule over η with the η = 0 node omitted.
pub fn rhs_full_periodic(state: &FrontState, alpha: &AlphaFamily, quad: &QuadratureSpec) -> Result<FrontState> {
    let grid = state.grid();
    quad.validate(grid)?;
    let n = grid.n_modes();
    let m = quad.n_eta;
    let ratio = m / n;
    let (phi, phi_x) = fine_values(state, m);
    let lattice = quad.lattice();
    let levels = quad.refinements + 1;
    let h = 2.0 * std::f64::consts::PI / m as f64;

    let integrals: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = i * ratio;
            let mut sums = vec![0.0; levels];
            for j in 1..m {
                let xj = (xi + j) % m;
                let y = phi[xi] - phi[xj];
                let d = periodic_green_difference(j as f64 * h, y, alpha, &lattice)?;
                let f = (phi_x[xi] - phi_x[xj]) * d;
                if !f.is_finite() {
                    return Err(FrontError::domain(
                        "rhs_full_periodic",
                        format!("non-finite integrand at x index {i}, offset index {j}"),
                    ));
                }
                let mut level = 0;
                while level < levels && j % (1 << level) == 0 {
                    sums[level] += f;
                    level += 1;
                }
            }
            for (level, s) in sums.iter_mut().enumerate() {
                *s *= h * (1 << level) as f64;
            }
            Ok(richardson(&sums, alpha.alpha()))
        })
        .collect();

    let symbols = SymbolTable::new(grid, *alpha);
    let mut linear: Vec<Complex64> = state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| Complex64::new(0.0, grid.wavenumber(j) as f64 * symbols.b()[j]) * c)
        .collect();
    let mut transform = Transform::new(n);
    transform.synthesize(&mut linear);
    let values = integrals
        .into_iter()
        .zip(&linear)
        .map(|(integral, l)| Ok(-integral? - l.re))
        .collect::<Result<Vec<f64>>>()?;
    FrontState::from_values(grid, &values, state.time)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub amplitude: f64,
    /// ‖rhs_full − rhs_approx‖₂
    pub discrepancy: f64,
    /// ‖rhs_approx_nonlinear‖₂
    pub nonlinear_norm: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub rows: Vec<ConsistencyRow>,
    /// Slope of log(relative) against log(amplitude).
    pub slope: f64,
    pub intercept: f64,
    pub passed: bool,
}

/// Accepted range for the fitted slope.
pub const CONSISTENCY_SLOPE: (f64, f64) = (1.9, 2.1);

/// Scales `shape` by each amplitude.
pub fn amplitude_family(shape: &FrontState, amplitudes: &[f64]) -> Vec<(f64, FrontState)> {
    amplitudes
        .iter()
        .map(|&a| {
            let coeffs = shape.coeffs().iter().map(|c| c * a).collect();
            (a, FrontState::from_raw(shape.grid(), coeffs, shape.time))
        })
        .collect()
}

/// Measures how fast the cubic approximation's error vanishes relative to
/// its own nonlinear term as the amplitude shrinks. Zero amplitudes are
/// skipped.
pub fn consistency_report(
    family: &[(f64, FrontState)],
    alpha: &AlphaFamily,
    quad: &QuadratureSpec,
) -> Result<ConsistencyReport> {
    let usable: Vec<&(f64, FrontState)> = family.iter().filter(|(a, _)| *a > 0.0).collect();
    if usable.len() < 4 {
        return Err(FrontError::Insufficient(format!(
            "{} nonzero amplitudes, at least 4 needed",
            usable.len()
        )));
    }
    let (lo, hi) = usable
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), (a, _)| (lo.min(*a), hi.max(*a)));
    if (hi / lo).log10() < 1.5 {
        return Err(FrontError::Insufficient(format!(
            "amplitudes span {:.2} decades, at least 1.5 needed",
            (hi / lo).log10()
        )));
    }
    let mut rows = Vec::with_capacity(usable.len());
    for (amplitude, state) in usable {
        let symbols = SymbolTable::new(state.grid(), *alpha);
        let full = rhs_full_periodic(state, alpha, quad)?;
        let approx = rhs_approx(state, &symbols)?;
        let nonlinear = rhs_approx_nonlinear(state, &symbols)?.l2_norm();
        let discrepancy = full.axpy(-1.0, &approx)?.l2_norm();
        rows.push(ConsistencyRow {
            amplitude: *amplitude,
            discrepancy,
            nonlinear_norm: nonlinear,
            relative: discrepancy / nonlinear,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.amplitude.ln(), r.relative.ln())).collect();
    if points.iter().any(|(_, y)| !y.is_finite()) {
        return Err(FrontError::Insufficient(
            "degenerate fit: zero or non-finite relative discrepancy".into(),
        ));
    }
    let (slope, intercept) = line_fit(&points);
    Ok(ConsistencyReport {
        passed: slope >= CONSISTENCY_SLOPE.0 && slope <= CONSISTENCY_SLOPE.1,
        rows,
        slope,
        intercept,
    })
}

fn line_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
