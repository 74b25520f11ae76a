//! Shear profiles, linear dispersion, weakly nonlinear traveling waves and
//! the NLS modulation coefficients.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{FrontError, Result};
use crate::kernels::{symbol_a, symbol_b, AlphaFamily, Regime};

/// Along-front velocity u(y) of the planar-front shear flow, with the
/// dimensionless prefactor taken as 1.
pub fn shear_profile(y: f64, alpha: &AlphaFamily, theta0: f64) -> Result<f64> {
    let ay = y.abs();
    if ay == 0.0 && alpha.alpha() <= 1.0 {
        return Err(FrontError::domain("shear_profile", format!("u is singular at y = 0 for alpha = {}", alpha.alpha())));
    }
    Ok(match alpha.regime() {
        Regime::Euler => theta0 * ay,
        Regime::Sqg => theta0 * ay.ln(),
        Regime::Gsqg => theta0 * ay.powf(alpha.alpha() - 1.0),
    })
}

/// ω₀(k) = k b(k).
pub fn dispersion_omega0(k: f64, alpha: &AlphaFamily) -> Result<f64> {
    Ok(k * symbol_b(k, alpha)?)
}

/// σ₂(k) = ½k[4a(k) − a(2k)].
pub fn sigma2(k: f64, alpha: &AlphaFamily) -> f64 {
    0.5 * k * (4.0 * symbol_a(k, alpha) - symbol_a(2.0 * k, alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesResult {
    pub k: u32,
    pub psi1: Complex64,
    pub omega0: f64,
    pub sigma2: f64,
    pub omega2: f64,
    /// ψ₃/ψ₁³, which is real.
    pub psi3_ratio: f64,
}

impl StokesResult {
    pub fn psi3(&self) -> Complex64 {
        self.psi3_ratio * self.psi1.powu(3)
    }

    /// ω₀ + ω₂, the frequency through second order in the amplitude.
    pub fn frequency(&self) -> f64 {
        self.omega0 + self.omega2
    }
}

/// Third-order Stokes expansion of the traveling wave ψ₁e^{ikx} + c.c.
pub fn stokes_expansion(k: u32, psi1: Complex64, alpha: &AlphaFamily) -> Result<StokesResult> {
    if k == 0 {
        return Err(FrontError::domain("stokes_expansion", "k must be a positive integer"));
    }
    if !(psi1.re.is_finite() && psi1.im.is_finite()) {
        return Err(FrontError::domain("stokes_expansion", "psi1 must be finite"));
    }
    let kf = k as f64;
    let a = |q: f64| symbol_a(q, alpha);
    let db = symbol_b(kf, alpha)? - symbol_b(3.0 * kf, alpha)?;
    if db.abs() <= 1e-14 * symbol_b(kf, alpha)?.abs() {
        return Err(FrontError::Resonance { k: kf });
    }
    let s2 = sigma2(kf, alpha);
    Ok(StokesResult {
        k,
        psi1,
        omega0: dispersion_omega0(kf, alpha)?,
        sigma2: s2,
        omega2: s2 * psi1.norm_sqr(),
        psi3_ratio: 0.5 * (a(kf) - a(2.0 * kf) + a(3.0 * kf) / 3.0) / db,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NlsResult {
    pub k: f64,
    pub omega0_pp: f64,
    /// ω₀″ from a central second difference of ω₀ with step [`NLS_FD_STEP`].
    pub omega0_pp_fd: f64,
    pub sigma2: f64,
    pub focusing: bool,
}

pub const NLS_FD_STEP: f64 = 1e-4;

/// Closed-form ω₀″(k) for the dispersive regimes.
pub fn omega0_second_derivative(k: f64, alpha: &AlphaFamily) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(FrontError::domain("omega0''", format!("k = {k} must be positive")));
    }
    match alpha.regime() {
        Regime::Euler => Err(FrontError::domain("omega0''", "the Euler front is nondispersive")),
        Regime::Sqg => Ok(-2.0 / k),
        Regime::Gsqg => {
            let al = alpha.alpha();
            let b = alpha.b_alpha().expect("gSQG has b_alpha");
            Ok(b * (2.0 - al) * (1.0 - al) * k.powf(-al))
        }
    }
}

/// ω₀(k + h) − ω₀(k) for k > 0, |h| < k, written without subtracting
/// nearly equal numbers so the second difference keeps its accuracy.
fn omega0_increment(k: f64, h: f64, alpha: &AlphaFamily) -> f64 {
    let r = (h / k).ln_1p();
    match alpha.regime() {
        Regime::Euler => 0.0,
        Regime::Sqg => -2.0 * (h * k.ln() + (k + h) * r),
        Regime::Gsqg => {
            let p = 2.0 - alpha.alpha();
            alpha.b_alpha().expect("gSQG has b_alpha") * k.powf(p) * (p * r).exp_m1()
        }
    }
}

/// Coefficients of iψ_T = −½ω₀″ψ_XX + σ₂|ψ|²ψ for a carrier of wavenumber k.
pub fn nls_coefficients(k: f64, alpha: &AlphaFamily) -> Result<NlsResult> {
    let pp = omega0_second_derivative(k, alpha)?;
    let h = NLS_FD_STEP;
    let fd = (omega0_increment(k, h, alpha) + omega0_increment(k, -h, alpha)) / (h * h);
    let s2 = sigma2(k, alpha);
    Ok(NlsResult {
        k,
        omega0_pp: pp,
        omega0_pp_fd: fd,
        sigma2: s2,
        focusing: pp * s2 < 0.0,
    })
}
