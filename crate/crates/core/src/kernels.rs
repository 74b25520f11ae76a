//! Closed-form model ingredients for the gSQG front family: Green's
//! functions, the contour kernels F and K, the periodic Green's function on
//! the cylinder, the symbols a(k) and b(k), and the four-wave kernels T, S.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::quadrature;
use crate::spectral::{self, Grid};
use crate::special::{gamma, gegenbauer, hurwitz_zeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Euler,
    Sqg,
    Gsqg,
}

/// Model selector α ∈ (0, 2]. The gSQG constants b_α and c_α are computed
/// once on construction. Serializes as the bare number α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaFamily {
    regime: Regime,
    alpha: f64,
    b_alpha: f64,
    c_alpha: f64,
}

impl AlphaFamily {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(FrontError::domain("alpha", format!("{alpha} not in (0, 2]")));
        }
        if alpha == 2.0 {
            Ok(Self::euler())
        } else if alpha == 1.0 {
            Ok(Self::sqg())
        } else {
            Ok(AlphaFamily {
                regime: Regime::Gsqg,
                alpha,
                b_alpha: constant_b_alpha(alpha)?,
                c_alpha: constant_c_alpha(alpha)?,
            })
        }
    }

    pub fn euler() -> Self {
        AlphaFamily {
            regime: Regime::Euler,
            alpha: 2.0,
            b_alpha: 0.5,
            c_alpha: 0.5,
        }
    }

    pub fn sqg() -> Self {
        AlphaFamily {
            regime: Regime::Sqg,
            alpha: 1.0,
            b_alpha: -2.0,
            c_alpha: -1.0,
        }
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Exponent of the power-law Green's function, `2 - α`.
    pub fn green_exponent(&self) -> f64 {
        2.0 - self.alpha
    }
}

impl TryFrom<f64> for AlphaFamily {
    type Error = FrontError;
    fn try_from(alpha: f64) -> Result<Self> {
        AlphaFamily::new(alpha)
    }
}

impl From<AlphaFamily> for f64 {
    fn from(a: AlphaFamily) -> f64 {
        a.alpha
    }
}

impl fmt::Display for AlphaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.regime {
            Regime::Euler => write!(f, "Euler (alpha = 2)"),
            Regime::Sqg => write!(f, "SQG (alpha = 1)"),
            Regime::Gsqg => write!(f, "gSQG (alpha = {})", self.alpha),
        }
    }
}

/// Four wavenumbers for the symmetric kernel S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelQuery {
    pub k: [i64; 4],
}

impl KernelQuery {
    pub fn new(k: [i64; 4]) -> Self {
        KernelQuery { k }
    }

    pub fn on_constraint(&self) -> bool {
        self.k.iter().sum::<i64>() == 0
    }

    fn as_f64(&self) -> [f64; 4] {
        self.k.map(|v| v as f64)
    }
}

fn nonzero(what: &'static str, x: f64) -> Result<()> {
    if x == 0.0 || !x.is_finite() {
        return Err(FrontError::domain(what, format!("argument {x} must be finite and nonzero")));
    }
    Ok(())
}

/// Whole-line Green's function G(x).
pub fn green_g(x: f64, alpha: &AlphaFamily) -> Result<f64> {
    nonzero("green_g", x)?;
    Ok(match alpha.regime {
        Regime::Euler => -x.abs().ln() / (2.0 * PI),
        _ => x.abs().powf(-alpha.green_exponent()),
    })
}

/// F(x, y) = ∫_0^y G(√(x² + s²)) ds.
pub fn kernel_f(x: f64, y: f64, alpha: &AlphaFamily) -> Result<f64> {
    nonzero("kernel_f", x)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(match alpha.regime {
        Regime::Euler => {
            let r = x.hypot(y);
            -(y * r.ln() + x * (y / x).atan() - y) / (2.0 * PI)
        }
        Regime::Sqg => (y / x.abs()).asinh(),
        Regime::Gsqg => {
            let e = 0.5 * alpha.green_exponent();
            let x2 = x * x;
            quadrature::integrate(|s| (x2 + s * s).powf(-e), 0.0, y, 1e-12)?.value
        }
    })
}

/// K(x, y) = G(x) y − F(x, y), evaluated without cancellation for small
/// y/x.
pub fn kernel_k(x: f64, y: f64, alpha: &AlphaFamily) -> Result<f64> {
    nonzero("kernel_k", x)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(match alpha.regime {
        Regime::Euler => {
            let u = y / x;
            let bracket = if u.abs() < 0.1 {
                // Σ_{j≥1} (-1)^{j+1} u^{2j+1} / (2j (2j+1))
                let u2 = u * u;
                let mut term = u * u2;
                let mut sum = 0.0;
                for j in 1..=9 {
                    let jf = j as f64;
                    sum += term / (2.0 * jf * (2.0 * jf + 1.0));
                    term *= -u2;
                }
                sum
            } else {
                0.5 * u * u.powi(2).ln_1p() + u.atan() - u
            };
            x * bracket / (2.0 * PI)
        }
        Regime::Sqg => {
            let u = y / x.abs();
            if u.abs() < 0.1 {
                // u - asinh(u) = -Σ_{j≥1} (-1)^j (2j)! / (4^j (j!)^2 (2j+1)) u^{2j+1}
                let u2 = u * u;
                let mut coeff = 1.0;
                let mut power = u;
                let mut sum = 0.0;
                for j in 1..=9 {
                    let jf = j as f64;
                    coeff *= -(2.0 * jf - 1.0) / (2.0 * jf);
                    power *= u2;
                    sum -= coeff * power / (2.0 * jf + 1.0);
                }
                sum
            } else {
                u - u.asinh()
            }
        }
        Regime::Gsqg => {
            let e = 0.5 * alpha.green_exponent();
            let ax = x.abs();
            let scale = ax.powf(-2.0 * e);
            let integrand = |s: f64| -scale * (-e * (s / ax).powi(2).ln_1p()).exp_m1();
            let rough = integrand(y.abs()) * y.abs();
            let tol = (1e-13 * rough.abs()).max(1e-300);
            quadrature::integrate(integrand, 0.0, y, tol)?.value
        }
    })
}

/// Controls for the lattice sums defining the periodic Green's function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSum {
    /// Absolute tolerance for the tail expansion.
    pub tolerance: f64,
    /// Number of even Gegenbauer orders kept in the tail.
    pub tail_terms: usize,
    /// Lower bound on the number of explicitly summed image pairs.
    pub min_pairs: usize,
}

impl Default for LatticeSum {
    fn default() -> Self {
        LatticeSum {
            tolerance: 1e-12,
            tail_terms: 12,
            min_pairs: 8,
        }
    }
}

fn reduce_periodic(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = x.rem_euclid(two_pi);
    if r > PI {
        r - two_pi
    } else {
        r
    }
}

impl LatticeSum {
    /// Number of explicit pairs so that ρ/(2π(N+1)) is small enough for
    /// the tail expansion to reach the tolerance.
    fn pairs_for(&self, rho: f64) -> usize {
        let mut n = self.min_pairs.max(1);
        let orders = (2 * self.tail_terms + 2) as i32;
        loop {
            let eps = rho / (2.0 * PI * (n as f64 + 1.0));
            // crude bound on the first neglected order
            if eps < 0.5 && eps.powi(orders) * (n as f64 + 1.0) * 4.0 < self.tolerance {
                return n;
            }
            n *= 2;
        }
    }
}

/// Σ_{n > N} over image pairs ±n of G(|z ± 2πn|) − 2 G(2πn), via the
/// Gegenbauer expansion in ρ/(2πn) summed with Hurwitz zeta values.
fn power_tail(x: f64, y: f64, sigma: f64, pairs: usize, orders: usize) -> f64 {
    let rho = x.hypot(y);
    if rho == 0.0 {
        return 0.0;
    }
    let t = x / rho;
    let c = gegenbauer(0.5 * sigma, t, 2 * orders);
    let a = pairs as f64 + 1.0;
    let two_pi = 2.0 * PI;
    let mut sum = 0.0;
    for m in (2..=2 * orders).step_by(2) {
        let mf = m as f64;
        sum += c[m] * (rho / two_pi).powi(m as i32) * two_pi.powf(-sigma) * hurwitz_zeta(sigma + mf, a, 0);
    }
    2.0 * sum
}

/// `power_tail(x, 0) − power_tail(x, y)` expanded in powers of y² so that
/// no cancellation occurs for small y.
fn power_tail_difference(x: f64, y: f64, sigma: f64, pairs: usize, orders: usize) -> f64 {
    let lambda = 0.5 * sigma;
    let (x2, y2) = (x * x, y * y);
    let a = pairs as f64 + 1.0;
    let two_pi = 2.0 * PI;
    let mut sum = 0.0;
    for m in (2..=2 * orders).step_by(2) {
        // ρ^m C_m^λ(x/ρ) = Σ_j (−1)^j (λ)_{m−j} / (j! (m−2j)!) (2x)^{m−2j} ρ^{2j}
        let mut diff = 0.0;
        for j in 1..=m / 2 {
            let rising: f64 = (0..m - j).map(|i| lambda + i as f64).product();
            let denom: f64 = (1..=j).map(|i| i as f64).product::<f64>()
                * (1..=m - 2 * j).map(|i| i as f64).product::<f64>();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            // (x² + y²)^j − x^{2j}
            let mut binom = 1.0;
            let mut growth = 0.0;
            for i in 1..=j {
                binom *= (j - i + 1) as f64 / i as f64;
                growth += binom * x2.powi((j - i) as i32) * y2.powi(i as i32);
            }
            diff -= sign * rising / denom * (2.0 * x).powi((m - 2 * j) as i32) * growth;
        }
        sum += diff * two_pi.powf(-sigma - m as f64) * hurwitz_zeta(sigma + m as f64, a, 0);
    }
    2.0 * sum
}

fn log_tail(x: f64, y: f64, pairs: usize, orders: usize) -> f64 {
    // -(1/2π) Σ_{n>N} ln|1 - z²/(2πn)²| = (1/2π) Re Σ_m z^{2m} / (m (2π)^{2m}) ζ(2m, N+1)
    let z2 = num_complex::Complex64::new(x, y).powi(2);
    let a = pairs as f64 + 1.0;
    let scale = 1.0 / (4.0 * PI * PI);
    let mut zpow = num_complex::Complex64::new(1.0, 0.0);
    let mut sum = 0.0;
    for m in 1..=orders {
        zpow *= z2 * scale;
        let mf = m as f64;
        sum += zpow.re / mf * hurwitz_zeta(2.0 * mf, a, 0);
    }
    sum / (2.0 * PI)
}

/// Image-sum evaluation of the periodic Green's function,
/// `G(|z|) + Σ_{n≠0} [G(|z + 2πn|) − G(2π|n|)]`.
///
/// For α = 2 this differs from the closed form used by
/// [`periodic_green_gp`] by the constant `−ln 2 / (2π)`.
pub fn periodic_green_series(x: f64, y: f64, alpha: &AlphaFamily, lattice: &LatticeSum) -> Result<(f64, usize)> {
    let xr = reduce_periodic(x);
    if xr == 0.0 && y == 0.0 {
        return Err(FrontError::domain("periodic_green", "singular point (0, 0) mod 2π"));
    }
    let rho = xr.hypot(y);
    let pairs = lattice.pairs_for(rho);
    let two_pi = 2.0 * PI;
    let value = match alpha.regime {
        Regime::Euler => {
            let mut sum = -(xr.hypot(y)).ln() / two_pi;
            for n in (1..=pairs).rev() {
                let s = two_pi * n as f64;
                let lp = ((xr + s) / s).hypot(y / s).ln();
                let lm = ((xr - s) / s).hypot(y / s).ln();
                sum -= (lp + lm) / two_pi;
            }
            sum + log_tail(xr, y, pairs, lattice.tail_terms)
        }
        _ => {
            let sigma = alpha.green_exponent();
            let mut sum = 0.0;
            for n in (1..=pairs).rev() {
                let s = two_pi * n as f64;
                let g = |d: f64| d.hypot(y).powf(-sigma);
                sum += g(xr + s) + g(xr - s) - 2.0 * s.powf(-sigma);
            }
            sum += power_tail(xr, y, sigma, pairs, lattice.tail_terms);
            sum + rho.powf(-sigma)
        }
    };
    Ok((value, pairs))
}

/// Green's function of (−Δ)^{α/2} on the cylinder 𝕋 × ℝ.
pub fn periodic_green_gp(x: f64, y: f64, alpha: &AlphaFamily) -> Result<f64> {
    match alpha.regime {
        Regime::Euler => {
            let xr = reduce_periodic(x);
            if xr == 0.0 && y == 0.0 {
                return Err(FrontError::domain("periodic_green", "singular point (0, 0) mod 2π"));
            }
            let s = (0.5 * x).sin();
            let sh = (0.5 * y).sinh();
            Ok(-(s * s + sh * sh).ln() / (4.0 * PI))
        }
        _ => Ok(periodic_green_series(x, y, alpha, &LatticeSum::default())?.0),
    }
}

/// `G_p(x, 0) − G_p(x, y)` for x ≢ 0 (mod 2π), computed term by term so the
/// result keeps full relative precision when y is small.
pub fn periodic_green_difference(x: f64, y: f64, alpha: &AlphaFamily, lattice: &LatticeSum) -> Result<f64> {
    let xr = reduce_periodic(x);
    if xr == 0.0 {
        return Err(FrontError::domain("periodic_green_difference", "offset is 0 mod 2π"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    match alpha.regime {
        Regime::Euler => {
            let s = (0.5 * xr).sin();
            let sh = (0.5 * y).sinh();
            Ok((sh * sh / (s * s)).ln_1p() / (4.0 * PI))
        }
        _ => {
            let sigma = alpha.green_exponent();
            let two_pi = 2.0 * PI;
            // G(d) − G(√(d² + y²)) = −d^{−σ} expm1(−σ/2 · ln1p(y²/d²))
            let diff = |d: f64| {
                let d = d.abs();
                -d.powf(-sigma) * (-0.5 * sigma * (y / d).powi(2).ln_1p()).exp_m1()
            };
            let pairs = lattice.pairs_for(xr.hypot(y));
            let mut sum = 0.0;
            for n in (1..=pairs).rev() {
                let s = two_pi * n as f64;
                sum += diff(xr + s) + diff(xr - s);
            }
            sum += power_tail_difference(xr, y, sigma, pairs, lattice.tail_terms);
            Ok(sum + diff(xr))
        }
    }
}

/// b_α = 2 sin(πα/2) Γ(α − 1) for α ∈ (0,1) ∪ (1,2).
pub fn constant_b_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
        return Err(FrontError::domain("b_alpha", format!("alpha = {alpha} outside (0,1) ∪ (1,2)")));
    }
    Ok(2.0 * (0.5 * PI * alpha).sin() * gamma(alpha - 1.0))
}

/// Analytic continuation 2(2−α) sin(πα/2) Γ(α−3).
pub fn c_alpha_closed_form(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
        return Err(FrontError::domain("c_alpha", format!("alpha = {alpha} outside (0,1) ∪ (1,2)")));
    }
    Ok(2.0 * (2.0 - alpha) * (0.5 * PI * alpha).sin() * gamma(alpha - 3.0))
}

/// Regularized integral 2(2−α) ∫_0^∞ (1 − η²/2 − cos η) η^{α−4} dη for
/// α ∈ (0, 1): a Taylor series on [0, 1], power integrals plus adaptive
/// quadrature of the cosine on [1, L], and an integration-by-parts
/// expansion beyond L.
pub fn c_alpha_quadrature(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FrontError::domain("c_alpha_quadrature", format!("alpha = {alpha} outside (0, 1)")));
    }
    // ∫_0^1: 1 − η²/2 − cos η = −Σ_{j≥2} (−1)^j η^{2j} / (2j)!
    let mut inner = 0.0;
    let mut fact = 2.0; // (2j)! for j = 1
    for j in 2..40 {
        let jf = j as f64;
        fact *= (2.0 * jf - 1.0) * (2.0 * jf);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign / (fact * (2.0 * jf - 3.0 + alpha));
        inner -= term;
        if term.abs() < 1e-20 {
            break;
        }
    }
    let p = 4.0 - alpha;
    let cut = 100.0 * PI;
    let near = quadrature::integrate(|e| e.cos() * e.powf(-p), 1.0, cut, 1e-14)?.value;
    // ∫_L^∞ e^{iη} η^{−p} dη ≈ i e^{iL} L^{−p} Σ_j (−i)^j (p)_j / L^j
    let mut series = num_complex::Complex64::new(0.0, 0.0);
    let mut term = num_complex::Complex64::new(1.0, 0.0);
    for j in 0..12 {
        series += term;
        term *= num_complex::Complex64::new(0.0, -(p + j as f64) / cut);
    }
    let far = (num_complex::Complex64::i() * num_complex::Complex64::from_polar(cut.powf(-p), cut) * series).re;
    let outer = 1.0 / (3.0 - alpha) - 0.5 / (1.0 - alpha) - (near + far);
    Ok(2.0 * (2.0 - alpha) * (inner + outer))
}

/// c_α for α ∈ (0,1) ∪ (1,2). On (0,1) the quadrature value is returned
/// after it agrees with the Γ-function continuation to 1e−8.
pub fn constant_c_alpha(alpha: f64) -> Result<f64> {
    if alpha > 1.0 && alpha < 2.0 {
        return Ok(constant_b_alpha(alpha)? / (3.0 - alpha));
    }
    let closed = c_alpha_closed_form(alpha)?;
    let quad = c_alpha_quadrature(alpha)?;
    if (quad - closed).abs() > 1e-8 * closed.abs().max(1.0) {
        return Err(FrontError::domain(
            "c_alpha",
            format!("quadrature {quad} disagrees with continuation {closed}"),
        ));
    }
    Ok(quad)
}

/// Dispersive symbol b(k) of 𝓛.
pub fn symbol_b(k: f64, alpha: &AlphaFamily) -> Result<f64> {
    nonzero("symbol_b", k)?;
    Ok(symbol_b_unchecked(k, alpha))
}

pub(crate) fn symbol_b_unchecked(k: f64, alpha: &AlphaFamily) -> f64 {
    let ak = k.abs();
    match alpha.regime {
        Regime::Euler => 0.5 / ak,
        Regime::Sqg => -2.0 * ak.ln(),
        Regime::Gsqg => alpha.b_alpha * ak.powf(1.0 - alpha.alpha),
    }
}

/// Nonlinear symbol a(k) of 𝐀, with a(0) = 0.
pub fn symbol_a(k: f64, alpha: &AlphaFamily) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    let ak = k.abs();
    match alpha.regime {
        Regime::Euler => 0.5 * ak,
        Regime::Sqg => -ak * ak * ak.ln(),
        Regime::Gsqg => alpha.c_alpha * ak.powf(3.0 - alpha.alpha),
    }
}

impl AlphaFamily {
    pub fn b_alpha(&self) -> Option<f64> {
        (self.regime == Regime::Gsqg).then_some(self.b_alpha)
    }

    pub fn c_alpha(&self) -> Option<f64> {
        (self.regime == Regime::Gsqg).then_some(self.c_alpha)
    }
}

pub fn kernel_t(k2: f64, k3: f64, k4: f64, alpha: &AlphaFamily) -> f64 {
    let a = |k| symbol_a(k, alpha);
    a(k2) + a(k3) + a(k4) + a(k2 + k3 + k4) - a(k2 + k3) - a(k2 + k4) - a(k3 + k4)
}

/// Symmetric ten-term kernel S(k1, k2, k3, k4) on real arguments.
pub fn kernel_s_real(k: [f64; 4], alpha: &AlphaFamily) -> f64 {
    let a = |k| symbol_a(k, alpha);
    let [k1, k2, k3, k4] = k;
    a(k1) + a(k2) + a(k3) + a(k4)
        - 0.5 * (a(k1 + k2) + a(k1 + k3) + a(k1 + k4) + a(k2 + k3) + a(k2 + k4) + a(k3 + k4))
}

pub fn kernel_s(q: &KernelQuery, alpha: &AlphaFamily) -> f64 {
    kernel_s_real(q.as_f64(), alpha)
}

/// Symbols a(k), b(k) tabulated in storage order on a grid, plus a(k) on
/// the zero-padded product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTable {
    grid: Grid,
    alpha: AlphaFamily,
    a: Vec<f64>,
    b: Vec<f64>,
    a_padded: Vec<f64>,
}

impl SymbolTable {
    pub fn new(grid: Grid, alpha: AlphaFamily) -> Self {
        let a = grid.wavenumbers().map(|k| symbol_a(k as f64, &alpha)).collect();
        let b = grid
            .wavenumbers()
            .map(|k| if k == 0 { 0.0 } else { symbol_b_unchecked(k as f64, &alpha) })
            .collect();
        let m = grid.padded_len();
        let a_padded = (0..m)
            .map(|j| symbol_a(spectral::wavenumber(j, m) as f64, &alpha))
            .collect();
        SymbolTable {
            grid,
            alpha,
            a,
            b,
            a_padded,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn alpha(&self) -> &AlphaFamily {
        &self.alpha
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// b(k) with the convention b(0) = 0.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a_padded(&self) -> &[f64] {
        &self.a_padded
    }

    /// max |k b(k)| over the retained band; sets the default time step.
    pub fn max_frequency(&self) -> f64 {
        let kmax = self.grid.k_max();
        (1..=kmax)
            .map(|k| (k as f64 * self.b[self.grid.index(k)]).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gsqg(alpha: f64) -> AlphaFamily {
        AlphaFamily::new(alpha).unwrap()
    }

    /// Romberg extrapolation of the trapezoid rule.
    fn romberg<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, levels: usize) -> f64 {
        let mut table = vec![vec![0.0; levels]; levels];
        let mut n = 1usize;
        table[0][0] = 0.5 * (b - a) * (f(a) + f(b));
        for i in 1..levels {
            n *= 2;
            let h = (b - a) / n as f64;
            let mid: f64 = (1..n).step_by(2).map(|j| f(a + j as f64 * h)).sum();
            table[i][0] = 0.5 * table[i - 1][0] + h * mid;
            let mut factor = 1.0;
            for j in 1..=i {
                factor *= 4.0;
                table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
            }
        }
        table[levels - 1][levels - 1]
    }

    #[test]
    fn regime_inference() {
        assert_eq!(AlphaFamily::new(2.0).unwrap().regime(), Regime::Euler);
        assert_eq!(AlphaFamily::new(1.0).unwrap().regime(), Regime::Sqg);
        assert_eq!(gsqg(1.5).regime(), Regime::Gsqg);
        assert!(AlphaFamily::new(0.0).is_err());
        assert!(AlphaFamily::new(2.5).is_err());
    }

    #[test]
    fn green_values() {
        assert_eq!(green_g(1.0, &AlphaFamily::euler()).unwrap(), 0.0);
        assert_eq!(green_g(1.0, &AlphaFamily::sqg()).unwrap(), 1.0);
        assert!((green_g(2.0, &gsqg(1.5)).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(green_g(0.0, &AlphaFamily::sqg()).is_err());
    }

    #[test]
    fn kernel_f_values() {
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.5)] {
            assert_eq!(kernel_f(1.0, 0.0, &a).unwrap(), 0.0);
        }
        let f = kernel_f(1.0, 1.0, &AlphaFamily::sqg()).unwrap();
        assert!((f - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-15);
        let g = gsqg(1.5);
        let oracle = romberg(|s| (4.0 + s * s).powf(-0.25), 0.0, 1.0, 14);
        assert!((kernel_f(2.0, 1.0, &g).unwrap() - oracle).abs() < 1e-10);
        assert!(kernel_f(0.0, 1.0, &g).is_err());
    }

    #[test]
    fn euler_f_matches_quadrature() {
        let e = AlphaFamily::euler();
        let oracle = romberg(|s| -(0.49 + s * s).sqrt().ln() / (2.0 * PI), 0.0, 1.3, 14);
        assert!((kernel_f(-0.7, 1.3, &e).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn kernel_k_is_g_y_minus_f() {
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.5), gsqg(0.5)] {
            for (x, y) in [(0.3, 0.8), (2.0, -1.5), (-1.2, 0.4), (5.0, 0.05)] {
                let direct = green_g(x, &a).unwrap() * y - kernel_f(x, y, &a).unwrap();
                let k = kernel_k(x, y, &a).unwrap();
                assert!((k - direct).abs() < 1e-10 * (1.0 + direct.abs()), "{a} x={x} y={y}");
            }
        }
    }

    #[test]
    fn kernel_k_odd_in_y() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.3)] {
            assert_eq!(kernel_k(3.0, 0.0, &a).unwrap(), 0.0);
            for _ in 0..50 {
                let x: f64 = rng.gen_range(0.1..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let y: f64 = rng.gen_range(-3.0..3.0);
                let p = kernel_k(x, y, &a).unwrap();
                let m = kernel_k(x, -y, &a).unwrap();
                assert!((p + m).abs() <= 1e-14 * p.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn kernel_k_small_slope_branches_agree() {
        // both sides of the series switch at |y/x| = 0.1
        for a in [AlphaFamily::euler(), AlphaFamily::sqg()] {
            let below = kernel_k(1.0, 0.099_999_999, &a).unwrap();
            let above = kernel_k(1.0, 0.100_000_001, &a).unwrap();
            assert!((below - above).abs() < 1e-6 * below.abs());
            // leading behaviour −G'(x)/(6x) y³
            let y: f64 = 1e-3;
            let lead = match a.regime() {
                Regime::Euler => y.powi(3) / (12.0 * PI),
                _ => y.powi(3) / 6.0,
            };
            let k = kernel_k(1.0, y, &a).unwrap();
            assert!((k / lead - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn kernel_k_decay_exponent() {
        for a in [AlphaFamily::sqg(), gsqg(1.5), AlphaFamily::euler()] {
            let xs: Vec<f64> = (0..20).map(|i| 50.0 * 16f64.powf(i as f64 / 19.0)).collect();
            let pts: Vec<(f64, f64)> = xs
                .iter()
                .map(|&x| (x.ln(), kernel_k(x, 1.0, &a).unwrap().abs().ln()))
                .collect();
            let n = pts.len() as f64;
            let (sx, sy) = pts.iter().fold((0.0, 0.0), |(p, q), (x, y)| (p + x, q + y));
            let (mx, my) = (sx / n, sy / n);
            let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
                / pts.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
            assert!((slope + (4.0 - a.alpha())).abs() < 0.05, "{a}: slope {slope}");
        }
        // |K(100, 1)| bounded by the fitted tail constant
        let sqg = AlphaFamily::sqg();
        let c = [50.0, 100.0, 200.0]
            .iter()
            .map(|&x: &f64| kernel_k(x, 1.0, &sqg).unwrap().abs() * x.powi(3))
            .fold(0.0, f64::max);
        assert!(kernel_k(100.0, 1.0, &sqg).unwrap().abs() <= c / 1e6 * (1.0 + 1e-12));
    }

    #[test]
    fn periodic_green_euler_values() {
        let e = AlphaFamily::euler();
        assert!(periodic_green_gp(PI, 0.0, &e).unwrap().abs() < 1e-16);
        assert!(periodic_green_gp(0.0, 0.0, &e).is_err());
        assert!(periodic_green_gp(2.0 * PI, 0.0, &e).is_err());
        // series path differs by the constant −ln2/(2π)
        for (x, y) in [(0.7, 0.2), (2.5, -1.0), (-3.0, 0.5)] {
            let closed = periodic_green_gp(x, y, &e).unwrap();
            let (series, _) = periodic_green_series(x, y, &e, &LatticeSum::default()).unwrap();
            assert!((series - closed + 2f64.ln() / (2.0 * PI)).abs() < 1e-12, "x={x} y={y}");
        }
    }

    #[test]
    fn periodic_green_sqg_against_brute_force() {
        // direct pair sums up to 10^7 plus integral tail bound ∫ (x² + y²)/(2π)^3 n^{-3}
        let sqg = AlphaFamily::sqg();
        for (x, y) in [(PI, 0.0), (1.0, 0.5)] {
            let big_n = 10_000_000usize;
            let mut sum = 0.0;
            for n in (1..=big_n).rev() {
                let s = 2.0 * PI * n as f64;
                sum += 1.0 / (x + s).hypot(y) + 1.0 / (x - s).hypot(y) - 1.0 / (PI * n as f64);
            }
            let rho2 = x * x + y * y;
            // pair term ≈ (2x² − y²)/(2π n)^3 ... integral tail, leading order
            let tail = (2.0 * x * x - y * y) / (2.0 * PI).powi(3) / (2.0 * (big_n as f64).powi(2));
            let brute = 1.0 / rho2.sqrt() + sum + tail;
            let gp = periodic_green_gp(x, y, &sqg).unwrap();
            assert!((gp - brute).abs() < 1e-10, "x={x} y={y}: {gp} vs {brute}");
        }
    }

    #[test]
    fn periodic_green_periodic_and_even() {
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.5), gsqg(0.5)] {
            for (x, y) in [(0.4, 0.3), (2.9, -0.7), (1.0, 2.0)] {
                let g = periodic_green_gp(x, y, &a).unwrap();
                assert!((periodic_green_gp(x + 2.0 * PI, y, &a).unwrap() - g).abs() < 1e-12);
                assert!((periodic_green_gp(-x, y, &a).unwrap() - g).abs() < 1e-12);
                assert!((periodic_green_gp(x, -y, &a).unwrap() - g).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn green_difference_matches_two_evaluations() {
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.5), gsqg(0.5)] {
            for (x, y) in [(0.4, 0.3), (2.9, -0.7), (-1.0, 2.0)] {
                let d = periodic_green_difference(x, y, &a, &LatticeSum::default()).unwrap();
                let two = periodic_green_gp(x, 0.0, &a).unwrap() - periodic_green_gp(x, y, &a).unwrap();
                assert!((d - two).abs() < 1e-11, "{a}: {d} vs {two}");
            }
        }
    }

    #[test]
    fn green_difference_small_y_is_quadratic() {
        // G_p(x,0) − G_p(x,y) ≈ −y²/2 ∂_r-type coefficient: ratio test D(y)/D(y/2) → 4
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.5)] {
            let l = LatticeSum::default();
            let d1 = periodic_green_difference(1.0, 1e-6, &a, &l).unwrap();
            let d2 = periodic_green_difference(1.0, 5e-7, &a, &l).unwrap();
            assert!((d1 / d2 - 4.0).abs() < 1e-9, "{a}: {}", d1 / d2);
        }
    }

    #[test]
    fn tail_difference_matches_direct_difference() {
        for (x, y) in [(0.5, 0.8), (-2.0, 1.5), (3.0, 0.1)] {
            let sigma = 1.0;
            let direct = power_tail(x, 0.0, sigma, 8, 12) - power_tail(x, y, sigma, 8, 12);
            let series = power_tail_difference(x, y, sigma, 8, 12);
            assert!((direct - series).abs() < 1e-15, "{direct} vs {series}");
        }
    }

    #[test]
    fn b_values() {
        assert!((symbol_b(2.0, &AlphaFamily::euler()).unwrap() - 0.25).abs() < 1e-16);
        assert_eq!(symbol_b(1.0, &AlphaFamily::sqg()).unwrap(), 0.0);
        let root_two_pi = (2.0 * PI).sqrt();
        assert!((symbol_b(1.0, &gsqg(1.5)).unwrap() - root_two_pi).abs() < 1e-13);
        assert!(symbol_b(0.0, &AlphaFamily::sqg()).is_err());
    }

    #[test]
    fn b_alpha_values_and_sign() {
        assert!((constant_b_alpha(1.5).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-13);
        assert!((constant_b_alpha(0.5).unwrap() + 2f64.sqrt() * 2.0 * PI.sqrt()).abs() < 1e-12);
        assert!(constant_b_alpha(1.0).is_err());
        assert!(constant_b_alpha(2.0).is_err());
        for i in 1..=50 {
            let alpha = 2.0 * i as f64 / 51.0;
            if (alpha - 1.0).abs() < 1e-12 {
                continue;
            }
            let b = constant_b_alpha(alpha).unwrap();
            assert_eq!(b.signum(), (alpha - 1.0).signum(), "alpha = {alpha}");
        }
    }

    #[test]
    fn a_values() {
        assert_eq!(symbol_a(3.0, &AlphaFamily::euler()), 1.5);
        assert_eq!(symbol_a(1.0, &AlphaFamily::sqg()), 0.0);
        assert!((symbol_a(2.0, &AlphaFamily::sqg()) + 4.0 * 2f64.ln()).abs() < 1e-15);
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(0.5), gsqg(1.5)] {
            assert_eq!(symbol_a(0.0, &a), 0.0);
        }
    }

    #[test]
    fn c_alpha_values() {
        let c = constant_c_alpha(1.5).unwrap();
        assert!((c - 2.0 / 3.0 * (2.0 * PI).sqrt()).abs() < 1e-13);
        let quad = c_alpha_quadrature(0.5).unwrap();
        let closed = c_alpha_closed_form(0.5).unwrap();
        assert!((quad - closed).abs() < 1e-8, "{quad} vs {closed}");
        assert!(constant_c_alpha(1.0).is_err());
    }

    #[test]
    fn c_alpha_sign_follows_alpha_minus_one() {
        for i in 1..40 {
            let alpha = 2.0 * i as f64 / 40.0;
            if alpha == 1.0 {
                continue;
            }
            let c = constant_c_alpha(alpha).unwrap();
            assert_eq!(c.signum(), (alpha - 1.0).signum(), "alpha = {alpha}");
        }
    }

    #[test]
    fn kernel_t_examples() {
        let sqg = AlphaFamily::sqg();
        assert_eq!(kernel_t(0.0, 0.0, 0.0, &sqg), 0.0);
        assert!((kernel_t(1.0, 1.0, -1.0, &sqg) - 4.0 * 2f64.ln()).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for a in [AlphaFamily::euler(), sqg, gsqg(1.5)] {
            for _ in 0..100 {
                let k: [f64; 3] = [rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)];
                let t = kernel_t(k[0], k[1], k[2], &a);
                for p in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]] {
                    let tp = kernel_t(k[p[0]], k[p[1]], k[p[2]], &a);
                    assert!((t - tp).abs() < 1e-12 * (1.0 + t.abs()));
                }
            }
        }
    }

    #[test]
    fn kernel_s_examples() {
        let sqg = AlphaFamily::sqg();
        let s = kernel_s(&KernelQuery::new([1, 1, -1, -1]), &sqg);
        assert!((s - 4.0 * 2f64.ln()).abs() < 1e-14);
        for alpha in [1.25, 1.5, 1.75, 2.0] {
            let a = AlphaFamily::new(alpha).unwrap();
            for q in [[0, 3, -1, -2], [5, 0, -5, 0], [2, -7, 0, 5]] {
                assert!(kernel_s(&KernelQuery::new(q), &a).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn euler_triad_identity() {
        let e = AlphaFamily::euler();
        for k in 1..100 {
            let k = k as f64 * 0.37;
            let v = symbol_a(k, &e) - symbol_a(2.0 * k, &e) + symbol_a(3.0 * k, &e) / 3.0;
            assert!(v.abs() < 1e-13);
        }
    }

    /// Sum of the magnitudes of the ten symbol evaluations in S; the
    /// roundoff in S is a small multiple of this.
    fn term_scale(k: [f64; 4], a: &AlphaFamily) -> f64 {
        let mut scale: f64 = k.iter().map(|&v| symbol_a(v, a).abs()).sum();
        for i in 0..4 {
            for j in i + 1..4 {
                scale += symbol_a(k[i] + k[j], a).abs();
            }
        }
        scale.max(1.0)
    }

    #[test]
    fn s_equals_t_on_constraint() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.5), gsqg(0.5)] {
            for _ in 0..100_000 {
                let k2 = rng.gen_range(-200i64..=200);
                let k3 = rng.gen_range(-200i64..=200);
                let k4 = rng.gen_range(-200i64..=200);
                let q = KernelQuery::new([-(k2 + k3 + k4), k2, k3, k4]);
                assert!(q.on_constraint());
                let s = kernel_s(&q, &a);
                let t = kernel_t(k2 as f64, k3 as f64, k4 as f64, &a);
                let scale = term_scale(q.as_f64(), &a);
                assert!((s - t).abs() <= 1e-14 * scale, "{a}: {:?}", q.k);
            }
        }
    }

    #[test]
    fn s_equals_t_absolute_form_small_wavenumbers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for a in [AlphaFamily::euler(), AlphaFamily::sqg(), gsqg(1.5), gsqg(0.5)] {
            for _ in 0..100_000 {
                let k2 = rng.gen_range(-20i64..=20);
                let k3 = rng.gen_range(-20i64..=20);
                let k4 = rng.gen_range(-20i64..=20);
                let q = KernelQuery::new([-(k2 + k3 + k4), k2, k3, k4]);
                let s = kernel_s(&q, &a);
                let t = kernel_t(k2 as f64, k3 as f64, k4 as f64, &a);
                assert!((s - t).abs() <= 1e-9 * (1.0 + s.abs()));
            }
        }
    }

    #[test]
    fn alpha_serializes_as_number() {
        let a: AlphaFamily = serde_json::from_str("1.5").unwrap();
        assert_eq!(a.regime(), Regime::Gsqg);
        assert_eq!(serde_json::to_string(&AlphaFamily::sqg()).unwrap(), "1.0");
        assert!(serde_json::from_str::<AlphaFamily>("3.0").is_err());
    }

    #[test]
    fn symbol_table_matches_pointwise() {
        let g = Grid::new(16).unwrap();
        let t = SymbolTable::new(g, AlphaFamily::sqg());
        for (j, k) in g.wavenumbers().enumerate() {
            assert_eq!(t.a()[j], symbol_a(k as f64, &AlphaFamily::sqg()));
        }
        assert_eq!(t.b()[0], 0.0);
        assert_eq!(t.a_padded().len(), 32);
        assert!((t.max_frequency() - 14.0 * 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn s_homogeneity_on_constraint() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (a, degree) in [
            (AlphaFamily::sqg(), 2.0),
            (gsqg(1.5), 1.5),
            (gsqg(0.5), 2.5),
            (AlphaFamily::euler(), 1.0),
        ] {
            for _ in 0..500 {
                let k2 = rng.gen_range(-30i64..=30);
                let k3 = rng.gen_range(-30i64..=30);
                let k4 = rng.gen_range(-30i64..=30);
                let k = [-(k2 + k3 + k4), k2, k3, k4];
                let s = kernel_s(&KernelQuery::new(k), &a);
                for lambda in [2i64, 3, 5] {
                    let scaled = kernel_s(&KernelQuery::new(k.map(|v| v * lambda)), &a);
                    let expect = (lambda as f64).powf(degree) * s;
                    let scale = term_scale(k.map(|v| (v * lambda) as f64), &a);
                    assert!(
                        (scaled - expect).abs() <= 1e-14 * scale,
                        "{a} {k:?} λ={lambda}: {scaled} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn s_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let perms: [[usize; 4]; 6] = [[1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2], [3, 2, 1, 0], [2, 3, 0, 1], [1, 2, 3, 0]];
        for a in [AlphaFamily::sqg(), gsqg(1.5), gsqg(0.5)] {
            for _ in 0..200 {
                let k: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-50.0..50.0));
                let s = kernel_s_real(k, &a);
                assert_eq!(kernel_s_real(k.map(|v| -v), &a), s);
                for p in perms {
                    let sp = kernel_s_real(p.map(|i| k[i]), &a);
                    assert!((sp - s).abs() < 1e-12 * (1.0 + s.abs()));
                }
            }
        }
    }
}
