//! Constants of the SQG energy estimate and the τ-ODE that bounds the
//! existence time.

use serde::Serialize;

use crate::error::{FrontError, Result};
use crate::special::riemann_zeta;

/// Numerical constant in the SQG kernel bound.
pub const C2: f64 = 5.0;

/// C₀(s) = 3^{s+1} − 3^{1−s}.
pub fn c0_constant(s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(FrontError::domain("c0_constant", format!("s = {s} must be positive")));
    }
    Ok(3f64.powf(s + 1.0) - 3f64.powf(1.0 - s))
}

/// Positive root of 3^{s+1} − 3^{1−s} = 2(2s + 1), by bisection.
pub fn s0_root() -> f64 {
    let g = |s: f64| 3f64.powf(s + 1.0) - 3f64.powf(1.0 - s) - 2.0 * (2.0 * s + 1.0);
    let (mut lo, mut hi) = (0.1, 1.0);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Z(s) = √(2ζ(2s)), the ℓ¹–Ḣˢ Sobolev constant on the circle.
pub fn zeta_z(s: f64) -> Result<f64> {
    if !(s > 0.5 && s.is_finite()) {
        return Err(FrontError::domain("zeta_z", format!("s = {s} must exceed 1/2")));
    }
    Ok((2.0 * riemann_zeta(2.0 * s)).sqrt())
}

/// C₃(s) = C₀(s) C₂ Z(s − 1) Z(s − 2) for s > 5/2.
pub fn c3_constant(s: f64) -> Result<f64> {
    if !(s > 2.5 && s.is_finite()) {
        return Err(FrontError::domain("c3_constant", format!("s = {s} must exceed 5/2")));
    }
    Ok(c0_constant(s)? * C2 * zeta_z(s - 1.0)? * zeta_z(s - 2.0)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C4Infimum {
    pub s_min: f64,
    pub c3_min: f64,
    /// C₃ just above 5/2 and at the upper end of the search interval; both
    /// exceed `c3_min`, so the minimum is interior.
    pub c3_left: f64,
    pub c3_right: f64,
}

pub const C4_SEARCH_UPPER: f64 = 60.0;

/// Infimum of C₃ over (5/2, 60]: a coarse scan to bracket the minimum,
/// then golden-section refinement.
pub fn c4_infimum() -> C4Infimum {
    let c3 = |s: f64| c3_constant(s).expect("s inside (5/2, 60]");
    let lo = 2.5 + 1e-6;
    let hi = C4_SEARCH_UPPER;
    let n = 2000;
    let node = |j: usize| lo + (hi - lo) * j as f64 / n as f64;
    let best = (0..=n)
        .map(|j| (j, c3(node(j))))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(j, _)| j)
        .unwrap();
    let (mut a, mut b) = (node(best.saturating_sub(1)), node((best + 1).min(n)));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (c3(x1), c3(x2));
    while b - a > 1e-10 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = c3(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = c3(x2);
        }
    }
    let s_min = 0.5 * (a + b);
    C4Infimum {
        s_min,
        c3_min: c3(s_min),
        c3_left: c3(lo),
        c3_right: c3(hi),
    }
}

/// Event level for the τ-ODE: integration stops once τ reaches 5/2 + 1e−6.
pub const TAU_EVENT: f64 = 2.5 + 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauCurve {
    /// Time at which τ reaches [`TAU_EVENT`]; `None` if that does not happen
    /// before `horizon`.
    pub t_star: Option<f64>,
    pub horizon: f64,
    /// Accepted (t, τ) pairs, starting at (0, τ₀).
    pub samples: Vec<(f64, f64)>,
}

/// Integrates τ̇ = −M E₀ C₃(τ), τ(0) = τ₀, with an adaptive embedded RK
/// pair (Dormand–Prince 5(4)) and locates the event τ = 5/2 + 1e−6.
pub fn tau_existence(tau0: f64, e0: f64, m: f64, horizon: f64) -> Result<TauCurve> {
    if !(tau0 > TAU_EVENT && tau0.is_finite()) {
        return Err(FrontError::domain("tau_existence", format!("tau0 = {tau0} must exceed 5/2")));
    }
    if !(e0 >= 0.0 && e0.is_finite()) {
        return Err(FrontError::domain("tau_existence", format!("E0 = {e0} must be nonnegative")));
    }
    if !(m > 1.0 && m.is_finite()) {
        return Err(FrontError::domain("tau_existence", format!("M = {m} must exceed 1")));
    }
    if !(horizon > 0.0) {
        return Err(FrontError::domain("tau_existence", format!("horizon = {horizon} must be positive")));
    }
    let mut samples = vec![(0.0, tau0)];
    if e0 == 0.0 {
        return Ok(TauCurve { t_star: None, horizon, samples });
    }
    let rate = m * e0;
    // C₃ is only defined above 5/2; a trial stage that overshoots yields
    // NaN and the step is rejected.
    let f = |tau: f64| match c3_constant(tau) {
        Ok(c) => -rate * c,
        Err(_) => f64::NAN,
    };
    let (rtol, atol) = (1e-12, 1e-14);
    let (mut t, mut tau) = (0.0, tau0);
    let mut k1 = f(tau);
    let mut h = 1e-3 * (tau0 - 2.5) / k1.abs();
    loop {
        if t >= horizon {
            return Ok(TauCurve { t_star: None, horizon, samples });
        }
        h = h.min(horizon - t);
        let (next, err, k7) = dopri_step(&f, tau, k1, h);
        let scale = atol + rtol * tau.abs().max(next.abs());
        let ratio = if err.is_finite() { err / scale } else { f64::INFINITY };
        if ratio <= 1.0 && next.is_finite() {
            if next <= TAU_EVENT {
                let dt = locate_event(&f, tau, h);
                let t_star = t + dt;
                samples.push((t_star, TAU_EVENT));
                return Ok(TauCurve { t_star: Some(t_star), horizon, samples });
            }
            t += h;
            tau = next;
            k1 = k7;
            samples.push((t, tau));
            let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        } else {
            let shrink = if ratio.is_finite() { (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.5) } else { 0.25 };
            h *= shrink;
            if h < 1e-300 {
                return Err(FrontError::domain("tau_existence", "step size underflow"));
            }
        }
    }
}

/// Finds the sub-step `s ∈ (0, h]` at which one RK step from τ lands on
/// the event level, by bisection on the step length.
fn locate_event<F: Fn(f64) -> f64>(f: &F, tau: f64, h: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (next, _, _) = dopri_step(f, tau, f(tau), mid);
        if next.is_finite() && next > TAU_EVENT {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// One Dormand–Prince step for an autonomous scalar ODE. Returns the
/// fifth-order value, the embedded error estimate and f at the new point.
fn dopri_step<F: Fn(f64) -> f64>(f: &F, y: f64, k1: f64, h: f64) -> (f64, f64, f64) {
    let k2 = f(y + h * (k1 / 5.0));
    let k3 = f(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    let k4 = f(y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    let k5 = f(y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
    let k6 = f(y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4
        - 5103.0 / 18656.0 * k5));
    let y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5
        + 11.0 / 84.0 * k6);
    let k7 = f(y5);
    let e = h * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4 - 17253.0 / 339200.0 * k5
        + 22.0 / 525.0 * k6 - 1.0 / 40.0 * k7);
    (y5, e.abs(), k7)
}
