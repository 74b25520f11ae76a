//! Special functions used by the model constants and the periodic Green's
//! function tails.
//!
//! Γ is taken from `statrs` (Lanczos, reflection for negative arguments);
//! the zeta functions are summed here with Euler–Maclaurin corrections.

pub use statrs::function::gamma::gamma;

/// B_2, B_4, ..., B_20 divided by (2m)!.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

/// Number of directly summed terms used for the Riemann zeta function.
pub const ZETA_DIRECT_TERMS: usize = 10_000;

/// Hurwitz zeta ζ(p, a) = Σ_{j≥0} (a + j)^{-p} for p > 1, a > 0.
///
/// `direct` terms are summed explicitly (smallest first) and the remainder
/// is replaced by the Euler–Maclaurin expansion with ten Bernoulli terms.
pub fn hurwitz_zeta(p: f64, a: f64, direct: usize) -> f64 {
    debug_assert!(p > 1.0 && a > 0.0);
    let tail_start = a + direct as f64;
    let mut tail = tail_start.powf(1.0 - p) / (p - 1.0) + 0.5 * tail_start.powf(-p);
    // rising factorial p (p+1) ... (p+2m-2) accumulated alongside the power
    let mut rising = p;
    let mut power = tail_start.powf(-p - 1.0);
    let inv_sq = 1.0 / (tail_start * tail_start);
    for (m, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coeff * rising * power;
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        let m = m as f64 + 1.0;
        rising *= (p + 2.0 * m - 1.0) * (p + 2.0 * m);
        power *= inv_sq;
    }
    let head: f64 = (0..direct).rev().map(|j| (a + j as f64).powf(-p)).sum();
    head + tail
}

/// Riemann zeta ζ(p) for p > 1.
pub fn riemann_zeta(p: f64) -> f64 {
    hurwitz_zeta(p, 1.0, ZETA_DIRECT_TERMS)
}

/// Gegenbauer polynomials C_m^{(λ)}(t) for m = 0..=max_degree.
pub fn gegenbauer(lambda: f64, t: f64, max_degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(1.0);
    if max_degree == 0 {
        return out;
    }
    out.push(2.0 * lambda * t);
    for m in 2..=max_degree {
        let mf = m as f64;
        let next = (2.0 * t * (mf + lambda - 1.0) * out[m - 1]
            - (mf + 2.0 * lambda - 2.0) * out[m - 2])
            / mf;
        out.push(next);
    }
    out
}
