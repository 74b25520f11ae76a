//! Periodic grid bookkeeping and Fourier coefficient containers.
//!
//! Coefficients follow `c(k) = (1/N) Σ_j f(x_j) e^{-i k x_j}` on the
//! collocation points `x_j = 2πj/N`, and are stored in FFT order: index `j`
//! holds wavenumber `j` for `j < N/2` and `j - N` otherwise. The Nyquist
//! entry (`k = -N/2`) is kept by [`Spectrum`] so transforms round-trip
//! exactly, but evolving fields ([`FrontState`]) carry the symmetric band
//! `|k| <= N/2 - 1` only.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Grid {
    n_modes: usize,
}

impl TryFrom<usize> for Grid {
    type Error = FrontError;
    fn try_from(n: usize) -> Result<Self> {
        Grid::new(n)
    }
}

impl From<Grid> for usize {
    fn from(g: Grid) -> usize {
        g.n_modes
    }
}

impl Grid {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes < 8 || !n_modes.is_power_of_two() {
            return Err(FrontError::InvalidGrid(n_modes));
        }
        Ok(Grid { n_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Largest retained wavenumber of an evolving field, `N/2 - 1`.
    pub fn k_max(&self) -> i64 {
        (self.n_modes / 2) as i64 - 1
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n_modes as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_modes)
            .map(|j| 2.0 * PI * j as f64 / self.n_modes as f64)
            .collect()
    }

    pub fn wavenumber(&self, index: usize) -> i64 {
        wavenumber(index, self.n_modes)
    }

    pub fn index(&self, k: i64) -> usize {
        index_of(k, self.n_modes)
    }

    /// Wavenumbers in storage order.
    pub fn wavenumbers(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.n_modes).map(move |j| self.wavenumber(j))
    }

    /// Size of the zero-padded grid used for cubic products.
    pub fn padded_len(&self) -> usize {
        2 * self.n_modes
    }
}

pub(crate) fn wavenumber(index: usize, len: usize) -> i64 {
    if index < len / 2 {
        index as i64
    } else {
        index as i64 - len as i64
    }
}

pub(crate) fn index_of(k: i64, len: usize) -> usize {
    k.rem_euclid(len as i64) as usize
}

/// Forward/inverse FFT plans of one length, with scratch.
pub struct Transform {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform").field("len", &self.len).finish()
    }
}

impl Clone for Transform {
    fn clone(&self) -> Self {
        Transform {
            len: self.len,
            forward: self.forward.clone(),
            inverse: self.inverse.clone(),
            scratch: vec![Complex64::default(); self.scratch.len()],
        }
    }
}

impl Transform {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Transform {
            len,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Physical values -> normalized coefficients, in place.
    pub fn analyze(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
        let scale = 1.0 / self.len as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
    }

    /// Coefficients -> physical values, in place.
    pub fn synthesize(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
    }

    /// Synthesizes two Hermitian spectra with one complex transform.
    /// On return `buf` holds `x + i y`.
    pub fn synthesize_pair(&mut self, x_hat: &[Complex64], y_hat: &[Complex64], buf: &mut [Complex64]) {
        let i = Complex64::i();
        for ((b, x), y) in buf.iter_mut().zip(x_hat).zip(y_hat) {
            *b = x + i * y;
        }
        self.synthesize(buf);
    }

    /// Analyzes two real signals packed as `buf = x + i y`, writing their
    /// coefficient arrays to `x_hat` and `y_hat`.
    pub fn analyze_pair(&mut self, buf: &mut [Complex64], x_hat: &mut [Complex64], y_hat: &mut [Complex64]) {
        self.analyze(buf);
        let len = self.len;
        for j in 0..len {
            let z = buf[j];
            let zc = buf[(len - j) % len].conj();
            x_hat[j] = 0.5 * (z + zc);
            y_hat[j] = Complex64::new(0.0, -0.5) * (z - zc);
        }
    }
}

/// Fourier coefficients of a real periodic function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let half = (self.grid.n_modes / 2) as i64;
        if k < -half || k >= half {
            return Complex64::default();
        }
        self.coeffs[self.grid.index(k)]
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Builds a spectrum from raw coefficients, checking finiteness and
    /// Hermitian symmetry and then symmetrizing exactly.
    pub fn from_coeffs(grid: Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        let n = grid.n_modes;
        if coeffs.len() != n {
            return Err(FrontError::LengthMismatch {
                expected: n,
                got: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(FrontError::NonFinite { index });
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        for j in 0..=n / 2 {
            let mirror = (n - j) % n;
            let defect = (coeffs[j] - coeffs[mirror].conj()).norm();
            if defect > HERMITIAN_TOL * scale {
                return Err(FrontError::NotHermitian {
                    k: grid.wavenumber(j),
                    defect,
                });
            }
        }
        symmetrize(&mut coeffs);
        Ok(Spectrum { grid, coeffs })
    }

    pub(crate) fn from_raw(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.n_modes);
        Spectrum { grid, coeffs }
    }

    pub fn to_values(&self) -> Vec<f64> {
        inverse_transform(self)
    }
}

pub(crate) fn symmetrize(coeffs: &mut [Complex64]) {
    let n = coeffs.len();
    coeffs[0].im = 0.0;
    coeffs[n / 2].im = 0.0;
    for j in 1..n / 2 {
        let avg = 0.5 * (coeffs[j] + coeffs[n - j].conj());
        coeffs[j] = avg;
        coeffs[n - j] = avg.conj();
    }
}

/// The front displacement φ(·, t): zero-mean, real, band `|k| <= N/2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontState {
    spectrum: Spectrum,
    pub time: f64,
}

impl FrontState {
    pub fn zero(grid: Grid) -> Self {
        FrontState {
            spectrum: Spectrum::from_raw(grid, vec![Complex64::default(); grid.n_modes]),
            time: 0.0,
        }
    }

    /// Samples on the collocation grid; the mean and the Nyquist mode are
    /// removed.
    pub fn from_values(grid: Grid, values: &[f64], time: f64) -> Result<Self> {
        let spectrum = forward_transform(grid, values)?;
        Ok(Self::from_spectrum(spectrum, time))
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>, time: f64) -> Result<Self> {
        Ok(Self::from_spectrum(Spectrum::from_coeffs(grid, coeffs)?, time))
    }

    /// Projects an arbitrary spectrum onto the evolving band.
    pub fn from_spectrum(mut spectrum: Spectrum, time: f64) -> Self {
        let n = spectrum.grid.n_modes;
        spectrum.coeffs[0] = Complex64::default();
        spectrum.coeffs[n / 2] = Complex64::default();
        FrontState { spectrum, time }
    }

    /// Wraps coefficients produced internally; enforces the invariants
    /// without the tolerance check.
    pub(crate) fn from_raw(grid: Grid, mut coeffs: Vec<Complex64>, time: f64) -> Self {
        symmetrize(&mut coeffs);
        let n = grid.n_modes;
        coeffs[0] = Complex64::default();
        coeffs[n / 2] = Complex64::default();
        FrontState {
            spectrum: Spectrum::from_raw(grid, coeffs),
            time,
        }
    }

    pub fn grid(&self) -> Grid {
        self.spectrum.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.spectrum.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.spectrum.coeff(k)
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn values(&self) -> Vec<f64> {
        inverse_transform(&self.spectrum)
    }

    /// Spatial derivative sampled on the grid.
    pub fn derivative_values(&self) -> Vec<f64> {
        let grid = self.grid();
        let coeffs: Vec<Complex64> = self
            .coeffs()
            .iter()
            .zip(grid.wavenumbers())
            .map(|(c, k)| Complex64::new(0.0, k as f64) * c)
            .collect();
        inverse_transform(&Spectrum::from_raw(grid, coeffs))
    }

    /// Discrete ℓ² norm of the coefficients, `(Σ |c(k)|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Exact reality/zero-mean check used by the integrator assertions.
    pub fn satisfies_invariants(&self) -> bool {
        let c = self.coeffs();
        let n = c.len();
        c[0] == Complex64::default()
            && c[n / 2] == Complex64::default()
            && (1..n / 2).all(|j| c[j] == c[n - j].conj())
    }

    /// `self + scale * other` (same grid).
    pub fn axpy(&self, scale: f64, other: &FrontState) -> Result<FrontState> {
        check_same_grid(self.grid(), other.grid())?;
        let coeffs = self
            .coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(FrontState::from_raw(self.grid(), coeffs, self.time))
    }

    /// Translates the profile: φ(x) -> φ(x - shift).
    pub fn translated(&self, shift: f64) -> FrontState {
        let grid = self.grid();
        let coeffs = self
            .coeffs()
            .iter()
            .zip(grid.wavenumbers())
            .map(|(c, k)| c * Complex64::from_polar(1.0, -(k as f64) * shift))
            .collect();
        FrontState::from_raw(grid, coeffs, self.time)
    }
}

pub(crate) fn check_same_grid(a: Grid, b: Grid) -> Result<()> {
    if a != b {
        return Err(FrontError::GridMismatch(a.n_modes, b.n_modes));
    }
    Ok(())
}

/// Real collocation values to Hermitian coefficients.
pub fn forward_transform(grid: Grid, values: &[f64]) -> Result<Spectrum> {
    let n = grid.n_modes;
    if values.len() != n {
        return Err(FrontError::LengthMismatch {
            expected: n,
            got: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(FrontError::NonFinite { index });
    }
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Transform::new(n).analyze(&mut buf);
    symmetrize(&mut buf);
    Ok(Spectrum::from_raw(grid, buf))
}

pub fn inverse_transform(spectrum: &Spectrum) -> Vec<f64> {
    let mut buf = spectrum.coeffs.clone();
    Transform::new(buf.len()).synthesize(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Multiplies each coefficient by an even real symbol given in storage order.
pub fn apply_multiplier(state: &FrontState, symbol: &[f64]) -> Result<FrontState> {
    let grid = state.grid();
    let n = grid.n_modes;
    if symbol.len() != n {
        return Err(FrontError::LengthMismatch {
            expected: n,
            got: symbol.len(),
        });
    }
    for j in 1..n / 2 {
        let (s, m) = (symbol[j], symbol[n - j]);
        if (s - m).abs() > 1e-12 * s.abs().max(m.abs()).max(1.0) {
            return Err(FrontError::SymbolNotEven { k: j as i64 });
        }
    }
    let coeffs = state
        .coeffs()
        .iter()
        .zip(symbol)
        .map(|(c, s)| c * s)
        .collect();
    Ok(FrontState::from_raw(grid, coeffs, state.time))
}

/// Copies a band-limited spectrum of length `n` into a zero-padded array of
/// length `m >= n`. A Nyquist entry is split evenly between ±n/2.
pub(crate) fn pad_into(coeffs: &[Complex64], out: &mut [Complex64]) {
    let n = coeffs.len();
    let m = out.len();
    out.iter_mut().for_each(|c| *c = Complex64::default());
    for j in 0..n / 2 {
        out[j] = coeffs[j];
    }
    for j in 1..n / 2 {
        out[m - j] = coeffs[n - j];
    }
    let nyq = coeffs[n / 2];
    if nyq != Complex64::default() {
        out[n / 2] = 0.5 * nyq;
        out[m - n / 2] = 0.5 * nyq;
    }
}

/// Copies the band `|k| <= n/2 - 1` of a padded spectrum; Nyquist set to 0.
pub(crate) fn truncate_into(padded: &[Complex64], out: &mut [Complex64]) {
    let n = out.len();
    let m = padded.len();
    for j in 0..n / 2 {
        out[j] = padded[j];
    }
    out[n / 2] = Complex64::default();
    for j in 1..n / 2 {
        out[n - j] = padded[m - j];
    }
}

/// Coefficients of the pointwise product `p q r` on the band `|k| < N/2`,
/// free of aliasing: each factor is zero-padded to `2N` points first.
pub fn dealiased_triple_product(p: &Spectrum, q: &Spectrum, r: &Spectrum) -> Result<Spectrum> {
    let grid = p.grid();
    check_same_grid(grid, q.grid())?;
    check_same_grid(grid, r.grid())?;
    let n = grid.n_modes;
    if [p, q, r].iter().any(|s| s.coeffs().iter().all(|c| *c == Complex64::default())) {
        return Ok(Spectrum::from_raw(grid, vec![Complex64::default(); n]));
    }
    let m = grid.padded_len();
    let mut tf = Transform::new(m);
    let mut pq_hat = [vec![Complex64::default(); m], vec![Complex64::default(); m]];
    pad_into(p.coeffs(), &mut pq_hat[0]);
    pad_into(q.coeffs(), &mut pq_hat[1]);
    let mut pq = vec![Complex64::default(); m];
    tf.synthesize_pair(&pq_hat[0], &pq_hat[1], &mut pq);
    let mut r_phys = vec![Complex64::default(); m];
    pad_into(r.coeffs(), &mut r_phys);
    tf.synthesize(&mut r_phys);
    let mut prod: Vec<Complex64> = pq
        .iter()
        .zip(&r_phys)
        .map(|(a, b)| Complex64::new(a.re * a.im * b.re, 0.0))
        .collect();
    tf.analyze(&mut prod);
    let mut out = vec![Complex64::default(); n];
    truncate_into(&prod, &mut out);
    symmetrize(&mut out);
    Ok(Spectrum::from_raw(grid, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct_dft(values: &[f64]) -> Vec<Complex64> {
        let n = values.len();
        (0..n)
            .map(|j| {
                let k = wavenumber(j, n) as f64;
                values
                    .iter()
                    .enumerate()
                    .map(|(l, v)| v * Complex64::from_polar(1.0, -k * 2.0 * PI * l as f64 / n as f64))
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    fn random_band_limited(grid: Grid, rng: &mut ChaCha8Rng) -> Spectrum {
        let n = grid.n_modes();
        let mut c = vec![Complex64::default(); n];
        for k in 1..(n / 2) as i64 {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            c[grid.index(k)] = z;
            c[grid.index(-k)] = z.conj();
        }
        c[0] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        Spectrum::from_raw(grid, c)
    }

    #[test]
    fn grid_rejects_non_power_of_two() {
        assert!(Grid::new(48).is_err());
        assert!(Grid::new(4).is_err());
        assert!(Grid::new(64).is_ok());
    }

    #[test]
    fn constant_has_only_mean() {
        let g = Grid::new(16).unwrap();
        let s = forward_transform(g, &[2.5; 16]).unwrap();
        assert!((s.coeff(0).re - 2.5).abs() < 1e-15);
        assert!(g.wavenumbers().filter(|&k| k != 0).all(|k| s.coeff(k).norm() < 1e-15));
    }

    #[test]
    fn cosine_has_half_coefficients() {
        let g = Grid::new(32).unwrap();
        let v: Vec<f64> = g.points().iter().map(|x| x.cos()).collect();
        let s = forward_transform(g, &v).unwrap();
        for k in g.wavenumbers() {
            let expect = if k.abs() == 1 { 0.5 } else { 0.0 };
            assert!((s.coeff(k) - Complex64::new(expect, 0.0)).norm() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn forward_matches_direct_sum_and_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Grid::new(64).unwrap();
        let v: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = forward_transform(g, &v).unwrap();
        let oracle = direct_dft(&v);
        for (a, b) in s.coeffs().iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-14);
        }
        let back = s.to_values();
        let err = v.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13);
    }

    #[test]
    fn round_trip_all_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in 4..=16 {
            let n = 1usize << p;
            let g = Grid::new(n.max(8)).unwrap();
            let v: Vec<f64> = (0..g.n_modes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let back = forward_transform(g, &v).unwrap().to_values();
            let err = v.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-13, "n={n} err={err:e}");
        }
    }

    #[test]
    fn non_finite_input_rejected() {
        let g = Grid::new(8).unwrap();
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert_eq!(forward_transform(g, &v), Err(FrontError::NonFinite { index: 3 }));
    }

    #[test]
    fn non_hermitian_coeffs_rejected() {
        let g = Grid::new(8).unwrap();
        let mut c = vec![Complex64::default(); 8];
        c[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            Spectrum::from_coeffs(g, c),
            Err(FrontError::NotHermitian { .. })
        ));
    }

    #[test]
    fn multiplier_identity_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Grid::new(32).unwrap();
        let st = FrontState::from_spectrum(random_band_limited(g, &mut rng), 0.0);
        let ones = vec![1.0; 32];
        assert_eq!(apply_multiplier(&st, &ones).unwrap(), st);
        let abs_k: Vec<f64> = g.wavenumbers().map(|k| k.abs() as f64).collect();
        let k2: Vec<f64> = g.wavenumbers().map(|k| (k * k) as f64).collect();
        let twice = apply_multiplier(&apply_multiplier(&st, &abs_k).unwrap(), &abs_k).unwrap();
        let once = apply_multiplier(&st, &k2).unwrap();
        for (a, b) in twice.coeffs().iter().zip(once.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn multiplier_on_cosine() {
        let g = Grid::new(16).unwrap();
        let v: Vec<f64> = g.points().iter().map(|x| x.cos()).collect();
        let st = FrontState::from_values(g, &v, 0.0).unwrap();
        let half_abs: Vec<f64> = g.wavenumbers().map(|k| 0.5 * k.abs() as f64).collect();
        let out = apply_multiplier(&st, &half_abs).unwrap().values();
        for (x, y) in g.points().iter().zip(out) {
            assert!((y - 0.5 * x.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn multiplier_length_and_parity_errors() {
        let g = Grid::new(16).unwrap();
        let st = FrontState::zero(g);
        assert!(matches!(
            apply_multiplier(&st, &[1.0; 8]),
            Err(FrontError::LengthMismatch { .. })
        ));
        let odd: Vec<f64> = g.wavenumbers().map(|k| k as f64).collect();
        assert!(matches!(apply_multiplier(&st, &odd), Err(FrontError::SymbolNotEven { .. })));
    }

    #[test]
    fn triple_product_of_cosines() {
        let g = Grid::new(16).unwrap();
        let v: Vec<f64> = g.points().iter().map(|x| x.cos()).collect();
        let s = forward_transform(g, &v).unwrap();
        let out = dealiased_triple_product(&s, &s, &s).unwrap();
        for k in g.wavenumbers() {
            let expect = match k.abs() {
                1 => 3.0 / 8.0,
                3 => 1.0 / 8.0,
                _ => 0.0,
            };
            assert!((out.coeff(k).re - expect).abs() < 1e-14 && out.coeff(k).im.abs() < 1e-14);
        }
    }

    #[test]
    fn triple_product_with_zero_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Grid::new(16).unwrap();
        let p = random_band_limited(g, &mut rng);
        let zero = Spectrum::from_raw(g, vec![Complex64::default(); 16]);
        let out = dealiased_triple_product(&p, &zero, &p).unwrap();
        assert!(out.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn triple_product_matches_convolution_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [8usize, 16, 32, 64] {
            let g = Grid::new(n).unwrap();
            let p = random_band_limited(g, &mut rng);
            let q = random_band_limited(g, &mut rng);
            let r = random_band_limited(g, &mut rng);
            let out = dealiased_triple_product(&p, &q, &r).unwrap();
            let half = (n / 2) as i64;
            // two nested convolutions over the retained band
            let mut pq = std::collections::HashMap::new();
            for a in -half + 1..half {
                for b in -half + 1..half {
                    *pq.entry(a + b).or_insert(Complex64::default()) += p.coeff(a) * q.coeff(b);
                }
            }
            for k in -half + 1..half {
                let mut expect = Complex64::default();
                for c in -half + 1..half {
                    if let Some(v) = pq.get(&(k - c)) {
                        expect += v * r.coeff(c);
                    }
                }
                assert!((out.coeff(k) - expect).norm() < 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pair_transforms_match_single() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = Grid::new(32).unwrap();
        let x = random_band_limited(g, &mut rng);
        let y = random_band_limited(g, &mut rng);
        let mut tf = Transform::new(32);
        let mut buf = vec![Complex64::default(); 32];
        tf.synthesize_pair(x.coeffs(), y.coeffs(), &mut buf);
        let (xv, yv) = (x.to_values(), y.to_values());
        for j in 0..32 {
            assert!((buf[j].re - xv[j]).abs() < 1e-14 && (buf[j].im - yv[j]).abs() < 1e-14);
        }
        let (mut xh, mut yh) = (vec![Complex64::default(); 32], vec![Complex64::default(); 32]);
        tf.analyze_pair(&mut buf, &mut xh, &mut yh);
        for j in 0..32 {
            assert!((xh[j] - x.coeffs()[j]).norm() < 1e-14);
            assert!((yh[j] - y.coeffs()[j]).norm() < 1e-14);
        }
    }
}
