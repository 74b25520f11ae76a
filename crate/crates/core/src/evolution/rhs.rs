use num_complex::Complex64;

use crate::error::{FrontError, Result};
use crate::kernels::SymbolTable;
use crate::spectral::{self, FrontState, Transform};

/// Reusable buffers for the cubic flux on the padded grid.
#[derive(Debug, Clone)]
pub struct Evaluator {
    symbols: SymbolTable,
    transform: Transform,
    padded: Vec<Complex64>,
    padded_a: Vec<Complex64>,
    phys: Vec<Complex64>,
    sq: Vec<Complex64>,
    sq_hat: Vec<Complex64>,
    cube_hat: Vec<Complex64>,
    flux: Vec<Complex64>,
}

/// Products of φ needed by both the right-hand side and the Hamiltonian:
/// the coefficients of φ² on the padded grid and of φ³ on the band.
pub(crate) struct Powers<'a> {
    pub square: &'a [Complex64],
    pub cube: &'a [Complex64],
}

impl Evaluator {
    pub fn new(symbols: SymbolTable) -> Self {
        let m = symbols.grid().padded_len();
        let zero = || vec![Complex64::default(); m];
        Evaluator {
            transform: Transform::new(m),
            symbols,
            padded: zero(),
            padded_a: zero(),
            phys: zero(),
            sq: zero(),
            sq_hat: zero(),
            cube_hat: zero(),
            flux: zero(),
        }
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    /// Fills φ (real part of `phys`), 𝐀φ (imaginary part), and the padded
    /// coefficients of φ² and φ³.
    fn expand(&mut self, coeffs: &[Complex64]) {
        let a_pad = self.symbols.a_padded();
        spectral::pad_into(coeffs, &mut self.padded);
        for ((pa, p), a) in self.padded_a.iter_mut().zip(&self.padded).zip(a_pad) {
            *pa = p * a;
        }
        // separate transforms: 𝐀φ is far larger than φ at high k, and packing
        // both into one FFT would leak its roundoff into φ
        self.phys.copy_from_slice(&self.padded);
        self.transform.synthesize(&mut self.phys);
        self.transform.synthesize(&mut self.padded_a);
        for (p, pa) in self.phys.iter_mut().zip(&self.padded_a) {
            p.im = pa.re;
        }
        for (s, p) in self.sq.iter_mut().zip(&self.phys) {
            let v = p.re;
            *s = Complex64::new(v * v, v * v * v);
        }
        self.transform.analyze_pair(&mut self.sq, &mut self.sq_hat, &mut self.cube_hat);
    }

    pub(crate) fn powers(&mut self, coeffs: &[Complex64]) -> Powers<'_> {
        self.expand(coeffs);
        Powers {
            square: &self.sq_hat,
            cube: &self.cube_hat,
        }
    }

    /// Coefficients of −½∂ₓ{φ²𝐀φ − φ𝐀φ² + ⅓𝐀φ³} on the band, written to
    /// `out` (storage order, Nyquist zero).
    pub fn nonlinear(&mut self, coeffs: &[Complex64], out: &mut [Complex64]) {
        self.expand(coeffs);
        let a_pad = self.symbols.a_padded();
        // 𝐀φ² in physical space
        for ((f, s), a) in self.flux.iter_mut().zip(&self.sq_hat).zip(a_pad) {
            *f = s * a;
        }
        self.transform.synthesize(&mut self.flux);
        for (f, p) in self.flux.iter_mut().zip(&self.phys) {
            let (phi, a_phi) = (p.re, p.im);
            *f = Complex64::new(phi * phi * a_phi - phi * f.re, 0.0);
        }
        self.transform.analyze(&mut self.flux);
        let grid = self.symbols.grid();
        let n = grid.n_modes();
        let m = grid.padded_len();
        let a = self.symbols.a();
        out[0] = Complex64::default();
        out[n / 2] = Complex64::default();
        // k > 0 only; the conjugate half is copied so that stage inputs stay
        // exactly Hermitian and the paired transforms do not mix channels
        for j in 1..n / 2 {
            let pj = spectral::index_of(j as i64, m);
            let bracket = self.flux[pj] + a[j] / 3.0 * self.cube_hat[pj];
            out[j] = Complex64::new(0.0, -0.5 * j as f64) * bracket;
            out[n - j] = out[j].conj();
        }
    }

    /// Adds the dispersive part −ik b(k) c(k) to `out`.
    pub fn add_linear(&self, coeffs: &[Complex64], out: &mut [Complex64]) {
        let grid = self.symbols.grid();
        for (j, (o, c)) in out.iter_mut().zip(coeffs).enumerate() {
            let k = grid.wavenumber(j) as f64;
            *o += Complex64::new(0.0, -k * self.symbols.b()[j]) * c;
        }
    }
}

/// Time derivative of φ under the cubic front equation,
/// φₜ = −½∂ₓ{φ²𝐀φ − φ𝐀φ² + ⅓𝐀φ³} − 𝓛φₓ, with alias-free products.
pub fn rhs_approx(state: &FrontState, symbols: &SymbolTable) -> Result<FrontState> {
    spectral::check_same_grid(state.grid(), symbols.grid())?;
    let mut eval = Evaluator::new(symbols.clone());
    let mut out = vec![Complex64::default(); state.grid().n_modes()];
    eval.nonlinear(state.coeffs(), &mut out);
    eval.add_linear(state.coeffs(), &mut out);
    if let Some(index) = out.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(FrontError::NonFinite { index });
    }
    Ok(FrontState::from_raw(state.grid(), out, state.time))
}

/// Nonlinear part of [`rhs_approx`] alone.
pub fn rhs_approx_nonlinear(state: &FrontState, symbols: &SymbolTable) -> Result<FrontState> {
    spectral::check_same_grid(state.grid(), symbols.grid())?;
    let mut eval = Evaluator::new(symbols.clone());
    let mut out = vec![Complex64::default(); state.grid().n_modes()];
    eval.nonlinear(state.coeffs(), &mut out);
    Ok(FrontState::from_raw(state.grid(), out, state.time))
}
