use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::spectral::{FrontState, Grid};

/// Random real state with |c(k)| ≲ amplitude · e^{−decay k}.
pub(crate) fn random_state(grid: Grid, amplitude: f64, decay: f64, rng: &mut ChaCha8Rng) -> FrontState {
    let n = grid.n_modes();
    let mut c = vec![Complex64::default(); n];
    for k in 1..=grid.k_max() {
        let scale = amplitude * (-decay * k as f64).exp();
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        c[grid.index(k)] = z;
        c[grid.index(-k)] = z.conj();
    }
    FrontState::from_coeffs(grid, c, 0.0).unwrap()
}
