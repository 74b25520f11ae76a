//! Closed-form and semi-analytic results: shear profiles, dispersion,
//! Stokes and NLS coefficients, the well-posedness constants and the
//! numerical checks of the four-wave inequalities.

pub mod appendix;
pub mod constants;
pub mod waves;

pub use appendix::{
    f_chart, f_value, h_value, random_quadruples, shell_ratio, verify_f_bound, verify_h_bound, verify_kernel_bounds,
    FBoundReport, FeasiblePoint, HBoundReport, KernelBoundReport, OrderedQuadruple,
};
pub use constants::{c0_constant, c3_constant, c4_infimum, s0_root, tau_existence, zeta_z, C4Infimum, TauCurve, C2};
pub use waves::{
    dispersion_omega0, nls_coefficients, omega0_second_derivative, shear_profile, sigma2, stokes_expansion, NlsResult,
    StokesResult,
};
