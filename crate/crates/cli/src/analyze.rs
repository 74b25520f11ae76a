use std::path::PathBuf;

use clap::Subcommand;
use frontlab::analysis::{
    c0_constant, c3_constant, c4_infimum, dispersion_omega0, nls_coefficients, s0_root, sigma2,
    stokes_expansion, tau_existence, zeta_z, C2,
};
use frontlab::kernels::symbol_b;
use frontlab::AlphaFamily;
use num_complex::Complex64;

use crate::output::{sig12, write_table};
use crate::{CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum Analysis {
    /// ω₀(k) = k b(k) and σ₂(k) on a list of wavenumbers.
    #[command(allow_negative_numbers = true)]
    Dispersion {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Third-order Stokes wave with first harmonic ψ₁.
    #[command(allow_negative_numbers = true)]
    Stokes {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        k: u32,
        /// Real part of ψ₁.
        #[arg(long)]
        psi1: f64,
        #[arg(long, default_value_t = 0.0)]
        psi1_im: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// NLS dispersion and nonlinearity coefficients for carrier wavenumbers.
    #[command(allow_negative_numbers = true)]
    Nls {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// s₀, C₂ and the C₄ infimum; C₀, Z and C₃ at `--s`.
    #[command(allow_negative_numbers = true)]
    Constants {
        #[arg(long)]
        s: Option<f64>,
    },
    /// Existence-time bound from τ̇ = −M E₀ C₃(τ).
    #[command(allow_negative_numbers = true)]
    Tau {
        #[arg(long)]
        tau0: f64,
        #[arg(long = "E0")]
        e0: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long, default_value_t = 1e6)]
        horizon: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn family(alpha: f64) -> CliResult<AlphaFamily> {
    AlphaFamily::new(alpha).map_err(|e| CliError::Usage(format!("--alpha {alpha}: {e}")))
}

fn row(name: &str, value: impl AsRef<str>) {
    println!("{name:<18} {}", value.as_ref());
}

pub fn run(what: Analysis) -> CliResult<()> {
    match what {
        Analysis::Dispersion { alpha, k, csv } => {
            let a = family(alpha)?;
            println!("{:>14} {:>20} {:>20} {:>20}", "k", "b(k)", "omega0", "sigma2");
            let mut rows = Vec::new();
            for &kk in &k {
                let b = symbol_b(kk, &a).map_err(|e| CliError::Usage(format!("--k {kk}: {e}")))?;
                let w = dispersion_omega0(kk, &a)?;
                let s2 = sigma2(kk, &a);
                println!("{:>14} {:>20} {:>20} {:>20}", sig12(kk), sig12(b), sig12(w), sig12(s2));
                rows.push(vec![kk, b, w, s2]);
            }
            if let Some(p) = csv {
                write_table(&p, &["k", "b", "omega0", "sigma2"], &rows)?;
            }
        }
        Analysis::Stokes {
            alpha,
            k,
            psi1,
            psi1_im,
            csv,
        } => {
            let a = family(alpha)?;
            let r = stokes_expansion(k, Complex64::new(psi1, psi1_im), &a)
                .map_err(|e| CliError::Usage(format!("--k {k}: {e}")))?;
            let p3 = r.psi3();
            row("omega0", sig12(r.omega0));
            row("sigma2", sig12(r.sigma2));
            row("omega2", sig12(r.omega2));
            row("frequency", sig12(r.frequency()));
            row("psi3/psi1^3", sig12(r.psi3_ratio));
            row("psi3", format!("{} + {}i", sig12(p3.re), sig12(p3.im)));
            if let Some(p) = csv {
                write_table(
                    &p,
                    &["k", "omega0", "sigma2", "omega2", "psi3_ratio", "psi3_re", "psi3_im"],
                    &[vec![k as f64, r.omega0, r.sigma2, r.omega2, r.psi3_ratio, p3.re, p3.im]],
                )?;
            }
        }
        Analysis::Nls { alpha, k, csv } => {
            let a = family(alpha)?;
            println!(
                "{:>10} {:>20} {:>20} {:>20} {:>9}",
                "k", "omega0''", "omega0'' (fd)", "sigma2", "focusing"
            );
            let mut rows = Vec::new();
            for &kk in &k {
                let r = nls_coefficients(kk, &a).map_err(|e| CliError::Usage(format!("--k {kk}: {e}")))?;
                println!(
                    "{:>10} {:>20} {:>20} {:>20} {:>9}",
                    sig12(kk),
                    sig12(r.omega0_pp),
                    sig12(r.omega0_pp_fd),
                    sig12(r.sigma2),
                    r.focusing
                );
                rows.push(vec![kk, r.omega0_pp, r.omega0_pp_fd, r.sigma2, f64::from(u8::from(r.focusing))]);
            }
            if let Some(p) = csv {
                write_table(&p, &["k", "omega0_pp", "omega0_pp_fd", "sigma2", "focusing"], &rows)?;
            }
        }
        Analysis::Constants { s } => {
            let c0 = s
                .map(|s| c0_constant(s).map_err(|e| CliError::Usage(format!("--s {s}: {e}"))))
                .transpose()?;
            row("s0", sig12(s0_root()));
            row("C2", sig12(C2));
            let c4 = c4_infimum();
            row("C4", format!("{} (min C3 at s = {})", sig12(c4.c3_min), sig12(c4.s_min)));
            if let (Some(s), Some(c0)) = (s, c0) {
                row(&format!("C0({})", sig12(s)), sig12(c0));
                let na = |need: &str| format!("n/a (needs s > {need})");
                row(
                    &format!("Z({})", sig12(s)),
                    zeta_z(s).map(sig12).unwrap_or_else(|_| na("1/2")),
                );
                row(
                    &format!("C3({})", sig12(s)),
                    c3_constant(s).map(sig12).unwrap_or_else(|_| na("5/2")),
                );
            }
        }
        Analysis::Tau {
            tau0,
            e0,
            m,
            horizon,
            csv,
        } => {
            let curve = tau_existence(tau0, e0, m, horizon)?;
            match curve.t_star {
                Some(t) => row("T*", sig12(t)),
                None => row("T*", format!("none before t = {}", sig12(horizon))),
            }
            row("samples", curve.samples.len().to_string());
            if let Some(p) = csv {
                let rows: Vec<Vec<f64>> = curve.samples.iter().map(|&(t, tau)| vec![t, tau]).collect();
                write_table(&p, &["t", "tau"], &rows)?;
            }
        }
    }
    Ok(())
}
