use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use frontlab::analysis::{s0_root, verify_f_bound, verify_h_bound, verify_kernel_bounds};
use frontlab::evolution::{conservation_check, ConservationSpec};
use frontlab::io::RunManifest;
use frontlab::AlphaFamily;
use serde::Serialize;

use crate::output::{create_dir, load_json, sig12, write_json, write_manifest};
use crate::{CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// sup|f| over the feasible region and the stability of the h-bound
    /// constant.
    Appendix {
        #[arg(long, value_delimiter = ',', default_value = "1.0")]
        s: Vec<f64>,
        /// Grid points per side for the initial scan of R.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5")]
        h_alpha: Vec<f64>,
        #[arg(long, default_value_t = 40_000)]
        h_samples: usize,
        #[arg(long, default_value = "verify_appendix")]
        out: PathBuf,
    },
    /// Kernel bounds on random zero-sum quadruples.
    Kernels {
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        kmax: i64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "verify_kernels")]
        out: PathBuf,
    },
    /// Hamiltonian and momentum drift in a viscosity-free run.
    Conservation {
        /// JSON conservation spec; built-in defaults when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "verify_conservation")]
        out: PathBuf,
    },
}

/// One line of the suite summary.
#[derive(Debug, Clone, Serialize)]
struct Entry {
    bound: String,
    parameter: f64,
    samples: usize,
    /// Worst observed ratio. For the kernel bounds this is |S| over the
    /// right-hand side without its constant, for f it is sup|f|/C₀, and for
    /// the h constant it is the relative change under refinement.
    worst_ratio: f64,
    /// None for diagnostic rows that are not pass/fail.
    passed: Option<bool>,
    seeds: Vec<u64>,
    worst_case: String,
}

#[derive(Debug, Serialize)]
struct SuiteReport<T: Serialize> {
    suite: &'static str,
    passed: bool,
    entries: Vec<Entry>,
    details: T,
}

fn write_summary_csv(path: &Path, entries: &[Entry]) -> CliResult<()> {
    let mut text = String::from("bound,parameter,samples,worst_ratio,passed,seeds\n");
    for e in entries {
        let passed = match e.passed {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "diagnostic",
        };
        let seeds: Vec<String> = e.seeds.iter().map(u64::to_string).collect();
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.bound,
            frontlab::io::fmt_f64(e.parameter),
            e.samples,
            frontlab::io::fmt_f64(e.worst_ratio),
            passed,
            seeds.join(";")
        ));
    }
    fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn finish<T: Serialize>(
    suite: &'static str,
    out: &Path,
    echo: serde_json::Value,
    entries: Vec<Entry>,
    details: T,
) -> CliResult<()> {
    create_dir(out)?;
    let passed = entries.iter().all(|e| e.passed != Some(false));
    write_summary_csv(&out.join("summary.csv"), &entries)?;
    let seeds: Vec<u64> = entries.iter().flat_map(|e| e.seeds.iter().copied()).collect();
    let report = SuiteReport {
        suite,
        passed,
        entries,
        details,
    };
    write_json(&out.join("report.json"), &report)?;
    let mut m = RunManifest::new(&format!("verify {suite}"), echo);
    m.seeds = seeds;
    m.stop_reason = if passed { "passed" } else { "failed" }.into();
    write_manifest(out, &m)?;

    for e in &report.entries {
        let status = match e.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "info",
        };
        println!(
            "{status:<5} {:<22} param {:<8} ratio {:<16} {}",
            e.bound,
            sig12(e.parameter),
            sig12(e.worst_ratio),
            e.worst_case
        );
    }
    if passed {
        return Ok(());
    }
    let worst = report
        .entries
        .iter()
        .filter(|e| e.passed == Some(false))
        .max_by(|a, b| a.worst_ratio.total_cmp(&b.worst_ratio))
        .map(|e| format!("{} (parameter {}): {}", e.bound, sig12(e.parameter), e.worst_case))
        .unwrap_or_default();
    Err(CliError::Verification(format!("{suite} suite failed; worst counterexample {worst}")))
}

fn family(alpha: f64) -> CliResult<AlphaFamily> {
    AlphaFamily::new(alpha).map_err(|e| CliError::Usage(format!("--alpha {alpha}: {e}")))
}

pub fn run(suite: Suite) -> CliResult<()> {
    match suite {
        Suite::Appendix {
            s,
            grid,
            h_alpha,
            h_samples,
            out,
        } => {
            let s0 = s0_root();
            let mut entries = Vec::new();
            let mut f_reports = Vec::new();
            for &sv in &s {
                let r = verify_f_bound(sv, grid).map_err(|e| CliError::Usage(format!("--s {sv}: {e}")))?;
                let note = if sv < s0 {
                    format!("; s below s0 = {}, corner value {}", sig12(s0), sig12(r.boundary_limit))
                } else {
                    String::new()
                };
                entries.push(Entry {
                    bound: "f_sup".into(),
                    parameter: sv,
                    samples: grid * grid,
                    worst_ratio: r.sup / r.c0,
                    passed: r.passed,
                    seeds: Vec::new(),
                    worst_case: format!(
                        "sup {} at (x, y) = ({}, {}), C0 = {}{note}",
                        sig12(r.sup),
                        sig12(r.argmax.x),
                        sig12(r.argmax.y),
                        sig12(r.c0)
                    ),
                });
                f_reports.push(r);
            }
            let mut h_reports = Vec::new();
            for &a in &h_alpha {
                let r = verify_h_bound(&family(a)?, h_samples)?;
                entries.push(Entry {
                    bound: "h_constant".into(),
                    parameter: a,
                    samples: r.samples,
                    worst_ratio: r.relative_change,
                    passed: Some(r.passed),
                    seeds: Vec::new(),
                    worst_case: format!(
                        "C = {}, refined {}",
                        sig12(r.constant),
                        sig12(r.constant_refined)
                    ),
                });
                h_reports.push(r);
            }
            let echo = serde_json::json!({ "s": s, "grid": grid, "h_alpha": h_alpha, "h_samples": h_samples });
            let details = serde_json::json!({ "f": f_reports, "h": h_reports });
            finish("appendix", &out, echo, entries, details)
        }
        Suite::Kernels {
            alpha,
            kmax,
            trials,
            seed,
            out,
        } => {
            let mut entries = Vec::new();
            let mut reports = Vec::new();
            for &a in &alpha {
                let r = verify_kernel_bounds(&family(a)?, trials, kmax, seed)?;
                entries.push(Entry {
                    bound: if a == 1.0 { "sqg_c2".into() } else { "gsqg_c1".into() },
                    parameter: a,
                    samples: r.trials,
                    worst_ratio: r.worst_ratio,
                    passed: Some(r.passed),
                    seeds: vec![r.seed],
                    worst_case: format!("constant {} at k = {:?}", sig12(r.constant), r.worst),
                });
                if let Some(c) = r.corollary_worst_ratio {
                    entries.push(Entry {
                        bound: "sqg_corollary".into(),
                        parameter: a,
                        samples: r.trials,
                        worst_ratio: c,
                        passed: Some(c <= 1.0),
                        seeds: vec![r.seed],
                        worst_case: String::new(),
                    });
                }
                reports.push(r);
            }
            let echo = serde_json::json!({ "alpha": alpha, "kmax": kmax, "trials": trials, "seed": seed });
            finish("kernels", &out, echo, entries, reports)
        }
        Suite::Conservation { config, out } => {
            let spec: ConservationSpec = match &config {
                Some(p) => load_json(p)?,
                None => ConservationSpec::default(),
            };
            let r = conservation_check(&spec)?;
            let orders = format!("observed orders H {}, P {}", sig12(r.h_order), sig12(r.p_order));
            let order_note = match r.order_passed {
                None => format!("{orders}; drift at roundoff, order not resolvable"),
                Some(_) => orders,
            };
            let entries = vec![
                Entry {
                    bound: "hamiltonian_drift".into(),
                    parameter: spec.dt,
                    samples: r.coarse.steps,
                    worst_ratio: r.coarse.h_max / spec.h_tolerance,
                    passed: Some(r.h_passed),
                    seeds: Vec::new(),
                    worst_case: format!("|dH|/|H| = {}", sig12(r.coarse.h_max)),
                },
                Entry {
                    bound: "momentum_drift".into(),
                    parameter: spec.dt,
                    samples: r.coarse.steps,
                    worst_ratio: r.coarse.p_max / spec.p_tolerance,
                    passed: Some(r.p_passed),
                    seeds: Vec::new(),
                    worst_case: format!("|dP|/P = {}", sig12(r.coarse.p_max)),
                },
                Entry {
                    bound: "drift_order".into(),
                    parameter: spec.dt,
                    samples: r.fine.steps,
                    worst_ratio: (r.h_order - 4.0).abs().max((r.p_order - 4.0).abs()) / spec.order_tolerance,
                    passed: r.order_passed,
                    seeds: Vec::new(),
                    worst_case: order_note,
                },
            ];
            let echo = serde_json::to_value(&spec).unwrap_or_default();
            finish("conservation", &out, echo, entries, r)
        }
    }
}
