use std::path::{Path, PathBuf};

use frontlab::contour::{amplitude_family, consistency_report, QuadratureSpec};
use frontlab::evolution::run::manifest_for;
use frontlab::evolution::{self, InitialData, SimulationConfig, StopReason};
use frontlab::io::RunManifest;
use frontlab::{AlphaFamily, Grid};
use serde::{Deserialize, Serialize};

use crate::output::{create_dir, load_json, sig12, write_json, write_manifest, write_table};
use crate::{CliError, CliResult};

pub fn simulate(path: &Path, dry_run: bool, output_dir: Option<PathBuf>) -> CliResult<()> {
    let mut config: SimulationConfig = load_json(path)?;
    if let Some(dir) = output_dir {
        config.output_dir = dir.to_string_lossy().into_owned();
    }
    config.validate()?;
    // the initial profile is checked here so a bad config leaves no artifacts
    config.initial_data.build(config.grid)?;
    let dir = PathBuf::from(&config.output_dir);
    if dry_run {
        create_dir(&dir)?;
        let mut m = manifest_for(&config, config.time_step());
        m.stop_reason = "dry_run".into();
        write_manifest(&dir, &m)?;
        println!("dry run: manifest written to {}", dir.join("manifest.json").display());
        return Ok(());
    }
    let summary = evolution::run(&config)?;
    println!("stop reason   {}", summary.stop_reason.as_str());
    println!("steps         {}", summary.steps);
    println!("dt            {}", sig12(summary.dt));
    println!("final time    {}", sig12(summary.final_state.time));
    match summary.singularity {
        Some(s) => println!(
            "singularity   t = {}, x = {}, delta = {}",
            sig12(s.time),
            sig12(s.x),
            sig12(s.delta)
        ),
        None => println!("singularity   none detected"),
    }
    println!("artifacts     {}", dir.display());
    if summary.stop_reason == StopReason::Aborted {
        return Err(CliError::Numerical(format!(
            "numerical abort ({}); last good state written",
            summary.detail.unwrap_or_default()
        )));
    }
    Ok(())
}

/// Amplitude sweep of one profile shape against the full equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyConfig {
    pub grid: Grid,
    pub alpha: AlphaFamily,
    /// Profile scaled by each amplitude.
    pub shape: InitialData,
    pub amplitudes: Vec<f64>,
    /// Defaults to four offsets per grid point with three Richardson levels.
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
    pub output_dir: String,
}

pub fn consistency(path: &Path, output_dir: Option<PathBuf>) -> CliResult<()> {
    let mut config: ConsistencyConfig = load_json(path)?;
    if let Some(dir) = output_dir {
        config.output_dir = dir.to_string_lossy().into_owned();
    }
    let quad = config.quadrature.unwrap_or_else(|| QuadratureSpec::for_grid(config.grid));
    quad.validate(config.grid)?;
    let shape = config.shape.build(config.grid)?;
    let family = amplitude_family(&shape, &config.amplitudes);
    let report = consistency_report(&family, &config.alpha, &quad)?;
    let dir = PathBuf::from(&config.output_dir);
    create_dir(&dir)?;
    let rows: Vec<Vec<f64>> = report
        .rows
        .iter()
        .map(|r| vec![r.amplitude, r.discrepancy, r.nonlinear_norm, r.relative, report.slope])
        .collect();
    write_table(
        &dir.join("consistency.csv"),
        &["amplitude", "discrepancy", "nonlinear_norm", "relative", "slope"],
        &rows,
    )?;
    let echo = serde_json::to_value(&config).unwrap_or(serde_json::Value::Null);
    let mut m = RunManifest::new("consistency", echo);
    m.stop_reason = if report.passed { "passed" } else { "failed" }.into();
    m.outcomes.insert("slope".into(), report.slope.into());
    m.outcomes.insert("intercept".into(), report.intercept.into());
    m.outcomes.insert("quadrature".into(), serde_json::to_value(quad).unwrap_or_default());
    write_manifest(&dir, &m)?;
    write_json(&dir.join("report.json"), &report)?;

    println!("{:>12} {:>20} {:>20}", "amplitude", "discrepancy", "relative");
    for r in &report.rows {
        println!("{:>12} {:>20} {:>20}", sig12(r.amplitude), sig12(r.discrepancy), sig12(r.relative));
    }
    println!("slope {} (accepted [1.9, 2.1])", sig12(report.slope));
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "consistency slope {} outside [1.9, 2.1]",
            sig12(report.slope)
        )))
    }
}
