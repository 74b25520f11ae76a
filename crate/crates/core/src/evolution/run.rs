use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::io::{self, DiagnosticsWriter, RunManifest, SingularityEstimate};
use crate::kernels::SymbolTable;
use crate::spectral::FrontState;

use super::config::SimulationConfig;
use super::diagnostics::{diagnostics_with, DiagnosticsRecord};
use super::stepper::Stepper;
use super::strip::{estimate_strip_width_with, singularity_location};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    Singularity,
    Aborted,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Completed => "completed",
            StopReason::Singularity => "singularity",
            StopReason::Aborted => "aborted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub stop_reason: StopReason,
    pub detail: Option<String>,
    pub steps: usize,
    pub dt: f64,
    pub final_state: FrontState,
    pub singularity: Option<SingularityEstimate>,
    pub records: Vec<DiagnosticsRecord>,
}

/// Receives run output as it is produced.
pub trait RunSink {
    fn record(&mut self, _record: &DiagnosticsRecord, _state: &FrontState, _index: usize) -> Result<()> {
        Ok(())
    }
}

/// Discards output.
pub struct NullSink;

impl RunSink for NullSink {}

/// Writes snapshots, spectra and the diagnostics series under a directory.
pub struct FileSink<'a> {
    dir: &'a Path,
    diagnostics: DiagnosticsWriter,
    snapshots: bool,
}

impl<'a> FileSink<'a> {
    pub fn create(dir: &'a Path, config: &SimulationConfig) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(FileSink {
            dir,
            diagnostics: DiagnosticsWriter::create(&dir.join("diagnostics.csv"), &config.diagnostics.sobolev)?,
            snapshots: config.diagnostics.snapshots,
        })
    }

    pub fn finish(self) -> Result<()> {
        self.diagnostics.finish()
    }
}

impl RunSink for FileSink<'_> {
    fn record(&mut self, record: &DiagnosticsRecord, state: &FrontState, index: usize) -> Result<()> {
        self.diagnostics.write(record)?;
        if self.snapshots {
            io::write_snapshot(&self.dir.join(format!("snapshot_{index:06}.csv")), state)?;
            io::write_spectrum(&self.dir.join(format!("spectrum_{index:06}.csv")), state)?;
        }
        Ok(())
    }
}

/// A time integration in progress.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimulationConfig,
    stepper: Stepper,
    state: FrontState,
    dt: f64,
    steps: usize,
}

impl Simulation {
    pub fn new(config: SimulationConfig) -> Result<Self> {
        config.validate()?;
        let symbols = SymbolTable::new(config.grid, config.alpha);
        let stepper = Stepper::new(symbols, config.viscosity)?;
        let state = config.initial_data.build(config.grid)?;
        let dt = config.time_step();
        Ok(Simulation {
            config,
            stepper,
            state,
            dt,
            steps: 0,
        })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn state(&self) -> &FrontState {
        &self.state
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Takes one step, shortened if needed to land on `t_end`. Returns
    /// false once `t_end` has been reached.
    pub fn advance(&mut self) -> Result<bool> {
        let remaining = self.config.t_end - self.state.time;
        if remaining <= 1e-12 * self.config.t_end {
            return Ok(false);
        }
        let dt = if remaining < self.dt * (1.0 + 1e-9) { remaining } else { self.dt };
        self.state = self.stepper.step(&self.state, dt)?;
        self.steps += 1;
        Ok(true)
    }

    pub fn diagnostics(&mut self) -> DiagnosticsRecord {
        diagnostics_with(
            &self.state,
            self.stepper.evaluator(),
            &self.config.diagnostics.sobolev,
            &self.config.diagnostics.strip_fit,
        )
    }

    /// Strip width at which a singularity is declared: two grid spacings.
    pub fn singularity_threshold(&self) -> f64 {
        2.0 * 2.0 * PI / self.config.grid.n_modes() as f64
    }

    /// Integrates to `t_end` or until the strip width collapses.
    pub fn run(mut self, sink: &mut dyn RunSink) -> Result<RunSummary> {
        let output_every = self.config.output_every;
        let check_every = self.config.diagnostics.check_every.unwrap_or(output_every);
        let threshold = self.singularity_threshold();
        let mut records = Vec::new();
        let mut singularity = None;
        let mut outputs = 0;
        let first = self.diagnostics();
        sink.record(&first, &self.state, outputs)?;
        records.push(first);
        outputs += 1;
        let mut stop = StopReason::Completed;
        let mut detail = None;
        loop {
            let last_good = self.state.clone();
            match self.advance() {
                Ok(true) => {}
                Ok(false) => break,
                Err(FrontError::NumericalAbort { time, reason }) => {
                    self.state = last_good;
                    stop = StopReason::Aborted;
                    detail = Some(format!("t = {time}: {reason}"));
                    break;
                }
                Err(e) => return Err(e),
            }
            let finished = self.config.t_end - self.state.time <= 1e-12 * self.config.t_end;
            if self.steps % check_every == 0 && singularity.is_none() {
                let strip = estimate_strip_width_with(&self.state, &self.config.diagnostics.strip_fit);
                if !strip.flagged && strip.delta <= threshold {
                    singularity = Some(SingularityEstimate {
                        time: self.state.time,
                        x: singularity_location(&self.state, &self.config.diagnostics.strip_fit),
                        delta: strip.delta,
                    });
                    if self.config.diagnostics.stop_at_singularity {
                        stop = StopReason::Singularity;
                        break;
                    }
                }
            }
            if self.steps % output_every == 0 || finished {
                let r = self.diagnostics();
                sink.record(&r, &self.state, outputs)?;
                records.push(r);
                outputs += 1;
            }
        }
        if records.last().map(|r| r.time) != Some(self.state.time) {
            let r = self.diagnostics();
            sink.record(&r, &self.state, outputs)?;
            records.push(r);
        }
        Ok(RunSummary {
            stop_reason: stop,
            detail,
            steps: self.steps,
            dt: self.dt,
            final_state: self.state,
            singularity,
            records,
        })
    }
}

/// Runs without writing anything.
pub fn run_in_memory(config: &SimulationConfig) -> Result<RunSummary> {
    Simulation::new(config.clone())?.run(&mut NullSink)
}

/// Runs and writes snapshots, spectra, `diagnostics.csv` and
/// `manifest.json` under `config.output_dir`. The manifest is written even
/// when the integration aborts.
pub fn run(config: &SimulationConfig) -> Result<RunSummary> {
    let sim = Simulation::new(config.clone())?;
    let dir = Path::new(&config.output_dir);
    let mut manifest = manifest_for(config, sim.dt());
    let mut sink = FileSink::create(dir, config)?;
    let result = sim.run(&mut sink);
    sink.finish()?;
    match &result {
        Ok(summary) => {
            manifest.stop_reason = summary.stop_reason.as_str().into();
            manifest.detail = summary.detail.clone();
            manifest.singularity = summary.singularity;
            manifest.outcomes.insert("steps".into(), summary.steps.into());
            manifest.outcomes.insert("final_time".into(), summary.final_state.time.into());
        }
        Err(e) => {
            manifest.stop_reason = StopReason::Aborted.as_str().into();
            manifest.detail = Some(e.to_string());
        }
    }
    manifest.write(dir)?;
    result
}

/// Manifest describing `config` before any step is taken.
pub fn manifest_for(config: &SimulationConfig, dt: f64) -> RunManifest {
    let echo = serde_json::to_value(config).unwrap_or(serde_json::Value::Null);
    let mut m = RunManifest::new("simulate", echo);
    m.outcomes.insert("dt".into(), dt.into());
    m.outcomes.insert("stability_proxy".into(), config.stability_proxy().into());
    m
}
