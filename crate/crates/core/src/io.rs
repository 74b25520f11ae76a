//! CSV and JSON artifacts. Floats are written with 17 significant digits so
//! they round-trip exactly.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::evolution::DiagnosticsRecord;
use crate::spectral::FrontState;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `# t=<time>` line, `x,phi` header, then collocation values.
pub fn write_snapshot(path: &Path, state: &FrontState) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# t={}", fmt_f64(state.time))?;
    writeln!(w, "x,phi")?;
    for (x, v) in state.grid().points().iter().zip(state.values()) {
        writeln!(w, "{},{}", fmt_f64(*x), fmt_f64(v))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a snapshot back as (time, x, phi).
pub fn read_snapshot(path: &Path) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let bad = |what: &str| FrontError::Io(format!("{}: {what}", path.display()));
    let first = lines.next().ok_or_else(|| bad("empty file"))??;
    let time = first
        .strip_prefix("# t=")
        .and_then(|t| t.trim().parse::<f64>().ok())
        .ok_or_else(|| bad("missing '# t=' line"))?;
    if lines.next().transpose()?.as_deref() != Some("x,phi") {
        return Err(bad("missing 'x,phi' header"));
    }
    let (mut xs, mut phis) = (Vec::new(), Vec::new());
    for line in lines {
        let line = line?;
        let (x, v) = line.split_once(',').ok_or_else(|| bad("malformed row"))?;
        xs.push(x.parse::<f64>().map_err(|_| bad("bad x"))?);
        phis.push(v.parse::<f64>().map_err(|_| bad("bad phi"))?);
    }
    Ok((time, xs, phis))
}

/// `k,re,im` for 0 <= k <= k_max.
pub fn write_spectrum(path: &Path, state: &FrontState) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "k,re,im")?;
    for k in 0..=state.grid().k_max() {
        let c = state.coeff(k);
        writeln!(w, "{k},{},{}", fmt_f64(c.re), fmt_f64(c.im))?;
    }
    w.flush()?;
    Ok(())
}

/// Streams `t,H,P,strip_width,max_slope,Hs_<s>...` rows.
pub struct DiagnosticsWriter {
    out: BufWriter<File>,
    orders: Vec<f64>,
}

impl DiagnosticsWriter {
    pub fn create(path: &Path, sobolev_orders: &[f64]) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        write!(out, "t,H,P,strip_width,max_slope")?;
        for s in sobolev_orders {
            write!(out, ",Hs_{s}")?;
        }
        writeln!(out)?;
        Ok(DiagnosticsWriter {
            out,
            orders: sobolev_orders.to_vec(),
        })
    }

    pub fn write(&mut self, r: &DiagnosticsRecord) -> Result<()> {
        write!(
            self.out,
            "{},{},{},{},{}",
            fmt_f64(r.time),
            fmt_f64(r.hamiltonian),
            fmt_f64(r.momentum),
            fmt_f64(r.strip.delta),
            fmt_f64(r.max_slope)
        )?;
        for s in &self.orders {
            let v = r
                .sobolev_norms
                .iter()
                .find(|(o, _)| o == s)
                .map(|(_, v)| *v)
                .unwrap_or(f64::NAN);
            write!(self.out, ",{}", fmt_f64(v))?;
        }
        writeln!(self.out)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Generic CSV table with a header row.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes pretty JSON to a temporary sibling and renames it into place.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| FrontError::Io(e.to_string()))?;
    let tmp = path.with_extension("json.tmp");
    {
        let mut f = File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityEstimate {
    pub time: f64,
    pub x: f64,
    pub delta: f64,
}

/// Record of one command invocation, written once per artifact directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub threads: usize,
    pub seeds: Vec<u64>,
    pub stop_reason: String,
    #[serde(default)]
    pub detail: Option<String>,
    #[serde(default)]
    pub singularity: Option<SingularityEstimate>,
    #[serde(default)]
    pub outcomes: serde_json::Map<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            tool: "frontlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            threads: rayon::current_num_threads(),
            seeds: Vec::new(),
            stop_reason: "pending".into(),
            detail: None,
            singularity: None,
            outcomes: serde_json::Map::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        write_json_atomic(&dir.join("manifest.json"), self)
    }
}
