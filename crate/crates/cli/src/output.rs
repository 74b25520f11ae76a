use std::fs;
use std::path::Path;

use frontlab::io::RunManifest;
use serde::de::DeserializeOwned;

use crate::{CliError, CliResult};

/// Rounds to 12 significant digits and prints the shortest form.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let mag = rounded.abs();
    if mag == 0.0 || (1e-4..1e12).contains(&mag) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

/// Reads a JSON document; parse and schema errors become usage errors that
/// name the offending field and position.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> CliResult<()> {
    manifest.write(dir).map_err(CliError::from)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    frontlab::io::write_json_atomic(path, value).map_err(CliError::from)
}

pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> CliResult<()> {
    frontlab::io::write_table(path, header, rows).map_err(CliError::from)
}
