use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QLBM_OUT_DIR";

pub fn default_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// The explicit path, or `name` inside the default output directory.
pub fn resolve(path: Option<&Path>, name: &str) -> PathBuf {
    match path {
        Some(p) => p.to_path_buf(),
        None => default_dir().join(name),
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// CSV writer whose first line is `# config: <json>`.
pub fn csv_writer(path: &Path, config: &impl Serialize) -> CliResult<csv::Writer<BufWriter<File>>> {
    let mut out = create(path)?;
    writeln!(out, "# config: {}", serde_json::to_string(config)?)?;
    Ok(csv::Writer::from_writer(out))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::at(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::at(path, e))
}
