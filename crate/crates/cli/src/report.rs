use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] periodforge::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid argument: {0}")]
    Arg(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_mathematical() => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub input: Value,
    pub result: Value,
}

impl Report {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values serialize");
        s.push('\n');
        s
    }

    /// Writes to `out` via a temporary file in the same directory and a
    /// rename, or to stdout.
    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.render();
        let Some(path) = out else {
            print!("{}", text);
            return Ok(());
        };
        let err = |source| CliError::Write {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
        tmp.write_all(text.as_bytes()).map_err(err)?;
        tmp.persist(path).map_err(|e| err(e.error))?;
        Ok(())
    }
}

/// Inline JSON when the argument starts with `{` or `[`, otherwise a path.
pub fn load(arg: &str) -> Result<Value, CliError> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|source| CliError::Read {
            path: arg.into(),
            source,
        })?
    };
    Ok(serde_json::from_str(&text)?)
}
