//! Writing artifacts into the output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> CliResult<Self> {
        fs::create_dir_all(path).map_err(CliError::io(path))?;
        Ok(OutDir(path.to_path_buf()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(CliError::io(&path))?;
        Ok(path)
    }

    /// Overwrites `name` with a header and the given rows.
    pub fn write_csv<T: Serialize>(&self, name: &str, rows: &[T]) -> CliResult<PathBuf> {
        let path = self.path(name);
        let fmt = |e: csv::Error| CliError::Format { path: path.clone(), message: e.to_string() };
        let mut w = csv::Writer::from_path(&path).map_err(fmt)?;
        for r in rows {
            w.serialize(r).map_err(fmt)?;
        }
        w.flush().map_err(CliError::io(&path))?;
        Ok(path)
    }
}
