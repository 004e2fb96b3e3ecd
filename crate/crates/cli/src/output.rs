//! Atomic file emission. Every CSV starts with the versioned header line
//! carrying the config hash.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::RunConfig;
use crate::Failure;

pub struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Compute(format!("writing {}: {e}", path.display()))
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

/// One CSV cell. Floats use the shortest representation that parses back to
/// the same value, so output is reproducible bit for bit.
pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        let a = self.abs();
        if a == 0.0 {
            "0".into()
        } else if (1e-4..1e15).contains(&a) || !a.is_finite() {
            format!("{self}")
        } else {
            format!("{self:e}")
        }
    }
}

macro_rules! display_cell {
    ($($t:ty),*) => {$(
        impl Cell for $t {
            fn cell(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

display_cell!(u8, u32, u64, usize, i64, bool, &str, String);

impl<T: Cell> Cell for Option<T> {
    fn cell(&self) -> String {
        self.as_ref().map(Cell::cell).unwrap_or_default()
    }
}

/// Formats one CSV row.
#[macro_export]
macro_rules! row {
    ($($x:expr),+ $(,)?) => {{
        let cells: Vec<String> = vec![$($crate::output::Cell::cell(&$x)),+];
        cells.join(",")
    }};
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, Failure> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn csv(&mut self, name: &str, cfg: &RunConfig, columns: &str, rows: &[String]) -> Result<PathBuf, Failure> {
        let mut text = String::with_capacity(64 + rows.len() * 48);
        text.push_str(&cfg.header());
        text.push('\n');
        text.push_str(columns);
        text.push('\n');
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        self.file(name, text.as_bytes())
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<PathBuf, Failure> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        text.push('\n');
        self.file(name, text.as_bytes())
    }

    fn file(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, Failure> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
        write_atomic(&path, bytes)?;
        log::info!("wrote {}", path.display());
        self.written.push(name.to_string());
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn float_cells_round_trip() {
        for x in [0.0, 1.0, -2.5, 1e-5, 123456.789, 3e20, f64::MIN_POSITIVE, 0.1 + 0.2] {
            assert_eq!(x.cell().parse::<f64>().unwrap(), x);
        }
        assert_eq!(1e-5.cell(), "1e-5");
        assert_eq!(0.25.cell(), "0.25");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path()).unwrap();
        let cfg = RunConfig { command: "t".into(), params: None, options: json!({}) };
        let p = out.csv("a.csv", &cfg, "x,y", &[row!(1usize, 0.5), row!(2usize, -1e-300), row!("a", None::<f64>)]).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], cfg.header());
        assert_eq!(&lines[1..], ["x,y", "1,0.5", "2,-1e-300", "a,"]);
        assert_eq!(out.written(), ["a.csv"]);
        let left: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(left.len(), 1);
    }
}
