//! CSV and JSON writers.
//!
//! Every table starts with a `# hybridgate <version> config_sha256=<hex>`
//! comment line followed by a snake_case header. Numbers are written as
//! `{:.11e}`, i.e. scientific notation with 12 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn config_hash(config: &[u8]) -> String {
    hex::encode(Sha256::digest(config))
}

pub fn format_number(v: f64) -> String {
    format!("{v:.11e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Output directory plus the metadata stamped on every file.
#[derive(Debug)]
pub struct OutputDir {
    dir: PathBuf,
    metadata: String,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: &Path, config: &[u8], seed: u64, mode: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            metadata: format!(
                "# hybridgate {VERSION} config_sha256={} seed={seed} mode={mode}",
                config_hash(config)
            ),
            written: Vec::new(),
        })
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<Cell>]) -> Result<(), CliError> {
        let mut text = String::new();
        text.push_str(&self.metadata);
        text.push('\n');
        text.push_str(&header.join(","));
        text.push('\n');
        for row in rows {
            debug_assert_eq!(row.len(), header.len(), "{name}: row width");
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    text.push(',');
                }
                match cell {
                    Cell::Num(v) => text.push_str(&format_number(*v)),
                    Cell::Text(s) => text.push_str(s),
                }
            }
            text.push('\n');
        }
        self.write(name, &text)
    }

    /// `quantity,value` table.
    pub fn summary(&mut self, name: &str, entries: &[(&str, f64)]) -> Result<(), CliError> {
        let rows: Vec<Vec<Cell>> = entries
            .iter()
            .map(|(k, v)| vec![Cell::from(*k), Cell::Num(*v)])
            .collect();
        self.table(name, &["quantity", "value"], &rows)
    }

    /// Two-column plot file `<subcommand>_<quantity>.csv`.
    pub fn curve(
        &mut self,
        subcommand: &str,
        quantity: &str,
        x_name: &str,
        points: impl IntoIterator<Item = (f64, f64)>,
    ) -> Result<(), CliError> {
        let rows: Vec<Vec<Cell>> = points
            .into_iter()
            .map(|(x, y)| vec![Cell::Num(x), Cell::Num(y)])
            .collect();
        self.table(&format!("{subcommand}_{quantity}.csv"), &[x_name, quantity], &rows)
    }

    pub fn json(&mut self, name: &str, value: &serde_json::Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        text.push('\n');
        self.write(name, &text)
    }

    /// One line per written file, for the terminal.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for path in &self.written {
            let _ = writeln!(out, "wrote {}", path.display());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(6.835e9), "6.83500000000e9");
        assert_eq!(format_number(-1.5e-7), "-1.50000000000e-7");
        assert_eq!(format_number(0.0), "0.00000000000e0");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(f64::NAN), "NaN");
    }

    #[test]
    fn hash_is_sha256() {
        assert_eq!(
            config_hash(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn tables_carry_metadata_and_header() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path(), b"x", 7, "paper").unwrap();
        out.table("t.csv", &["a", "b"], &[vec![Cell::Num(1.0), Cell::from("z")]])
            .unwrap();
        out.curve("levels", "splitting_hz", "b_g", [(0.0, 6.835e9)]).unwrap();
        let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(
            lines[0].starts_with("# hybridgate ")
                && lines[0].contains("config_sha256=")
                && lines[0].ends_with("seed=7 mode=paper")
        );
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1.00000000000e0,z");
        let curve = fs::read_to_string(dir.path().join("levels_splitting_hz.csv")).unwrap();
        assert_eq!(curve.lines().nth(1), Some("b_g,splitting_hz"));
        assert_eq!(out.written().len(), 2);
    }
}
