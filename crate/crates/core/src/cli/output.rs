//! CSV tables, manifests and plot scripts in one output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Header plus string rows, written as RFC 4180 CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug)]
pub struct Output {
    dir: PathBuf,
    plot: bool,
    files: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: PathBuf, plot: bool) -> Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            plot,
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Writes `<stem>.csv` and, when plots are on and `axes` names two
    /// columns, a gnuplot script `<stem>.gp` drawing one against the other.
    pub fn csv(&mut self, stem: &str, table: &Table, axes: Option<(&str, &str)>) -> Result<PathBuf> {
        let path = self.dir.join(format!("{stem}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(&table.header)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        self.files.push(path.clone());
        if let (true, Some((x, y))) = (self.plot, axes) {
            let col = |name: &str| {
                table
                    .header
                    .iter()
                    .position(|h| h == name)
                    .map(|i| i + 1)
                    .ok_or_else(|| Error::Config(format!("no column '{name}' to plot")))
            };
            let (cx, cy) = (col(x)?, col(y)?);
            let mut s = String::new();
            writeln!(s, "set datafile separator ','").unwrap();
            writeln!(s, "set key autotitle columnhead").unwrap();
            writeln!(s, "set xlabel '{x}'").unwrap();
            writeln!(s, "set ylabel '{y}'").unwrap();
            writeln!(s, "plot '{stem}.csv' using {cx}:{cy} with linespoints").unwrap();
            writeln!(s, "pause -1").unwrap();
            self.text(&format!("{stem}.gp"), &s)?;
        }
        Ok(path)
    }

    pub fn text(&mut self, name: &str, content: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, content)?;
        self.files.push(path.clone());
        Ok(path)
    }

    /// `<command>.manifest`: toolkit version, resolved parameters and outputs.
    pub fn manifest(&mut self, command: &str, params: &BTreeMap<String, String>) -> Result<PathBuf> {
        let mut s = String::new();
        writeln!(s, "tool = {}", env!("CARGO_PKG_NAME")).unwrap();
        writeln!(s, "version = {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(s, "command = {command}").unwrap();
        for (k, v) in params {
            writeln!(s, "{k} = {v}").unwrap();
        }
        for f in &self.files {
            let name = f.file_name().map_or(String::new(), |n| n.to_string_lossy().into_owned());
            writeln!(s, "output = {name}").unwrap();
        }
        self.text(&format!("{command}.manifest"), &s)
    }

    pub fn into_files(self) -> Vec<PathBuf> {
        self.files
    }
}
