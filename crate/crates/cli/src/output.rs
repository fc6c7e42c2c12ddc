//! Report tables and the output directory.

use std::path::{Path, PathBuf};

use crate::config::Format;
use crate::CliError;

/// A header plus string rows, rendered as CSV or as an aligned text table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(header: I) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Two columns `quantity,value`.
    pub fn key_value() -> Self {
        Table::new(["quantity", "value"])
    }

    pub fn push<I: IntoIterator<Item = S>, S: Into<String>>(&mut self, row: I) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn kv(&mut self, key: &str, value: impl ToString) {
        self.push([key.to_string(), value.to_string()]);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Table => self.to_text(),
        }
    }
}

/// Shortest round-trip formatting, in exponent form for very small or
/// large magnitudes; `-` for a missing value.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), num)
}

pub fn coords(p: &nalgebra::DVector<f64>) -> String {
    p.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ")
}

/// Where report files go, with the file extension chosen by the format.
#[derive(Debug, Clone)]
pub struct OutputDir {
    pub dir: PathBuf,
    pub format: Format,
}

impl OutputDir {
    pub fn create(dir: PathBuf, format: Format) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir).map_err(|e| CliError::Io {
            path: dir.clone(),
            source: e,
        })?;
        Ok(OutputDir { dir, format })
    }

    fn extension(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Table => "txt",
        }
    }

    /// Writes `stem.csv` or `stem.txt` and returns its path.
    pub fn write_report(&self, stem: &str, csv: &str, text: &str) -> Result<PathBuf, CliError> {
        let body = match self.format {
            Format::Csv => csv,
            Format::Table => text,
        };
        self.write_raw(&format!("{stem}.{}", self.extension()), body)
    }

    pub fn write_table(&self, stem: &str, table: &Table) -> Result<PathBuf, CliError> {
        self.write_report(stem, &table.to_csv(), &table.to_text())
    }

    /// Writes a file whose format does not depend on the output format.
    pub fn write_raw(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?;
        Ok(path)
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_text_agree_on_cells() {
        let mut t = Table::new(["a", "long_name"]);
        t.push(["1", "0.5"]);
        t.push(["22", "x,y"]);
        assert_eq!(t.to_csv(), "a,long_name\n1,0.5\n22,\"x,y\"\n");
        assert_eq!(t.to_text(), " a  long_name\n 1        0.5\n22        x,y\n");
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1e-300, 1.0 / 3.0, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(opt_num(None), "-");
    }
}
