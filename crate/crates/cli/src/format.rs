//! Number formatting and CSV emission with `#` metadata lines.

use std::io::Write;
use std::path::Path;

use crate::config::{ConfigError, Effective};

/// Fixed notation with `precision` decimals; scientific with the same
/// number of mantissa decimals when `0 < |x| < 1e-4`.
pub fn number(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:.precision$e}")
    } else {
        format!("{x:.precision$}")
    }
}

/// A cell before formatting.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self, precision: usize) -> String {
        match self {
            Cell::Real(x) => number(*x, precision),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i64::from(i))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// The first metadata line; the rest echo the effective config as
/// `key = value`, so stripping the `# ` prefix yields a config file.
pub fn banner(command: &str) -> String {
    format!("specgeom {} {command}", specgeom::ARTIFACT_VERSION)
}

pub fn render_csv(command: &str, effective: &Effective, table: &Table, precision: usize) -> Vec<u8> {
    let mut out = Vec::new();
    writeln!(out, "# {}", banner(command)).expect("write to memory");
    for (k, v) in effective.entries() {
        writeln!(out, "# {k} = {v}").expect("write to memory");
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&table.header).expect("write to memory");
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.render(precision))).expect("write to memory");
    }
    w.into_inner().expect("flush to memory")
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ConfigError> {
    std::fs::write(path, bytes).map_err(|source| ConfigError::Output {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_and_scientific() {
        assert_eq!(number(1.951983, 5), "1.95198");
        assert_eq!(number(1.623593e-7, 6), "1.623593e-7");
        assert_eq!(number(-0.0, 3), "0.000");
        assert_eq!(number(2e-4, 6), "0.000200");
        assert_eq!(number(f64::NAN, 6), "NaN");
    }

    #[test]
    fn quoted_text_and_metadata() {
        let mut t = Table::new(vec!["x", "status"]);
        t.push(vec![Cell::Real(1.0), "fail: a, b".into()]);
        let mut e = Effective::default();
        let f = crate::config::ConfigFile::empty();
        let mut r = crate::config::Resolver::new(&f);
        r.resolve("precision", None, 2usize).unwrap();
        e.clone_from(&r.effective);
        let text = String::from_utf8(render_csv("gap", &e, &t, 2)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# specgeom "));
        assert_eq!(lines[1], "# precision = 2");
        assert_eq!(lines[2], "x,status");
        assert_eq!(lines[3], "1.00,\"fail: a, b\"");
    }
}
