//! CSV emission: header row, comma separator, numbers with 17 significant digits.

use std::path::Path;

/// One CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    /// Text form; floats use `{:.16e}`, enough digits to reproduce every `f64` exactly.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) if v.is_nan() => "NaN".into(),
            Cell::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Anything with a fixed column schema.
pub trait CsvReport {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<Cell>>;
}

/// A ready-made table.
#[derive(Clone, Debug, PartialEq)]
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

impl CsvReport for Table {
    fn header(&self) -> Vec<&'static str> {
        self.header.clone()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.rows.clone()
    }
}

/// Render a report to CSV text.
pub fn render_csv(report: &dyn CsvReport) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(report.header())?;
    for row in report.rows() {
        w.write_record(row.iter().map(Cell::render))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

/// Write a report to `path`.
pub fn emit_csv(report: &dyn CsvReport, path: &Path) -> std::io::Result<()> {
    let text = render_csv(report).map_err(std::io::Error::other)?;
    std::fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            let s = Cell::Float(v).render();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let t = Table::new(vec!["a", "b"]);
        assert_eq!(render_csv(&t).unwrap(), "a,b\n");
    }
}
