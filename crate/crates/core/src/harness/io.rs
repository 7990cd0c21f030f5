//! Dataset files and tabular output.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::complex_plane::{ensure_distinct, PointC2};
use crate::error::{Error, Result};
use crate::harness::generate::Dataset;
use crate::lines::LineC3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn read_points(path: &Path) -> Result<Vec<PointC2>> {
    let points: Vec<PointC2> = serde_json::from_slice(&fs::read(path)?)?;
    ensure_distinct(&points)?;
    Ok(points)
}

/// Line files are canonicalized on load; the order of entries is kept.
pub fn read_lines(path: &Path) -> Result<Vec<LineC3>> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to `out`, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, contents)?,
        None => std::io::stdout().lock().write_all(contents.as_bytes())?,
    }
    Ok(())
}

/// A rectangular table of already formatted cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Array of objects keyed by header.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.headers.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

pub fn points_table(points: &[PointC2]) -> Table {
    let mut t = Table::new(["x", "y"]);
    for p in points {
        t.push([&p.x, &p.y]);
    }
    t
}

pub fn lines_table(lines: &[LineC3]) -> Table {
    let mut t = Table::new(["base_x", "base_y", "base_z", "dir_x", "dir_y", "dir_z"]);
    for l in lines {
        t.push(l.base().iter().chain(l.dir().iter()));
    }
    t
}

pub fn render_dataset(d: &Dataset, format: Format) -> Result<String> {
    match (d, format) {
        (Dataset::Points(p), Format::Json) => to_json_string(p),
        (Dataset::Lines(l), Format::Json) => to_json_string(l),
        (Dataset::Points(p), Format::Csv) => points_table(p).to_csv(),
        (Dataset::Lines(l), Format::Csv) => lines_table(l).to_csv(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GR;

    #[test]
    fn non_canonical_line_file_is_normalized() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lines.json");
        let raw = r#"[{"base": [{"re":"1","im":"0"},{"re":"2","im":"0"},{"re":"0","im":"0"}],
                      "dir": [{"re":"2","im":"0"},{"re":"4","im":"0"},{"re":"0","im":"2"}]}]"#;
        fs::write(&path, raw).unwrap();
        let lines = read_lines(&path).unwrap();
        assert_eq!(lines[0].dir(), &[GR::one(), GR::from_int(2), GR::i()]);
        assert_eq!(lines[0].base(), &[GR::zero(), GR::zero(), GR::int(0, -1)]);
    }

    #[test]
    fn csv_round_shape() {
        let mut t = Table::new(["a", "b"]);
        t.push(["1", "x,y"]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
