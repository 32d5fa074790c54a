//! Column-oriented CSV with a mandatory header row.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Significant digits used for real-valued columns.
pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub enum ColumnData {
    Integer(Vec<usize>),
    Real(Vec<f64>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Integer(v) => v.len(),
            ColumnData::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn render(&self, row: usize, out: &mut String) {
        match self {
            ColumnData::Integer(v) => write!(out, "{}", v[row]).unwrap(),
            ColumnData::Real(v) => out.push_str(&format_significant(v[row])),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Column {
    pub fn integer(name: &str, data: Vec<usize>) -> Self {
        Column {
            name: name.to_string(),
            data: ColumnData::Integer(data),
        }
    }

    pub fn real(name: &str, data: Vec<f64>) -> Self {
        Column {
            name: name.to_string(),
            data: ColumnData::Real(data),
        }
    }
}

/// Renders `x` with nine significant digits in the shortest of fixed or
/// exponent notation, trailing zeros removed.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_fraction(mantissa.to_string()))
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// Renders a header line followed by one line per row.
pub fn render_csv(columns: &[Column]) -> Result<String> {
    let first = columns
        .first()
        .ok_or_else(|| Error::Csv("no columns to write".into()))?;
    let rows = first.data.len();
    for c in columns {
        if c.name.contains(',') || c.name.contains('\n') {
            return Err(Error::Csv(format!("column name {:?} contains a delimiter", c.name)));
        }
        if c.data.len() != rows {
            return Err(Error::Csv(format!(
                "column {:?} has {} rows, expected {rows}",
                c.name,
                c.data.len()
            )));
        }
    }
    let mut out = String::with_capacity((rows + 1) * 16 * columns.len());
    let names: Vec<&str> = columns.iter().map(|c| c.name.as_str()).collect();
    out.push_str(&names.join(","));
    out.push('\n');
    for row in 0..rows {
        for (k, c) in columns.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            c.data.render(row, &mut out);
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(path: &Path, columns: &[Column]) -> Result<()> {
    let text = render_csv(columns)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Named real-valued columns read back from CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|k| self.columns[k].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

/// Parses CSV text whose every non-header field is numeric.
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Csv("missing header row".into()))?;
    let headers: Vec<String> = header.split(',').map(|h| h.trim().to_string()).collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != headers.len() {
            return Err(Error::Csv(format!(
                "row {} has {} fields, expected {}",
                row + 1,
                fields.len(),
                headers.len()
            )));
        }
        for (col, field) in columns.iter_mut().zip(fields) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::Csv(format!("row {}: {field:?} is not a number", row + 1)))?;
            col.push(v);
        }
    }
    Ok(CsvTable { headers, columns })
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text).map_err(|e| match e {
        Error::Csv(msg) => Error::Csv(format!("{}: {msg}", path.display())),
        other => other,
    })
}
