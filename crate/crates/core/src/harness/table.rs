use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// One typed output cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<i64> for Cell {
    fn from(x: i64) -> Cell {
        Cell::Int(x as i128)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Cell {
        Cell::Int(x as i128)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Cell {
        Cell::Int(x as i128)
    }
}

impl From<u128> for Cell {
    fn from(x: u128) -> Cell {
        Cell::Int(x as i128)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Cell {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Cell {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Cell {
        Cell::Text(x.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Cell {
        x.map_or(Cell::Null, Into::into)
    }
}

/// x rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) if x.is_nan() => "nan".into(),
            Cell::Float(x) if x.is_infinite() => if *x > 0.0 { "inf".into() } else { "-inf".into() },
            Cell::Float(x) => round12(*x).to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => match i64::try_from(*i) {
                Ok(v) => Value::from(v),
                Err(_) => Value::String(i.to_string()),
            },
            Cell::Float(x) => match Number::from_f64(round12(*x)) {
                Some(n) => Value::Number(n),
                None => Value::String(self.text()),
            },
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Null => Value::Null,
        }
    }

    /// Inverse of the CSV rendering for cells that came from a typed table.
    fn parse(s: &str) -> Cell {
        if s.is_empty() {
            Cell::Null
        } else if let Ok(i) = s.parse::<i128>() {
            Cell::Int(i)
        } else if s == "true" || s == "false" {
            Cell::Bool(s == "true")
        } else if let Ok(x) = s.parse::<f64>() {
            Cell::Float(x)
        } else {
            Cell::Text(s.to_string())
        }
    }

    fn from_json(v: &Value) -> Cell {
        match v {
            Value::Null => Cell::Null,
            Value::Bool(b) => Cell::Bool(*b),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Cell::Int(i as i128),
                None => Cell::Float(n.as_f64().unwrap_or(f64::NAN)),
            },
            Value::String(s) => Cell::parse(s),
            other => Cell::Text(other.to_string()),
        }
    }
}

/// Output format of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A homogeneous table with a fixed column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(io_err)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::text)).map_err(io_err)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let arr: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> =
                    self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                Value::Object(m)
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&Value::Array(arr)).map_err(|e| Error::Io(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn from_csv(data: &[u8]) -> Result<Table> {
        let mut r = csv::Reader::from_reader(data);
        let columns = r.headers().map_err(io_err)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(io_err)?.iter().map(Cell::parse).collect());
        }
        Ok(Table { columns, rows })
    }

    /// Reads a JSON array of objects; `columns` fixes the order (taken from
    /// the first object when empty).
    pub fn from_json(data: &[u8], columns: &[&str]) -> Result<Table> {
        let v: Value = serde_json::from_slice(data).map_err(|e| Error::Parse(e.to_string()))?;
        let arr = v.as_array().ok_or_else(|| Error::Parse("expected a JSON array".into()))?;
        let cols: Vec<String> = if columns.is_empty() {
            arr.first()
                .and_then(Value::as_object)
                .map(|o| o.keys().cloned().collect())
                .unwrap_or_default()
        } else {
            columns.iter().map(|s| s.to_string()).collect()
        };
        let mut rows = Vec::new();
        for obj in arr {
            let o = obj.as_object().ok_or_else(|| Error::Parse("expected objects".into()))?;
            rows.push(cols.iter().map(|c| o.get(c).map_or(Cell::Null, Cell::from_json)).collect());
        }
        Ok(Table { columns: cols, rows })
    }

    /// Writes to `path`, or to stdout when `None`.
    pub fn emit(&self, format: Format, path: Option<&std::path::Path>) -> Result<()> {
        let bytes = self.render(format)?;
        match path {
            Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
            None => std::io::stdout().write_all(&bytes).map_err(|e| Error::Io(e.to_string())),
        }
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
