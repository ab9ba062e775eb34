//! Rectangular tables written as CSV (with a versioned comment header) or as
//! JSON with one array per column.

use serde_json::{json, Map, Value};

use crate::entanglement::EntanglementRow;
use crate::error::{Error, Result};
use crate::sweep::{EntanglementSweepRow, SliceOptimum, SweepResult};

pub const SCHEMA: &str = "magpt-table";
pub const SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-4, 1e16)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "nan".into(),
            Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Value::String(self.render()),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(kind: &str, columns: &[&str]) -> Self {
        Self {
            kind: kind.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    /// `metadata` pairs go into the header in the given order.
    pub fn render(&self, format: Format, metadata: &[(&str, String)]) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(metadata),
            Format::Json => self.to_json(metadata),
        }
    }

    pub fn to_csv(&self, metadata: &[(&str, String)]) -> Result<String> {
        let mut header = format!("# {SCHEMA} v{SCHEMA_VERSION} kind={}", self.kind);
        for (k, v) in metadata {
            header.push_str(&format!(" {k}={v}"));
        }
        header.push('\n');
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render)).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(header + &String::from_utf8(body).expect("csv output is utf-8"))
    }

    pub fn to_json(&self, metadata: &[(&str, String)]) -> Result<String> {
        let mut meta = Map::new();
        for (k, v) in metadata {
            meta.insert(k.to_string(), Value::String(v.clone()));
        }
        let columns: Vec<Value> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, name)| {
                json!({
                    "name": name,
                    "values": self.rows.iter().map(|r| r[j].to_json()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = json!({
            "schema": SCHEMA,
            "version": SCHEMA_VERSION,
            "kind": self.kind,
            "metadata": meta,
            "columns": columns,
        });
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Config(format!("json: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

pub fn sweep_table(r: &SweepResult) -> Table {
    let mut t = Table::new(
        "sweep-precision",
        &[
            "input",
            "t",
            r.axis.name(),
            "omega1",
            "detuning",
            "photon_number",
            "variance",
            "dN_domega1",
            "delta2_omega1",
            "qfi",
            "flags",
        ],
    );
    for row in &r.rows {
        t.push(vec![
            row.input.label().into(),
            row.t.into(),
            row.axis_value.into(),
            row.omega1.into(),
            row.detuning.into(),
            row.photon_number.into(),
            row.variance.into(),
            row.slope.into(),
            row.delta2_omega1.into(),
            row.qfi.into(),
            match &row.error {
                Some(e) => format!("error: {e}").into(),
                None => row.flag().into(),
            },
        ]);
    }
    t
}

pub fn optima_table(optima: &[SliceOptimum], axis: &str) -> Table {
    let argmin = format!("argmin_{axis}");
    let local = format!("first_local_argmin_{axis}");
    let mut t = Table::new(
        "sweep-optima",
        &[
            "input",
            "t",
            &argmin,
            "min_delta2_omega1",
            &local,
            "first_local_min_delta2_omega1",
        ],
    );
    for o in optima {
        t.push(vec![
            o.input.label().into(),
            o.t.into(),
            o.argmin.into(),
            o.min_delta2.into(),
            o.first_local_argmin.into(),
            o.first_local_min.into(),
        ]);
    }
    t
}

pub fn entanglement_table(rows: &[EntanglementSweepRow]) -> Table {
    let mut t = Table::new(
        "entanglement",
        &[
            "input",
            "detuning",
            "t",
            "nu_minus",
            "log_negativity",
            "hz_witness",
            "physical",
        ],
    );
    for r in rows {
        let EntanglementRow {
            detuning,
            t: time,
            nu_minus,
            log_negativity,
            hz_witness,
            physical,
        } = r.row;
        t.push(vec![
            r.input.label().into(),
            detuning.into(),
            time.into(),
            nu_minus.into(),
            log_negativity.into(),
            hz_witness.into(),
            if physical { "true" } else { "false" }.into(),
        ]);
    }
    t
}
