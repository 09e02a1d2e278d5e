//! CSV and JSON emission. Numbers are decimal scientific notation with a
//! fixed digit count, so files are byte-identical for a fixed configuration.

use std::io::Write;

use pjlab_core::identities::ResidualReport;
use pjlab_core::Real;
use serde_json::{json, Map, Value};

use crate::config::Format;

pub const SCHEMA: &str = "1";

/// A table with named columns whose cells are already formatted.
pub struct Table {
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Text(String),
    Int(i64),
    Num(String),
    Empty,
}

impl Cell {
    pub fn num(x: &Real, digits: usize) -> Cell {
        Cell::Num(x.to_sci_string(digits))
    }

    pub fn opt(x: Option<&Real>, digits: usize) -> Cell {
        x.map_or(Cell::Empty, |v| Cell::num(v, digits))
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Num(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) | Cell::Num(s) => Value::String(s.clone()),
            Cell::Int(i) => json!(i),
            Cell::Empty => Value::Null,
        }
    }
}

impl Table {
    pub fn write(&self, format: Format, extra: Map<String, Value>, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = Map::new();
                doc.insert("schema".into(), json!(SCHEMA));
                doc.insert("kind".into(), json!(self.kind));
                doc.extend(extra);
                doc.insert("rows".into(), Value::Array(rows));
                serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
                writeln!(out)
            }
        }
    }
}

pub fn report_table(reports: &[ResidualReport], digits: usize) -> Table {
    let columns = vec![
        "identity", "suite", "class", "n", "t", "z_re", "z_im", "residual", "tolerance", "status", "error_proxy",
        "notes",
    ];
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.identity.into()),
                Cell::Text(r.suite.name().into()),
                Cell::Text(r.class.name().into()),
                Cell::Int(r.n as i64),
                Cell::num(&r.t, digits),
                Cell::opt(r.z.as_ref().map(|z| &z.re), digits),
                Cell::opt(r.z.as_ref().map(|z| &z.im), digits),
                Cell::num(&r.residual, 6),
                Cell::num(&r.tolerance, 6),
                Cell::Text(r.status.name().into()),
                Cell::opt(r.error_proxy.as_ref(), 6),
                Cell::Text(r.notes.clone()),
            ]
        })
        .collect();
    Table {
        kind: "residual-reports",
        columns,
        rows,
    }
}

/// Counts of each status, for the JSON header.
pub fn summary(reports: &[ResidualReport]) -> Map<String, Value> {
    use pjlab_core::identities::Status;
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let mut m = Map::new();
    m.insert(
        "summary".into(),
        json!({
            "pass": count(Status::Pass),
            "fail": count(Status::Fail),
            "inconclusive": count(Status::Inconclusive),
        }),
    );
    m
}
