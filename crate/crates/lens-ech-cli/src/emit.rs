//! Deterministic CSV and JSON rendering of command results.

use lens_ech::index::{IndexComponents, RotationData, Tilt};
use lens_ech::rational::format_rational;
use lens_ech::{CapacitySequence, Rational};
use serde_json::{json, Value};

/// Output format for tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A table with a header row and `p/q` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// `k,value` rows of a capacity sequence.
    pub fn capacities(seq: &CapacitySequence) -> Self {
        let mut t = Table::new(["k", "value"]);
        for (k, v) in seq.values().iter().enumerate() {
            t.push(vec![k.to_string(), format_rational(v)]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// An array of objects keyed by the header.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map = self.header.iter().cloned().zip(row.iter().map(|c| Value::String(c.clone()))).collect();
                Value::Object(map)
            })
            .collect();
        pretty(&Value::Array(rows))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    text
}

pub fn rational(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

pub fn tilt_name(tilt: Tilt) -> &'static str {
    match tilt {
        Tilt::Negative => "negative",
        Tilt::Zero => "zero",
        Tilt::Positive => "positive",
    }
}

pub fn rotation(r: &RotationData) -> Value {
    json!({ "theta": format_rational(r.theta()), "tilt": tilt_name(r.tilt()) })
}

pub fn components(c: &IndexComponents) -> Value {
    json!({
        "chern": c.chern,
        "self_intersection": c.self_intersection,
        "cz": c.cz_total,
        "total": c.total,
    })
}
