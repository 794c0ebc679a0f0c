//! Command results and their text, JSON and CSV renderings.

use std::collections::BTreeMap;

use house_edge::Rational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Val {
    Exact(Rational),
    /// A value known only approximately (simulation, floating point).
    Approx(f64),
    Int(i128),
    Text(String),
    Bool(bool),
}

impl From<Rational> for Val {
    fn from(r: Rational) -> Self {
        Val::Exact(r)
    }
}

impl From<&Rational> for Val {
    fn from(r: &Rational) -> Self {
        Val::Exact(r.clone())
    }
}

impl From<f64> for Val {
    fn from(x: f64) -> Self {
        Val::Approx(x)
    }
}

impl From<bool> for Val {
    fn from(b: bool) -> Self {
        Val::Bool(b)
    }
}

impl From<String> for Val {
    fn from(s: String) -> Self {
        Val::Text(s)
    }
}

impl From<&str> for Val {
    fn from(s: &str) -> Self {
        Val::Text(s.to_string())
    }
}

macro_rules! int_val {
    ($($t:ty),*) => {$(
        impl From<$t> for Val {
            fn from(v: $t) -> Self {
                Val::Int(v as i128)
            }
        }
    )*};
}
int_val!(i32, i64, u8, u32, u64, usize, i128);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    pub digits: usize,
    pub exact: bool,
}

impl Val {
    /// Scalar rendering for text and CSV.
    pub fn render(&self, style: Style) -> String {
        match self {
            Val::Exact(r) if style.exact => r.to_string(),
            Val::Exact(r) => r.to_decimal(style.digits),
            Val::Approx(x) => format!("{:.*}", style.digits, x),
            Val::Int(n) => n.to_string(),
            Val::Text(s) => s.clone(),
            Val::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self, style: Style) -> Value {
        match self {
            Val::Exact(r) => json!({"exact": r.to_string(), "decimal": r.to_decimal(style.digits)}),
            Val::Approx(x) => json!({"decimal": format!("{:.*}", style.digits, x)}),
            Val::Int(n) => match i64::try_from(*n) {
                Ok(v) => json!(v),
                Err(_) => json!(n.to_string()),
            },
            Val::Text(s) => json!(s),
            Val::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Val>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Table {
        Table { name: name.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Val>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    MonteCarlo { seed: u64, trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub provenance: Provenance,
    pub fields: Vec<(String, Val)>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.into(),
            inputs: BTreeMap::new(),
            provenance: Provenance::Exact,
            fields: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn field(&mut self, key: &str, value: impl Into<Val>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn table(&mut self, t: Table) -> &mut Self {
        self.tables.push(t);
        self
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    pub fn monte_carlo(&mut self, seed: u64, trials: u64) -> &mut Self {
        self.provenance = Provenance::MonteCarlo { seed, trials };
        self
    }

    pub fn render(&self, format: Format, style: Style) -> String {
        match format {
            Format::Text => self.to_text(style),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json(style)).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(style),
        }
    }

    pub fn to_json(&self, style: Style) -> Value {
        let mut results = Map::new();
        for (k, v) in &self.fields {
            results.insert(k.clone(), v.to_json(style));
        }
        for t in &self.tables {
            let rows = t
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        t.headers.iter().cloned().zip(row.iter().map(|v| v.to_json(style))).collect();
                    Value::Object(obj)
                })
                .collect();
            results.insert(t.name.clone(), Value::Array(rows));
        }
        let provenance = match &self.provenance {
            Provenance::Exact => json!({"kind": "exact"}),
            Provenance::MonteCarlo { seed, trials } => json!({"kind": "monte_carlo", "seed": seed, "trials": trials}),
        };
        let mut top = json!({
            "command": self.command,
            "inputs": self.inputs,
            "provenance": provenance,
            "results": results,
        });
        if !self.notes.is_empty() {
            top["notes"] = json!(self.notes);
        }
        top
    }

    fn to_text(&self, style: Style) -> String {
        let mut out = String::new();
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("# {}", self.command));
        if !inputs.is_empty() {
            out.push_str(&format!(" ({})", inputs.join(", ")));
        }
        out.push('\n');
        if let Provenance::MonteCarlo { seed, trials } = &self.provenance {
            out.push_str(&format!("# monte carlo: seed {seed}, {trials} trials\n"));
        }
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            out.push_str(&format!("{k:<width$}  {}\n", v.render(style)));
        }
        for t in &self.tables {
            out.push('\n');
            out.push_str(&format!("[{}]\n", t.name));
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(|v| v.render(style)).collect()).collect();
            let widths: Vec<usize> = (0..t.headers.len())
                .map(|j| cells.iter().map(|r| r[j].len()).chain([t.headers[j].len()]).max().unwrap_or(0))
                .collect();
            let line = |row: &[String]| {
                let parts: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                parts.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(&t.headers));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("\nnote: {n}\n"));
        }
        out
    }

    fn to_csv(&self, style: Style) -> String {
        let write = |headers: &[String], rows: Vec<Vec<String>>| -> String {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(headers).expect("in-memory write");
            for r in rows {
                w.write_record(&r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
        };
        if self.tables.is_empty() {
            let rows = self.fields.iter().map(|(k, v)| vec![k.clone(), v.render(style)]).collect();
            return write(&["field".into(), "value".into()], rows);
        }
        let many = self.tables.len() > 1;
        let mut parts = Vec::new();
        for t in &self.tables {
            let rows = t.rows.iter().map(|r| r.iter().map(|v| v.render(style)).collect()).collect();
            let body = write(&t.headers, rows);
            parts.push(if many { format!("# {}\n{body}", t.name) } else { body });
        }
        parts.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use house_edge::ratio;

    fn sample() -> Report {
        let mut r = Report::new("demo");
        r.input("x", 3).field("p", ratio(1, 3)).field("n", 7u32).field("label", "a, \"b\"");
        let mut t = Table::new("rows", &["name", "value"]);
        t.push(vec!["x,y".into(), ratio(2, 7).into()]);
        t.push(vec!["z".into(), Val::Approx(0.5)]);
        r.table(t);
        r
    }

    const STYLE: Style = Style { digits: 7, exact: false };

    #[test]
    fn json_round_trips() {
        let s = sample().render(Format::Json, STYLE);
        let v: Value = serde_json::from_str(&s).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(s, again);
        assert_eq!(v["results"]["p"]["exact"], "1/3");
        assert_eq!(v["results"]["p"]["decimal"], "0.3333333");
    }

    #[test]
    fn csv_quotes() {
        let s = sample().render(Format::Csv, STYLE);
        assert_eq!(s, "name,value\n\"x,y\",0.2857143\nz,0.5000000\n");
        let exact = sample().render(Format::Csv, Style { digits: 7, exact: true });
        assert!(exact.contains(",2/7\n"));
    }

    #[test]
    fn text_lists_fields() {
        let s = sample().render(Format::Text, STYLE);
        assert!(s.starts_with("# demo (x=3)\n"));
        assert!(s.contains("p      0.3333333\n"));
    }
}
