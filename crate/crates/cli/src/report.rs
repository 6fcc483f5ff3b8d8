//! Deterministic CSV/JSON table rendering. Rationals stay exact ("p/q");
//! `--approx` appends decimal companion columns for human reading.

use clap::ValueEnum;
use num::ToPrimitive;

use sturmian::confrac::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A table cell. Rational cells know how to produce an approximation.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Int(i64),
    Bool(bool),
    /// Exact rational, displayed as "p/q"; the string keeps whatever
    /// denominator the caller chose.
    Rational { display: String, value: ExactRational },
    /// Not applicable.
    Missing,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn int(v: usize) -> Self {
        Cell::Int(v as i64)
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Rational { display, .. } => display.clone(),
            Cell::Missing => "-".into(),
        }
    }

    fn approx(&self) -> Option<String> {
        match self {
            Cell::Rational { value, .. } => {
                Some(format!("{:.6}", value.to_f64().unwrap_or(f64::NAN)))
            }
            _ => None,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Bool(b) => serde_json::Value::from(*b),
            Cell::Rational { display, .. } => serde_json::Value::String(display.clone()),
            Cell::Missing => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
    approx: bool,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), approx: false }
    }

    pub fn with_approx(mut self, approx: bool) -> Self {
        self.approx = approx;
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => self.render_json(),
        }
    }

    fn approx_columns(&self) -> Vec<usize> {
        if !self.approx {
            return Vec::new();
        }
        (0..self.headers.len())
            .filter(|&i| self.rows.iter().any(|r| matches!(r[i], Cell::Rational { .. })))
            .collect()
    }

    fn render_csv(&self) -> String {
        let approx_cols = self.approx_columns();
        let mut out = String::new();
        let mut headers: Vec<String> = self.headers.clone();
        for &i in &approx_cols {
            headers.push(format!("{}_approx", self.headers[i]));
        }
        out.push_str(&headers.iter().map(|h| csv_escape(h)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = row.iter().map(Cell::render).collect();
            for &i in &approx_cols {
                fields.push(row[i].approx().unwrap_or_else(|| "-".into()));
            }
            out.push_str(&fields.iter().map(|f| csv_escape(f)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let approx_cols = self.approx_columns();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (h, c) in self.headers.iter().zip(row) {
                    obj.insert(h.clone(), c.to_json());
                }
                for &i in &approx_cols {
                    let key = format!("{}_approx", self.headers[i]);
                    let val = row[i]
                        .approx()
                        .map(serde_json::Value::String)
                        .unwrap_or(serde_json::Value::Null);
                    obj.insert(key, val);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&serde_json::Value::Array(rows))
            .expect("tables serialize");
        text.push('\n');
        text
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn rational_cell(value: ExactRational, display: String) -> Cell {
    Cell::Rational { display, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new(&["slope", "n"]);
        t.push(vec![Cell::text("[0;1,2,(3,1)]"), Cell::int(3)]);
        let csv = t.render(OutputFormat::Csv);
        assert_eq!(csv, "slope,n\n\"[0;1,2,(3,1)]\",3\n");
    }

    #[test]
    fn approx_adds_columns_only_for_rationals() {
        let mut t = Table::new(&["n", "ind"]).with_approx(true);
        t.push(vec![
            Cell::int(2),
            rational_cell(ExactRational::new(BigInt::from(5), BigInt::from(2)), "5/2".into()),
        ]);
        let csv = t.render(OutputFormat::Csv);
        assert_eq!(csv, "n,ind,ind_approx\n2,5/2,2.500000\n");
    }

    #[test]
    fn json_is_deterministic() {
        let mut t = Table::new(&["n", "witness"]);
        t.push(vec![Cell::int(1), Cell::text("A")]);
        t.push(vec![Cell::int(2), Cell::Missing]);
        let a = t.render(OutputFormat::Json);
        let b = t.render(OutputFormat::Json);
        assert_eq!(a, b);
        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed[0]["witness"], "A");
        assert_eq!(parsed[1]["witness"], serde_json::Value::Null);
    }
}
