use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a command produced: a single record or a table of rows.
pub enum Report {
    Record(Value),
    Table { columns: Vec<&'static str>, rows: Vec<Vec<String>>, extra: Value },
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render_json(report: &Report, meta: &Value) -> Value {
    let mut obj = match report {
        Report::Record(Value::Object(m)) => m.clone(),
        Report::Record(v) => {
            let mut m = Map::new();
            m.insert("result".into(), v.clone());
            m
        }
        Report::Table { columns, rows, extra } => {
            let mut m = match extra {
                Value::Object(m) => m.clone(),
                _ => Map::new(),
            };
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(columns.iter().zip(r).map(|(c, x)| (c.to_string(), Value::String(x.clone()))).collect()))
                .collect();
            m.insert("rows".into(), Value::Array(rows));
            m
        }
    };
    obj.insert("meta".into(), meta.clone());
    Value::Object(obj)
}

fn render_csv(report: &Report, meta: &Value, w: &mut dyn Write) -> io::Result<()> {
    // metadata rides along as comment lines ahead of the header
    if let Value::Object(m) = meta {
        for (k, v) in m {
            writeln!(w, "# {k}={}", cell(v))?;
        }
    }
    let mut out = csv::Writer::from_writer(w);
    match report {
        Report::Table { columns, rows, .. } => {
            out.write_record(columns)?;
            for r in rows {
                out.write_record(r)?;
            }
        }
        Report::Record(Value::Object(m)) => {
            out.write_record(m.keys())?;
            out.write_record(m.values().map(cell))?;
        }
        Report::Record(v) => {
            out.write_record(["result"])?;
            out.write_record([cell(v)])?;
        }
    }
    out.flush()
}

pub fn emit(report: &Report, meta: &Value, format: Format, path: Option<&Path>) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            let v = render_json(report, meta);
            writeln!(sink, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
        }
        Format::Csv => render_csv(report, meta, &mut sink)?,
    }
    sink.flush()
}
