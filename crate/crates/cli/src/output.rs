use crate::Format;
use serde_json::Value;
use std::io::Write;

/// What a subcommand produced and whether its asserted tolerances held.
pub struct Report {
    pub json: Value,
    /// Flat records for CSV output, one row each.
    pub rows: Vec<Value>,
    pub passed: bool,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit(report: &Report, format: Format) -> anyhow::Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut lock, &report.json)?;
            writeln!(lock)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(lock);
            let header: Vec<String> = match report.rows.first() {
                Some(Value::Object(m)) => m.keys().cloned().collect(),
                _ => Vec::new(),
            };
            if !header.is_empty() {
                w.write_record(&header)?;
            }
            for row in &report.rows {
                w.write_record(header.iter().map(|k| cell(&row[k])))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
