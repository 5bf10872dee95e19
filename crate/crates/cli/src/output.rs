//! Record sink for CSV and newline-delimited JSON.
//!
//! Records are serde structs. Field order comes from the struct, floats are
//! rounded to 12 significant digits before serialization, and missing values
//! are `null` in JSON and empty in CSV.

use std::io::Write;

use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

/// Rounds to 12 significant digits so that output is byte-stable.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn sig12_opt(x: Option<f64>) -> Option<f64> {
    x.map(sig12)
}

pub struct Sink<W: Write> {
    out: W,
    format: Format,
    header: Option<Vec<String>>,
}

impl<W: Write> Sink<W> {
    pub fn new(out: W, format: Format) -> Self {
        Self { out, format, header: None }
    }

    pub fn write<T: Serialize>(&mut self, record: &T) -> Result<()> {
        let Value::Object(map) = serde_json::to_value(record)? else {
            bail!("record is not a JSON object");
        };
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut self.out, &map)?;
                self.out.write_all(b"\n")?;
            }
            Format::Csv => {
                let keys: Vec<String> = map.keys().cloned().collect();
                match &self.header {
                    None => {
                        writeln!(self.out, "{}", keys.join(","))?;
                        self.header = Some(keys);
                    }
                    Some(h) if *h != keys => bail!("record fields changed within one CSV stream"),
                    Some(_) => {}
                }
                let cells: Vec<String> = map.values().map(csv_cell).collect();
                writeln!(self.out, "{}", cells.join(","))?;
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
