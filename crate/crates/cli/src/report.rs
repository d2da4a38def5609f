//! Report envelopes and their JSON/CSV rendering.

use std::io::Write;

use hmplanes::exterior::{Covector, PluckerPoint};
use hmplanes::hmrestrict::{FoundLine, LineSpec, PlaneSpec};
use hmplanes::Field;
use serde_json::{json, Value};

use crate::{CliError, Format};

pub const SCHEMA_VERSION: &str = "v1";

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A finished report. `failure` is set when the data is complete but the
/// run must still exit nonzero.
pub struct Output {
    pub json: Value,
    pub table: Option<Table>,
    pub failure: Option<CliError>,
}

impl Output {
    pub fn new(command: &str, field: &str, seed: u64, prime: u64, results: Vec<Value>) -> Self {
        let json = json!({
            "schema": format!("hmplanes/{command}/{SCHEMA_VERSION}"),
            "command": command,
            "field": field,
            "seed": seed,
            "prime": prime,
            "results": results,
        });
        Output { json, table: None, failure: None }
    }

    pub fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header: header.iter().map(|s| s.to_string()).collect(), rows });
        self
    }

    pub fn failing(mut self, failure: Option<CliError>) -> Self {
        self.failure = failure;
        self
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match (format, &self.table) {
            (Format::Csv, Some(t)) => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&t.header)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
            _ => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
        }
    }
}

pub fn scalars<F: Field>(xs: &[F]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn covector<F: Field>(c: &Covector<F>) -> Value {
    scalars(&c.0)
}

pub fn plucker<F: Field>(p: &PluckerPoint<F>) -> Value {
    scalars(&p.0)
}

pub fn line<F: Field>(l: &LineSpec<F>) -> Value {
    Value::Array(l.covectors().iter().map(covector).collect())
}

pub fn plane<F: Field>(p: &PlaneSpec<F>) -> Value {
    json!({ "x": covector(p.x()), "y": covector(p.y()), "plucker": plucker(p.plucker()) })
}

pub fn found_line<F: Field>(f: &FoundLine<F>) -> Value {
    json!({ "dual_point": scalars(&f.dual_point), "covectors": line(&f.line), "order": f.order })
}
