//! Record and report writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rrtlab_core::empirical::{Record, SCHEMA};
use serde_json::Value;

use crate::config::Format;
use crate::CliError;

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Single writer for a stream of records.
pub struct RecordSink {
    inner: SinkKind,
}

enum SinkKind {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Jsonl(Box<dyn Write>),
}

impl RecordSink {
    pub fn new(format: Format, path: Option<&Path>) -> Result<Self, CliError> {
        let out = open(path)?;
        let inner = match format {
            Format::Csv => SinkKind::Csv(Box::new(csv::Writer::from_writer(out))),
            Format::Jsonl => SinkKind::Jsonl(out),
        };
        Ok(Self { inner })
    }

    pub fn write(&mut self, record: &Record) -> Result<(), CliError> {
        match &mut self.inner {
            SinkKind::Csv(w) => w.serialize(record).map_err(io_err),
            SinkKind::Jsonl(w) => {
                serde_json::to_writer(&mut *w, record).map_err(io_err)?;
                w.write_all(b"\n").map_err(io_err)
            }
        }
    }

    pub fn finish(self) -> Result<(), CliError> {
        match self.inner {
            SinkKind::Csv(mut w) => w.flush().map_err(io_err),
            SinkKind::Jsonl(mut w) => w.flush().map_err(io_err),
        }
    }
}

/// Writes `body` with the schema tag as one pretty JSON document.
pub fn write_report(path: Option<&Path>, mut body: Value) -> Result<(), CliError> {
    if let Value::Object(map) = &mut body {
        map.insert("schema".into(), SCHEMA.into());
    }
    let mut out = open(path)?;
    serde_json::to_writer_pretty(&mut out, &body).map_err(io_err)?;
    out.write_all(b"\n").map_err(io_err)?;
    out.flush().map_err(io_err)
}
