//! JSON-lines and CSV emitters.

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use band_energy::{Error, Result};
use serde::Serialize;

/// Schema version stamped on every JSON record.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct Envelope<'a, P: Serialize, B: Serialize> {
    version: u32,
    command: &'a str,
    params: &'a P,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    body: B,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

/// Accumulates the output of one invocation before it is written out.
pub struct Sink {
    format: Format,
    timestamp: Option<u64>,
    buf: Vec<u8>,
}

impl Sink {
    pub fn new(format: Format, with_timestamp: bool) -> Self {
        let timestamp = with_timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            format,
            timestamp,
            buf: Vec::new(),
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// Appends one JSON line.
    pub fn record<P: Serialize, B: Serialize>(
        &mut self,
        command: &str,
        params: &P,
        seed: Option<u64>,
        body: B,
    ) -> Result<()> {
        let env = Envelope {
            version: SCHEMA_VERSION,
            command,
            params,
            seed,
            body,
            timestamp: self.timestamp,
        };
        serde_json::to_writer(&mut self.buf, &env)?;
        self.buf.push(b'\n');
        Ok(())
    }

    /// Appends a CSV table with a header derived from `R`.
    pub fn table<R: Serialize>(&mut self, rows: &[R]) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(&mut self.buf);
        for r in rows {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn finish(self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(path) => fs::write(path, &self.buf)
                .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(&self.buf)?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}
