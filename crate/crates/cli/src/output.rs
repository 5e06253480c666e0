//! JSON and CSV emission. Every artifact embeds the resolved configuration.

use std::io::Write;
use std::path::Path;

use nalgebra::Vector2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

/// Complex number as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

pub fn cvec(v: &Vector2<Complex64>) -> [Cplx; 2] {
    [v[0].into(), v[1].into()]
}

/// JSON document `{"config": .., <body fields>}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct Document<T> {
    pub config: RunConfig,
    #[serde(flatten)]
    pub body: T,
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn write_json<T: Serialize>(config: &RunConfig, body: T) -> Result<(), CliError> {
    let doc = Document {
        config: config.clone(),
        body,
    };
    let mut w = sink(config.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Io(e.to_string()))
}

/// CSV with a leading `# config = <json>` comment line.
pub fn write_csv(config: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = sink(config.out.as_deref())?;
    let cfg = serde_json::to_string(config).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w, "# config = {cfg}").map_err(|e| CliError::Io(e.to_string()))?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        csv.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    csv.flush().map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_serializes_with_named_parts() {
        let s = serde_json::to_string(&Cplx::from(Complex64::new(1.5, -2.0))).unwrap();
        assert_eq!(s, r#"{"re":1.5,"im":-2.0}"#);
    }
}
