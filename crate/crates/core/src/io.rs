//! File formats shared by the library and the CLI.
//!
//! CSV files start with a single `# ` comment line carrying a JSON
//! [`Provenance`] record, followed by a header row and data rows. Floats are
//! written with 17 significant digits so values round-trip exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tool version, configuration echo and seeds embedded in every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
}

impl Provenance {
    pub fn new(config: serde_json::Value, seeds: Vec<u64>) -> Self {
        Self {
            tool: "gpr".to_string(),
            version: VERSION.to_string(),
            config,
            seeds,
        }
    }
}

/// 17 significant digits in scientific notation; `inf`/`-inf`/`NaN` as Rust prints them.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn write_csv(
    path: &Path,
    provenance: &Provenance,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_csv_to(&mut out, provenance, header, rows)?;
    out.flush()?;
    Ok(())
}

pub fn write_csv_to(
    out: &mut impl Write,
    provenance: &Provenance,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    writeln!(out, "# {}", serde_json::to_string(provenance)?)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt17(x))).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Parsed numeric CSV: the provenance line if present, column names and rows.
#[derive(Debug, Clone)]
pub struct NumericCsv {
    pub provenance: Option<Provenance>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Reads a whole file; I/O errors name the path.
pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn read_csv(path: &Path, expected_header: &[&str]) -> Result<NumericCsv> {
    let text = read_text(path)?;
    parse_csv(&text, expected_header).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}:{location}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn parse_csv(text: &str, expected_header: &[&str]) -> Result<NumericCsv> {
    let provenance = text
        .lines()
        .find_map(|l| l.strip_prefix("# "))
        .and_then(|j| serde_json::from_str(j).ok());

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::parse("header", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != expected_header {
        return Err(Error::parse(
            "header",
            format!("expected columns {expected_header:?}, found {header:?}"),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::parse(format!("line {line}"), e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    Error::parse(
                        format!("line {line}, column {}", header[col]),
                        format!("not a number: {field:?}"),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(NumericCsv {
        provenance,
        header,
        rows,
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
