use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// A CSV table held in memory until every row has been computed.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: vec![] }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            if row.len() != self.header.len() {
                return Err(Error::InternalConsistency(format!(
                    "row has {} cells, header has {}",
                    row.len(),
                    self.header.len()
                )));
            }
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes to `path`, removing the file again if anything fails part way.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let result = std::fs::File::create(path)
            .map_err(Error::from)
            .and_then(|f| self.write_to(std::io::BufWriter::new(f)));
        if result.is_err() {
            let _ = std::fs::remove_file(path);
        }
        result
    }
}

/// `digits` significant digits in scientific notation; locale independent.
pub fn format_float(v: f64, digits: usize) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{:.*e}", digits.saturating_sub(1), v)
    }
}
