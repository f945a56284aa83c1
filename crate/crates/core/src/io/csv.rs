//! Plain CSV series. Floats use Rust's shortest round-trip `{:e}` form, so a
//! file reproduces its records bit for bit.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::observables::{ObsRecord, CSV_COLUMNS};

pub fn header() -> String {
    CSV_COLUMNS.join(",")
}

pub fn format_row(values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 24);
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{v:e}").expect("write to string");
    }
    s
}

/// Incremental writer; every row is flushed so a crash keeps the prefix.
pub struct SeriesWriter {
    out: BufWriter<File>,
}

impl SeriesWriter {
    pub fn create(path: &Path) -> Result<SeriesWriter> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{}", header())?;
        out.flush()?;
        Ok(SeriesWriter { out })
    }

    pub fn push(&mut self, r: &ObsRecord) -> Result<()> {
        writeln!(self.out, "{}", format_row(&r.values()))?;
        self.out.flush()?;
        Ok(())
    }
}

pub fn write_series(path: &Path, records: &[ObsRecord]) -> Result<()> {
    let mut w = SeriesWriter::create(path)?;
    records.iter().try_for_each(|r| w.push(r))
}

/// Writes a table with an arbitrary header.
pub fn write_table(path: &Path, columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", columns.join(","))?;
    for r in rows {
        writeln!(out, "{}", format_row(r))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_series(path: &Path) -> Result<Vec<ObsRecord>> {
    let bad = |m: String| Error::InvalidParameter(format!("{}: {m}", path.display()));
    let mut lines = BufReader::new(File::open(path)?).lines();
    let head = lines.next().transpose()?.unwrap_or_default();
    if head != header() {
        return Err(bad(format!("unexpected header `{head}`")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let vals: Vec<f64> = line
            .split(',')
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("row {}: {e}", i + 1)))?;
        let arr: [f64; 13] = vals
            .try_into()
            .map_err(|v: Vec<f64>| bad(format!("row {} has {} columns", i + 1, v.len())))?;
        out.push(ObsRecord::from_values(&arr));
    }
    Ok(out)
}
