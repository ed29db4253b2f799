//! CSV data files: a header row of vertex labels, then one observation per
//! row. Numbers use `.` as the decimal separator.

use std::io::{Read, Write};

use bnspect_core::random::DataMatrix;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("header: no columns")]
    EmptyHeader,
    #[error("row {row}: expected {expected} fields, found {found}")]
    FieldCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a finite number")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },
}

impl DataError {
    /// True for failures of the underlying reader or writer, as opposed to
    /// malformed content.
    pub fn is_io(&self) -> bool {
        matches!(self, DataError::Csv(e) if e.is_io_error())
    }
}

pub fn write_csv<W: Write>(data: &DataMatrix, out: W) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(data.labels())?;
    let mut buf = Vec::with_capacity(data.cols());
    for row in data.values().row_iter() {
        buf.clear();
        buf.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&buf)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<DataMatrix, DataError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let labels: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if labels.is_empty() || labels.iter().all(String::is_empty) {
        return Err(DataError::EmptyHeader);
    }
    let p = labels.len();
    let mut values = Vec::new();
    let mut rows = 0;
    for (k, record) in r.records().enumerate() {
        let record = record?;
        // data rows are numbered from 1, header excluded
        let row = k + 1;
        if record.len() != p {
            return Err(DataError::FieldCount {
                row,
                expected: p,
                found: record.len(),
            });
        }
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| DataError::BadNumber {
                    row,
                    column: labels[j].clone(),
                    value: field.to_string(),
                })?;
            values.push(v);
        }
        rows += 1;
    }
    Ok(DataMatrix::new(
        labels,
        DMatrix::from_row_slice(rows, p, &values),
    ))
}
