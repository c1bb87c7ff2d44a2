//! CSV ingestion and decomposition output.
//!
//! Input is a header-bearing CSV with one numeric value column and an
//! optional ISO-8601 date column. Output is either CSV with columns
//! `t, [date,] y, trend, cycle, [stage_trend_1, …]` or a single JSON object
//! with the same columns as arrays plus `chosen_n` and `si_values` for SOHP
//! results. Numbers are written in shortest round-trip form, so reading a
//! column back reproduces it bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filters::{Decomposition, SohpResult};

const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("column {0:?} not found in header")]
    MissingColumn(String),

    #[error("row {row}: cannot parse {column} value {value:?}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: date {date} does not follow the previous date")]
    Unordered { row: usize, date: NaiveDate },

    #[error("input has no data rows")]
    Empty,

    #[error("observation {index} is {value}; the log transform needs positive values")]
    NonPositive { index: usize, value: f64 },
}

/// One observation. Rows are numbered from 1 after the header.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRecord {
    pub date: Option<NaiveDate>,
    pub value: f64,
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize, DataError> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| DataError::MissingColumn(name.to_string()))
}

/// Reads records in file order.
///
/// Values must be finite numbers; blank cells and literal `null` (as in
/// Yahoo Finance exports) are parse errors. When a date column is named,
/// every row needs a date and dates must strictly increase.
pub fn read_csv<R: Read>(
    reader: R,
    value_column: &str,
    date_column: Option<&str>,
) -> Result<Vec<SeriesRecord>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let value_idx = column_index(&headers, value_column)?;
    let date_idx = date_column
        .map(|name| column_index(&headers, name))
        .transpose()?;

    let mut out = Vec::new();
    let mut previous: Option<NaiveDate> = None;
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let raw = record.get(value_idx).unwrap_or("");
        let value = raw
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| DataError::Parse {
                row,
                column: value_column.to_string(),
                value: raw.to_string(),
            })?;
        let date = match (date_idx, date_column) {
            (Some(idx), Some(name)) => {
                let raw = record.get(idx).unwrap_or("");
                let date =
                    NaiveDate::parse_from_str(raw, DATE_FORMAT).map_err(|_| DataError::Parse {
                        row,
                        column: name.to_string(),
                        value: raw.to_string(),
                    })?;
                if previous.is_some_and(|p| date <= p) {
                    return Err(DataError::Unordered { row, date });
                }
                previous = Some(date);
                Some(date)
            }
            _ => None,
        };
        out.push(SeriesRecord { date, value });
    }
    if out.is_empty() {
        return Err(DataError::Empty);
    }
    Ok(out)
}

pub fn read_csv_path(
    path: impl AsRef<Path>,
    value_column: &str,
    date_column: Option<&str>,
) -> Result<Vec<SeriesRecord>, DataError> {
    read_csv(BufReader::new(File::open(path)?), value_column, date_column)
}

pub fn values(records: &[SeriesRecord]) -> Vec<f64> {
    records.iter().map(|r| r.value).collect()
}

/// Dates, if every record has one.
pub fn dates(records: &[SeriesRecord]) -> Option<Vec<NaiveDate>> {
    records.iter().map(|r| r.date).collect()
}

/// Natural logarithm of every value.
pub fn log_transform(records: &[SeriesRecord]) -> Result<Vec<f64>, DataError> {
    records
        .iter()
        .enumerate()
        .map(|(index, r)| {
            if r.value > 0.0 {
                Ok(r.value.ln())
            } else {
                Err(DataError::NonPositive {
                    index,
                    value: r.value,
                })
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Anything that can be written out as a decomposition.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Decomposition(&'a Decomposition),
    Sohp(&'a SohpResult),
}

impl<'a> From<&'a Decomposition> for Report<'a> {
    fn from(d: &'a Decomposition) -> Self {
        Report::Decomposition(d)
    }
}

impl<'a> From<&'a SohpResult> for Report<'a> {
    fn from(r: &'a SohpResult) -> Self {
        Report::Sohp(r)
    }
}

/// JSON document layout. Optional members are omitted when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub t: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<Vec<String>>,
    pub y: Vec<f64>,
    pub trend: Vec<f64>,
    pub cycle: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage_trends: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub si_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
}

impl DecompositionDocument {
    pub fn new(report: Report<'_>, dates: Option<&[NaiveDate]>) -> Self {
        let (y, trend, cycle) = match report {
            Report::Decomposition(d) => (d.observations(), d.trend(), d.cycle()),
            Report::Sohp(r) => (
                r.observations.as_slice(),
                r.cumulative_trend.as_slice(),
                r.final_cycle.as_slice(),
            ),
        };
        let mut doc = Self {
            t: (1..=y.len()).collect(),
            date: dates.map(|ds| {
                ds.iter()
                    .map(|d| d.format(DATE_FORMAT).to_string())
                    .collect()
            }),
            y: y.to_vec(),
            trend: trend.to_vec(),
            cycle: cycle.to_vec(),
            stage_trends: None,
            chosen_n: None,
            si_values: None,
            degenerate: None,
        };
        if let Report::Sohp(r) = report {
            doc.stage_trends = Some(r.stage_trends.clone());
            doc.chosen_n = Some(r.chosen_n);
            doc.si_values = Some(r.si_values.clone());
            doc.degenerate = Some(r.degenerate);
        }
        doc
    }

    fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut w = csv::Writer::from_writer(writer);
        let stages = self.stage_trends.as_deref().unwrap_or(&[]);
        let mut header = vec!["t".to_string()];
        if self.date.is_some() {
            header.push("date".into());
        }
        header.extend(["y", "trend", "cycle"].map(String::from));
        header.extend((1..=stages.len()).map(|i| format!("stage_trend_{i}")));
        w.write_record(&header)?;
        for i in 0..self.y.len() {
            let mut row = vec![self.t[i].to_string()];
            if let Some(dates) = &self.date {
                row.push(dates[i].clone());
            }
            row.push(self.y[i].to_string());
            row.push(self.trend[i].to_string());
            row.push(self.cycle[i].to_string());
            row.extend(stages.iter().map(|s| s[i].to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Writes a decomposition or SOHP result to `writer`.
pub fn write_decomposition<W: Write>(
    report: Report<'_>,
    dates: Option<&[NaiveDate]>,
    format: OutputFormat,
    mut writer: W,
) -> Result<(), DataError> {
    let doc = DecompositionDocument::new(report, dates);
    match format {
        OutputFormat::Csv => doc.write_csv(writer),
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut writer, &doc)?;
            writeln!(writer)?;
            Ok(())
        }
    }
}

pub fn write_decomposition_path(
    report: Report<'_>,
    dates: Option<&[NaiveDate]>,
    format: OutputFormat,
    path: impl AsRef<Path>,
) -> Result<(), DataError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_decomposition(report, dates, format, &mut w)?;
    w.flush()?;
    Ok(())
}
