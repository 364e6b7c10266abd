//! Reading and writing the city-day CSV schema.
//!
//! Header names are matched case-insensitively after trimming and may appear
//! in any order. Empty cells become absent values; absent is always distinct
//! from zero, and nothing here imputes.

use std::collections::HashMap;
use std::io::{Read, Write};

use chrono::NaiveDate;

use super::{AqiBucket, CityDayRecord, Column, DatasetError, Pollutant};

/// Canonical column order used when writing: City, Date, the twelve
/// pollutants, AQI, AQI_Bucket.
fn canonical_header() -> Vec<&'static str> {
    let mut header = vec!["City", "Date"];
    header.extend(Pollutant::ALL.iter().map(|p| p.column_name()));
    header.push("AQI");
    header.push("AQI_Bucket");
    header
}

/// Parse a city-day CSV stream into records.
///
/// The header must name the 15 schema columns (City, Date, the twelve
/// pollutants, AQI) in any order; an AQI_Bucket column is read when present.
/// Malformed numeric cells, negative values, and bad dates are errors that
/// name the offending row and column. Row numbers in errors are 1-based data
/// rows (the header is row 0).
pub fn parse_city_day_csv<R: Read>(reader: R) -> Result<Vec<CityDayRecord>, DatasetError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);

    let headers = csv_reader.headers()?.clone();
    let mut positions: HashMap<String, usize> = HashMap::new();
    for (idx, name) in headers.iter().enumerate() {
        positions.insert(name.trim().to_ascii_lowercase(), idx);
    }
    let find = |name: &str| positions.get(&name.to_ascii_lowercase()).copied();

    let city_idx = find("City").ok_or_else(|| DatasetError::MissingColumn("City".into()))?;
    let date_idx = find("Date").ok_or_else(|| DatasetError::MissingColumn("Date".into()))?;
    let mut pollutant_idx = Vec::with_capacity(12);
    for p in Pollutant::ALL {
        let idx = find(p.column_name())
            .ok_or_else(|| DatasetError::MissingColumn(p.column_name().into()))?;
        pollutant_idx.push((p, idx));
    }
    let aqi_idx = find("AQI").ok_or_else(|| DatasetError::MissingColumn("AQI".into()))?;
    // AQI_Bucket is optional in the header; the public dataset carries it.
    let bucket_idx = find("AQI_Bucket");

    let mut records = Vec::new();
    for (row_number, result) in csv_reader.records().enumerate() {
        let row = row_number + 1;
        let raw = result?;
        let cell = |idx: usize| raw.get(idx).unwrap_or("").trim();

        let date_text = cell(date_idx);
        let date = NaiveDate::parse_from_str(date_text, "%Y-%m-%d").map_err(|_| {
            DatasetError::BadDate {
                row,
                value: date_text.to_string(),
            }
        })?;

        let mut record = CityDayRecord::empty(cell(city_idx), date);
        for &(p, idx) in &pollutant_idx {
            record.set_pollutant(p, parse_numeric(cell(idx), row, p.column_name())?);
        }
        record.aqi = parse_numeric(cell(aqi_idx), row, "AQI")?;
        if let Some(idx) = bucket_idx {
            let text = cell(idx);
            if !text.is_empty() {
                record.aqi_bucket = Some(AqiBucket::from_name(text).ok_or_else(|| {
                    DatasetError::BadBucket {
                        row,
                        value: text.to_string(),
                    }
                })?);
            }
        }
        records.push(record);
    }
    Ok(records)
}

fn parse_numeric(text: &str, row: usize, column: &str) -> Result<Option<f64>, DatasetError> {
    if text.is_empty() {
        return Ok(None);
    }
    let value: f64 = text.parse().map_err(|_| DatasetError::BadNumber {
        row,
        column: column.to_string(),
        value: text.to_string(),
    })?;
    if !value.is_finite() {
        return Err(DatasetError::BadNumber {
            row,
            column: column.to_string(),
            value: text.to_string(),
        });
    }
    if value < 0.0 {
        return Err(DatasetError::NegativeValue {
            row,
            column: column.to_string(),
            value,
        });
    }
    Ok(Some(value))
}

/// Write records in the canonical column order. `parse_city_day_csv` on the
/// output yields the same records.
pub fn write_city_day_csv<W: Write>(
    writer: W,
    records: &[CityDayRecord],
) -> Result<(), DatasetError> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer.write_record(canonical_header())?;
    for record in records {
        let mut row: Vec<String> = Vec::with_capacity(16);
        row.push(record.city.clone());
        row.push(record.date.format("%Y-%m-%d").to_string());
        for p in Pollutant::ALL {
            row.push(format_cell(record.pollutant(p)));
        }
        row.push(format_cell(record.aqi));
        row.push(
            record
                .aqi_bucket
                .map(|b| b.canonical_name().to_string())
                .unwrap_or_default(),
        );
        csv_writer.write_record(&row)?;
    }
    csv_writer.flush()?;
    Ok(())
}

fn format_cell(value: Option<f64>) -> String {
    match value {
        // Ryu shortest-round-trip formatting, so write -> parse is lossless.
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

/// Keep only the records where every required column is present, preserving
/// input order. An empty requirement keeps everything.
pub fn drop_incomplete(records: &[CityDayRecord], required: &[Column]) -> Vec<CityDayRecord> {
    records
        .iter()
        .filter(|r| required.iter().all(|c| r.has(*c)))
        .cloned()
        .collect()
}
