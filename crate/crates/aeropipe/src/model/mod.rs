//! Shared domain types and the city-day dataset schema.
//!
//! Everything here is an immutable value object: cheap to clone, safe to
//! share across threads, no interior mutability.

mod csv_io;

pub use csv_io::{drop_incomplete, parse_city_day_csv, write_city_day_csv};

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced while reading or validating city-day dataset files.
#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("missing required column `{0}` in header")]
    MissingColumn(String),
    #[error("row {row}: unparseable date `{value}` (expected YYYY-MM-DD)")]
    BadDate { row: usize, value: String },
    #[error("row {row}, column `{column}`: unparseable number `{value}`")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}, column `{column}`: negative value {value}")]
    NegativeValue {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("row {row}: unknown AQI bucket `{value}`")]
    BadBucket { row: usize, value: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// The two gases the virtual hardware can sense.
///
/// MQ135 (air quality / VOCs) sits on mux channel 0, MQ3 (alcohol) on
/// channel 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GasKind {
    Mq135Air,
    Mq3Alcohol,
}

impl GasKind {
    pub const ALL: [GasKind; 2] = [GasKind::Mq135Air, GasKind::Mq3Alcohol];

    /// Mux channel this gas is wired to.
    pub fn mux_channel(self) -> u8 {
        match self {
            GasKind::Mq135Air => 0,
            GasKind::Mq3Alcohol => 1,
        }
    }

    pub fn from_channel(channel: u8) -> Option<GasKind> {
        match channel {
            0 => Some(GasKind::Mq135Air),
            1 => Some(GasKind::Mq3Alcohol),
            _ => None,
        }
    }
}

impl std::fmt::Display for GasKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GasKind::Mq135Air => write!(f, "MQ135"),
            GasKind::Mq3Alcohol => write!(f, "MQ3"),
        }
    }
}

/// One averaged analog reading from one mux channel of one virtual device.
///
/// `raw_counts` holds the arithmetic mean of the six ADC reads as a real
/// number (not re-truncated to an integer), in [0, 1023].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorSample {
    pub device_id: String,
    /// Mux channel the reading came from (0 or 1).
    pub channel: u8,
    /// Mean of six consecutive ADC reads, in counts.
    pub raw_counts: f64,
    /// Concentration derived from `raw_counts` via the sensor curve.
    pub ppm: f64,
    /// Virtual-clock timestamp of the reading (seconds resolution).
    pub taken_at: DateTime<Utc>,
}

/// One persisted telemetry row in an ingestion channel.
///
/// `entry_id` is dense and strictly increasing within its channel, starting
/// at 1. `field1` carries the MQ135 ppm, `field2` the MQ3 ppm; either may be
/// absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelEntry {
    pub entry_id: u64,
    pub created_at: DateTime<Utc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field2: Option<f64>,
}

/// The twelve pollutant columns of the city-day dataset, in schema order.
///
/// Concentrations are µg/m³ except CO, which the dataset reports in mg/m³.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pollutant {
    Pm25,
    Pm10,
    No,
    No2,
    Nox,
    Nh3,
    Co,
    So2,
    O3,
    Benzene,
    Toluene,
    Xylene,
}

impl Pollutant {
    pub const ALL: [Pollutant; 12] = [
        Pollutant::Pm25,
        Pollutant::Pm10,
        Pollutant::No,
        Pollutant::No2,
        Pollutant::Nox,
        Pollutant::Nh3,
        Pollutant::Co,
        Pollutant::So2,
        Pollutant::O3,
        Pollutant::Benzene,
        Pollutant::Toluene,
        Pollutant::Xylene,
    ];

    /// Canonical CSV header name.
    pub fn column_name(self) -> &'static str {
        match self {
            Pollutant::Pm25 => "PM2.5",
            Pollutant::Pm10 => "PM10",
            Pollutant::No => "NO",
            Pollutant::No2 => "NO2",
            Pollutant::Nox => "NOx",
            Pollutant::Nh3 => "NH3",
            Pollutant::Co => "CO",
            Pollutant::So2 => "SO2",
            Pollutant::O3 => "O3",
            Pollutant::Benzene => "Benzene",
            Pollutant::Toluene => "Toluene",
            Pollutant::Xylene => "Xylene",
        }
    }

    /// Case-insensitive lookup by column name (trimmed).
    pub fn from_column_name(name: &str) -> Option<Pollutant> {
        let name = name.trim();
        Pollutant::ALL
            .iter()
            .copied()
            .find(|p| p.column_name().eq_ignore_ascii_case(name))
    }
}

impl std::fmt::Display for Pollutant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.column_name())
    }
}

/// Addressable columns of the city-day schema, used to express
/// completeness requirements and column selections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    City,
    Date,
    Pollutant(Pollutant),
    Aqi,
    AqiBucket,
}

impl Column {
    /// The twelve pollutant columns.
    pub fn pollutants() -> Vec<Column> {
        Pollutant::ALL.iter().copied().map(Column::Pollutant).collect()
    }

    /// The twelve pollutant columns plus AQI.
    pub fn pollutants_and_aqi() -> Vec<Column> {
        let mut cols = Column::pollutants();
        cols.push(Column::Aqi);
        cols
    }

    /// The twelve pollutant columns plus the AQI bucket.
    pub fn pollutants_and_bucket() -> Vec<Column> {
        let mut cols = Column::pollutants();
        cols.push(Column::AqiBucket);
        cols
    }

    pub fn name(self) -> &'static str {
        match self {
            Column::City => "City",
            Column::Date => "Date",
            Column::Pollutant(p) => p.column_name(),
            Column::Aqi => "AQI",
            Column::AqiBucket => "AQI_Bucket",
        }
    }

    /// Numeric value of this column in a record, if the column is numeric
    /// and present.
    pub fn numeric_value(self, record: &CityDayRecord) -> Option<f64> {
        match self {
            Column::Pollutant(p) => record.pollutant(p),
            Column::Aqi => record.aqi,
            Column::City | Column::Date | Column::AqiBucket => None,
        }
    }
}

impl std::fmt::Display for Column {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The six CPCB AQI categories, ordered from cleanest to worst.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub enum AqiBucket {
    Good,
    Satisfactory,
    Moderate,
    Poor,
    VeryPoor,
    Severe,
}

impl AqiBucket {
    pub const ALL: [AqiBucket; 6] = [
        AqiBucket::Good,
        AqiBucket::Satisfactory,
        AqiBucket::Moderate,
        AqiBucket::Poor,
        AqiBucket::VeryPoor,
        AqiBucket::Severe,
    ];

    /// Canonical dataset string ("Good", "Satisfactory", ..., "Severe").
    pub fn canonical_name(self) -> &'static str {
        match self {
            AqiBucket::Good => "Good",
            AqiBucket::Satisfactory => "Satisfactory",
            AqiBucket::Moderate => "Moderate",
            AqiBucket::Poor => "Poor",
            AqiBucket::VeryPoor => "Very Poor",
            AqiBucket::Severe => "Severe",
        }
    }

    /// Case-insensitive parse of the canonical name (trimmed).
    pub fn from_name(name: &str) -> Option<AqiBucket> {
        let name = name.trim();
        AqiBucket::ALL
            .iter()
            .copied()
            .find(|b| b.canonical_name().eq_ignore_ascii_case(name))
    }

    /// Stable class index (0 = Good .. 5 = Severe), used as the
    /// classification label.
    pub fn class_index(self) -> usize {
        self as usize
    }

    pub fn from_class_index(idx: usize) -> Option<AqiBucket> {
        AqiBucket::ALL.get(idx).copied()
    }
}

impl std::fmt::Display for AqiBucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.canonical_name())
    }
}

/// One row of the city-day dataset: a city, a date, twelve pollutant
/// concentrations, and the precomputed AQI and bucket, all optional except
/// city and date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CityDayRecord {
    pub city: String,
    pub date: NaiveDate,
    pub pm2_5: Option<f64>,
    pub pm10: Option<f64>,
    pub no: Option<f64>,
    pub no2: Option<f64>,
    pub nox: Option<f64>,
    pub nh3: Option<f64>,
    pub co: Option<f64>,
    pub so2: Option<f64>,
    pub o3: Option<f64>,
    pub benzene: Option<f64>,
    pub toluene: Option<f64>,
    pub xylene: Option<f64>,
    pub aqi: Option<f64>,
    pub aqi_bucket: Option<AqiBucket>,
}

impl CityDayRecord {
    /// A record with the given city and date and every measurement absent.
    pub fn empty(city: impl Into<String>, date: NaiveDate) -> Self {
        CityDayRecord {
            city: city.into(),
            date,
            pm2_5: None,
            pm10: None,
            no: None,
            no2: None,
            nox: None,
            nh3: None,
            co: None,
            so2: None,
            o3: None,
            benzene: None,
            toluene: None,
            xylene: None,
            aqi: None,
            aqi_bucket: None,
        }
    }

    /// Concentration of one pollutant, if present.
    pub fn pollutant(&self, p: Pollutant) -> Option<f64> {
        match p {
            Pollutant::Pm25 => self.pm2_5,
            Pollutant::Pm10 => self.pm10,
            Pollutant::No => self.no,
            Pollutant::No2 => self.no2,
            Pollutant::Nox => self.nox,
            Pollutant::Nh3 => self.nh3,
            Pollutant::Co => self.co,
            Pollutant::So2 => self.so2,
            Pollutant::O3 => self.o3,
            Pollutant::Benzene => self.benzene,
            Pollutant::Toluene => self.toluene,
            Pollutant::Xylene => self.xylene,
        }
    }

    pub fn set_pollutant(&mut self, p: Pollutant, value: Option<f64>) {
        let slot = match p {
            Pollutant::Pm25 => &mut self.pm2_5,
            Pollutant::Pm10 => &mut self.pm10,
            Pollutant::No => &mut self.no,
            Pollutant::No2 => &mut self.no2,
            Pollutant::Nox => &mut self.nox,
            Pollutant::Nh3 => &mut self.nh3,
            Pollutant::Co => &mut self.co,
            Pollutant::So2 => &mut self.so2,
            Pollutant::O3 => &mut self.o3,
            Pollutant::Benzene => &mut self.benzene,
            Pollutant::Toluene => &mut self.toluene,
            Pollutant::Xylene => &mut self.xylene,
        };
        *slot = value;
    }

    /// True when the column holds a value in this record. City and date are
    /// always present.
    pub fn has(&self, column: Column) -> bool {
        match column {
            Column::City | Column::Date => true,
            Column::Pollutant(p) => self.pollutant(p).is_some(),
            Column::Aqi => self.aqi.is_some(),
            Column::AqiBucket => self.aqi_bucket.is_some(),
        }
    }
}
