//! aeropipe: an air-quality telemetry and analytics pipeline.
//!
//! The crate wires six subsystems around one shared data model:
//!
//! - [`model`] — domain types and the 15-column city-day dataset schema
//! - [`sensor`] — deterministic emulation of MQ135/MQ3 devices multiplexed
//!   onto a single ADC pin, with ppm calibration curves
//! - [`ingest`] — a ThingSpeak-style HTTP ingestion service with append-only
//!   channel persistence, CSV/JSON export, and a Blynk-style virtual-pin store
//! - [`aqi`] — CPCB sub-index breakpoints, overall AQI, and bucket bands
//! - [`ml`] — from-scratch regression/classification models, SMOTE, metrics,
//!   and the train/evaluate experiment pipeline
//! - [`insights`] — correlation, pollutant-group aggregates, city rankings,
//!   and AQI trend tables, emitted as tidy CSV/JSON
//!
//! Start with the runnable examples (`cargo run --example <name>`); the
//! `aeropipe` binary exposes the same functionality as subcommands.

pub mod aqi;
pub mod cli;
pub mod ingest;
pub mod insights;
pub mod ml;
pub mod model;
pub mod sensor;

pub use model::{AqiBucket, ChannelEntry, CityDayRecord, GasKind, Pollutant, SensorSample};
