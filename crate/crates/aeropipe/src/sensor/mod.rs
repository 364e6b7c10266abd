//! Deterministic emulation of the NodeMCU firmware loop: two MQ sensors
//! multiplexed onto one analog pin, timer-driven sampling, six-read
//! averaging, and ppm conversion.
//!
//! Concentration follows the standard MQ-series log-log power law
//! `ppm = a * (Rs/R0)^b`, with the sensor resistance recovered from the
//! 10-bit ADC reading through the load-resistor voltage divider. Curve
//! constants live in configuration (`data/sensor_curves.toml`), not code.
//!
//! Time is driven by a virtual clock, never the wall clock, so simulations
//! are instant and bit-reproducible under a fixed seed.

mod device;
mod scenario;

pub use device::{
    run_device_loop, LoopReport, MemorySink, NoiseModel, SamplePair, SampleSink, SinkError,
    VirtualDevice,
};
pub use scenario::{GasScenario, Timeline};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::GasKind;

const DEFAULT_CURVES_TOML: &str = include_str!("../../data/sensor_curves.toml");

/// Full ADC scale of the 10-bit converter.
pub const ADC_MAX: f64 = 1023.0;

#[derive(Debug, Error)]
pub enum SensorError {
    #[error("adc saturated on channel {channel} ({gas}): {counts} counts")]
    Saturated {
        channel: u8,
        gas: GasKind,
        counts: f64,
    },
    #[error("invalid sensor curve: {0}")]
    BadCurve(String),
    #[error("invalid scenario: {0}")]
    BadScenario(String),
}

/// Power-law calibration curve of one MQ sensor plus its divider circuit.
///
/// `a` scales the curve, `b` is the (negative) log-log slope, `r0_ohms` the
/// clean-air resistance, `rl_ohms` the load resistance, `vcc` the supply
/// voltage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorCurve {
    pub a: f64,
    pub b: f64,
    pub r0_ohms: f64,
    pub rl_ohms: f64,
    pub vcc: f64,
}

#[derive(Deserialize)]
struct CurvesFile {
    mq135: SensorCurve,
    mq3: SensorCurve,
}

impl SensorCurve {
    pub fn new(a: f64, b: f64, r0_ohms: f64, rl_ohms: f64, vcc: f64) -> Result<Self, SensorError> {
        let curve = SensorCurve {
            a,
            b,
            r0_ohms,
            rl_ohms,
            vcc,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<(), SensorError> {
        if !(self.a > 0.0) {
            return Err(SensorError::BadCurve(format!("a must be > 0, got {}", self.a)));
        }
        if !(self.b < 0.0) {
            return Err(SensorError::BadCurve(format!("b must be < 0, got {}", self.b)));
        }
        if !(self.r0_ohms > 0.0) {
            return Err(SensorError::BadCurve(format!(
                "r0_ohms must be > 0, got {}",
                self.r0_ohms
            )));
        }
        if !(self.rl_ohms > 0.0) {
            return Err(SensorError::BadCurve(format!(
                "rl_ohms must be > 0, got {}",
                self.rl_ohms
            )));
        }
        if !(self.vcc > 0.0) {
            return Err(SensorError::BadCurve(format!(
                "vcc must be > 0, got {}",
                self.vcc
            )));
        }
        Ok(())
    }

    /// Bundled default curve for a gas kind.
    pub fn default_for(gas: GasKind) -> SensorCurve {
        let file: CurvesFile =
            toml::from_str(DEFAULT_CURVES_TOML).expect("bundled curve file is valid");
        match gas {
            GasKind::Mq135Air => file.mq135,
            GasKind::Mq3Alcohol => file.mq3,
        }
    }
}

/// Ideal (noise-free) real-valued counts for a concentration, before
/// rounding and clamping.
fn ideal_counts(curve: &SensorCurve, true_ppm: f64) -> f64 {
    // ppm = a * (Rs/R0)^b  =>  Rs = R0 * (ppm/a)^(1/b)
    let rs = curve.r0_ohms * (true_ppm / curve.a).powf(1.0 / curve.b);
    let vout = curve.vcc * curve.rl_ohms / (curve.rl_ohms + rs);
    ADC_MAX * vout / curve.vcc
}

/// Simulated ADC reading for a true concentration: round the ideal counts,
/// add the noise draw, clamp to [1, 1022]. Clamping absorbs extremes, so
/// this never fails; a zero concentration pegs the reading at the floor.
pub fn ppm_to_counts(curve: &SensorCurve, true_ppm: f64, noise_draw: f64) -> f64 {
    let counts = ideal_counts(curve, true_ppm).round() + noise_draw;
    counts.clamp(1.0, 1022.0)
}

/// Concentration recovered from an ADC reading (integer or averaged real).
///
/// Readings at or beyond the rails (≤ 0 or ≥ 1023) are saturation errors:
/// the divider equation degenerates there.
pub fn counts_to_ppm(curve: &SensorCurve, gas: GasKind, counts: f64) -> Result<f64, SensorError> {
    if counts <= 0.0 || counts >= ADC_MAX {
        return Err(SensorError::Saturated {
            channel: gas.mux_channel(),
            gas,
            counts,
        });
    }
    let vout = curve.vcc * counts / ADC_MAX;
    let rs = curve.rl_ohms * (curve.vcc - vout) / vout;
    Ok(curve.a * (rs / curve.r0_ohms).powf(curve.b))
}
