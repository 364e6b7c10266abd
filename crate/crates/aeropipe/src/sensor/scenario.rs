//! Piecewise-linear gas concentration timelines that drive the simulator.

use serde::{Deserialize, Serialize};

use crate::model::GasKind;

use super::SensorError;

/// Concentration timeline for one gas: `(offset_seconds, ppm)` knots with
/// strictly increasing offsets. Between knots the concentration is linear;
/// before the first knot it holds the first value, after the last knot the
/// last value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timeline {
    knots: Vec<(f64, f64)>,
}

impl Timeline {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Timeline, SensorError> {
        if knots.is_empty() {
            return Err(SensorError::BadScenario("timeline has no knots".into()));
        }
        for pair in knots.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(SensorError::BadScenario(format!(
                    "knot offsets must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        for &(offset, ppm) in &knots {
            if !(offset.is_finite() && ppm.is_finite()) || ppm < 0.0 {
                return Err(SensorError::BadScenario(format!(
                    "bad knot ({offset}, {ppm}): offsets finite, ppm >= 0"
                )));
            }
        }
        Ok(Timeline { knots })
    }

    /// Constant concentration at all times.
    pub fn constant(ppm: f64) -> Timeline {
        Timeline::new(vec![(0.0, ppm)]).expect("single non-negative knot")
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Concentration at a point in scenario time.
    pub fn ppm_at(&self, t_seconds: f64) -> f64 {
        let first = self.knots[0];
        if t_seconds <= first.0 {
            return first.1;
        }
        let last = self.knots[self.knots.len() - 1];
        if t_seconds >= last.0 {
            return last.1;
        }
        let idx = self
            .knots
            .partition_point(|&(offset, _)| offset <= t_seconds);
        let (t0, v0) = self.knots[idx - 1];
        let (t1, v1) = self.knots[idx];
        v0 + (v1 - v0) * (t_seconds - t0) / (t1 - t0)
    }
}

/// One timeline per gas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasScenario {
    pub mq135: Timeline,
    pub mq3: Timeline,
}

impl GasScenario {
    pub fn constant(mq135_ppm: f64, mq3_ppm: f64) -> GasScenario {
        GasScenario {
            mq135: Timeline::constant(mq135_ppm),
            mq3: Timeline::constant(mq3_ppm),
        }
    }

    pub fn timeline(&self, gas: GasKind) -> &Timeline {
        match gas {
            GasKind::Mq135Air => &self.mq135,
            GasKind::Mq3Alcohol => &self.mq3,
        }
    }

    pub fn ppm_at(&self, gas: GasKind, t_seconds: f64) -> f64 {
        self.timeline(gas).ppm_at(t_seconds)
    }
}
