//! CPCB Air Quality Index: per-pollutant sub-indices, the overall AQI, and
//! bucket bands.
//!
//! Sub-indices are piecewise-linear interpolations over breakpoint segments.
//! The national breakpoint table ships as a checked-in CSV
//! (`data/cpcb_breakpoints.csv`) rather than hard-coded constants, so it can
//! be audited or swapped. The overall AQI is the maximum of the available
//! sub-indices, valid only when at least three sub-indexed pollutants are
//! present and one of them is PM2.5 or PM10.
//!
//! The daily dataset values are used directly; no sub-daily averaging
//! windows are applied.

use std::collections::BTreeMap;
use std::io::Read;

use thiserror::Error;

use crate::model::{AqiBucket, CityDayRecord, Pollutant};

/// Breakpoint table embedded from `data/cpcb_breakpoints.csv`.
const CPCB_BREAKPOINTS_CSV: &str = include_str!("../../data/cpcb_breakpoints.csv");

#[derive(Debug, Error)]
pub enum AqiError {
    #[error("no sub-index defined for pollutant {0}")]
    NoSubIndex(Pollutant),
    #[error("negative concentration {1} for pollutant {0}")]
    NegativeConcentration(Pollutant, f64),
    #[error("breakpoint table row {row}: {message}")]
    BadTable { row: usize, message: String },
    #[error("breakpoint table: segments for {0} are not contiguous and increasing")]
    NonContiguous(Pollutant),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// One breakpoint segment: concentrations in [conc_low, conc_high] map
/// linearly onto [index_low, index_high].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub conc_low: f64,
    pub conc_high: f64,
    pub index_low: f64,
    pub index_high: f64,
}

/// Per-pollutant breakpoint segments, ordered and contiguous.
#[derive(Debug, Clone)]
pub struct BreakpointTable {
    segments: BTreeMap<Pollutant, Vec<Segment>>,
}

/// Result of an overall-AQI evaluation: the index and the pollutant whose
/// sub-index attained it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AqiValue {
    pub aqi: f64,
    pub dominant: Pollutant,
}

impl BreakpointTable {
    /// The CPCB national table bundled with the crate.
    pub fn cpcb() -> BreakpointTable {
        BreakpointTable::from_csv(CPCB_BREAKPOINTS_CSV.as_bytes())
            .expect("bundled breakpoint table is valid")
    }

    /// Load a table from CSV with columns
    /// `pollutant,conc_low,conc_high,index_low,index_high`.
    pub fn from_csv<R: Read>(reader: R) -> Result<BreakpointTable, AqiError> {
        let mut csv_reader = csv::Reader::from_reader(reader);
        let mut segments: BTreeMap<Pollutant, Vec<Segment>> = BTreeMap::new();
        for (i, row) in csv_reader.records().enumerate() {
            let row_number = i + 1;
            let record = row?;
            let field = |idx: usize| record.get(idx).unwrap_or("").trim().to_string();
            let pollutant = Pollutant::from_column_name(&field(0)).ok_or_else(|| {
                AqiError::BadTable {
                    row: row_number,
                    message: format!("unknown pollutant `{}`", field(0)),
                }
            })?;
            let number = |idx: usize| -> Result<f64, AqiError> {
                field(idx).parse().map_err(|_| AqiError::BadTable {
                    row: row_number,
                    message: format!("unparseable number `{}`", field(idx)),
                })
            };
            segments.entry(pollutant).or_default().push(Segment {
                conc_low: number(1)?,
                conc_high: number(2)?,
                index_low: number(3)?,
                index_high: number(4)?,
            });
        }
        let table = BreakpointTable { segments };
        table.validate()?;
        Ok(table)
    }

    pub fn from_path(path: &std::path::Path) -> Result<BreakpointTable, AqiError> {
        let file = std::fs::File::open(path).map_err(|e| AqiError::BadTable {
            row: 0,
            message: format!("cannot open {}: {e}", path.display()),
        })?;
        BreakpointTable::from_csv(file)
    }

    fn validate(&self) -> Result<(), AqiError> {
        for (pollutant, segs) in &self.segments {
            if segs.is_empty() {
                return Err(AqiError::NonContiguous(*pollutant));
            }
            if segs[0].conc_low != 0.0 {
                return Err(AqiError::NonContiguous(*pollutant));
            }
            for pair in segs.windows(2) {
                let ok = pair[0].conc_high == pair[1].conc_low
                    && pair[0].index_high == pair[1].index_low;
                if !ok {
                    return Err(AqiError::NonContiguous(*pollutant));
                }
            }
            for s in segs {
                if s.conc_high <= s.conc_low || s.index_high < s.index_low {
                    return Err(AqiError::NonContiguous(*pollutant));
                }
            }
        }
        Ok(())
    }

    /// Pollutants this table defines a sub-index for.
    pub fn tabled_pollutants(&self) -> impl Iterator<Item = Pollutant> + '_ {
        self.segments.keys().copied()
    }

    pub fn segments(&self, pollutant: Pollutant) -> Option<&[Segment]> {
        self.segments.get(&pollutant).map(|v| v.as_slice())
    }

    /// Sub-index of one pollutant concentration.
    ///
    /// Concentrations above the top segment clamp to the table maximum;
    /// pollutants without a table (NO, NOx, benzene, toluene, xylene) are an
    /// error.
    pub fn sub_index(&self, pollutant: Pollutant, concentration: f64) -> Result<f64, AqiError> {
        if concentration < 0.0 {
            return Err(AqiError::NegativeConcentration(pollutant, concentration));
        }
        let segments = self
            .segments
            .get(&pollutant)
            .ok_or(AqiError::NoSubIndex(pollutant))?;
        let top = segments.last().expect("validated non-empty");
        if concentration >= top.conc_high {
            return Ok(top.index_high);
        }
        let segment = segments
            .iter()
            .find(|s| concentration <= s.conc_high)
            .expect("contiguous segments cover [0, top)");
        let span = segment.conc_high - segment.conc_low;
        Ok(segment.index_low
            + (segment.index_high - segment.index_low) * (concentration - segment.conc_low) / span)
    }

    /// Overall AQI of a record: the maximum over available sub-indices.
    ///
    /// Returns `None` ("insufficient data") unless at least three tabled
    /// pollutants are present and one of them is PM2.5 or PM10. Among equal
    /// maxima the earlier pollutant in schema order is reported as dominant.
    pub fn overall_aqi(&self, record: &CityDayRecord) -> Option<AqiValue> {
        let mut available = 0usize;
        let mut has_pm = false;
        let mut best: Option<AqiValue> = None;
        for p in Pollutant::ALL {
            if !self.segments.contains_key(&p) {
                continue;
            }
            let Some(concentration) = record.pollutant(p) else {
                continue;
            };
            let sub = self
                .sub_index(p, concentration)
                .expect("tabled pollutant with non-negative concentration");
            available += 1;
            if matches!(p, Pollutant::Pm25 | Pollutant::Pm10) {
                has_pm = true;
            }
            let better = match best {
                None => true,
                Some(b) => sub > b.aqi,
            };
            if better {
                best = Some(AqiValue {
                    aqi: sub,
                    dominant: p,
                });
            }
        }
        if available >= 3 && has_pm {
            best
        } else {
            None
        }
    }
}

/// CPCB band of a (non-negative) AQI value. Bands are applied to the
/// rounded index: 0–50 Good, 51–100 Satisfactory, 101–200 Moderate,
/// 201–300 Poor, 301–400 Very Poor, above 400 Severe.
pub fn bucket(aqi: f64) -> AqiBucket {
    let rounded = aqi.round();
    if rounded <= 50.0 {
        AqiBucket::Good
    } else if rounded <= 100.0 {
        AqiBucket::Satisfactory
    } else if rounded <= 200.0 {
        AqiBucket::Moderate
    } else if rounded <= 300.0 {
        AqiBucket::Poor
    } else if rounded <= 400.0 {
        AqiBucket::VeryPoor
    } else {
        AqiBucket::Severe
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;
    use proptest::prelude::*;
    use rand::{Rng, RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent brute-force interpolation oracle, written before the
    /// engine: walks the raw CSV rows linearly and interpolates in the first
    /// row whose range contains the concentration.
    pub(crate) fn oracle_sub_index(pollutant: Pollutant, concentration: f64) -> Option<f64> {
        let mut rows: Vec<(f64, f64, f64, f64)> = Vec::new();
        for line in CPCB_BREAKPOINTS_CSV.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 5 {
                continue;
            }
            if !cells[0].eq_ignore_ascii_case(pollutant.column_name()) {
                continue;
            }
            rows.push((
                cells[1].parse().unwrap(),
                cells[2].parse().unwrap(),
                cells[3].parse().unwrap(),
                cells[4].parse().unwrap(),
            ));
        }
        if rows.is_empty() {
            return None;
        }
        let (_, top_high, _, top_index) = *rows.last().unwrap();
        if concentration >= top_high {
            return Some(top_index);
        }
        for (c_lo, c_hi, i_lo, i_hi) in rows {
            if concentration >= c_lo && concentration <= c_hi {
                return Some(i_lo + (i_hi - i_lo) * (concentration - c_lo) / (c_hi - c_lo));
            }
        }
        None
    }

    fn tabled() -> Vec<Pollutant> {
        BreakpointTable::cpcb().tabled_pollutants().collect()
    }

    #[test]
    fn zero_concentration_gives_zero_sub_index() {
        let table = BreakpointTable::cpcb();
        for p in tabled() {
            assert_eq!(table.sub_index(p, 0.0).unwrap(), 0.0, "{p}");
        }
    }

    #[test]
    fn segment_boundaries_map_to_their_index_bounds() {
        let table = BreakpointTable::cpcb();
        for p in tabled() {
            for s in table.segments(p).unwrap() {
                assert_eq!(table.sub_index(p, s.conc_low).unwrap(), s.index_low, "{p}");
                assert_eq!(table.sub_index(p, s.conc_high).unwrap(), s.index_high, "{p}");
            }
        }
    }

    #[test]
    fn untabled_pollutants_are_errors() {
        let table = BreakpointTable::cpcb();
        for p in [
            Pollutant::No,
            Pollutant::Nox,
            Pollutant::Benzene,
            Pollutant::Toluene,
            Pollutant::Xylene,
        ] {
            assert!(matches!(
                table.sub_index(p, 10.0),
                Err(AqiError::NoSubIndex(q)) if q == p
            ));
        }
    }

    #[test]
    fn random_pairs_match_brute_force_oracle() {
        let table = BreakpointTable::cpcb();
        let pollutants = tabled();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let p = pollutants[(rng.next_u64() % pollutants.len() as u64) as usize];
            let c: f64 = rng.random_range(0.0..3000.0);
            let expected = oracle_sub_index(p, c).unwrap();
            let actual = table.sub_index(p, c).unwrap();
            assert!(
                (actual - expected).abs() < 1e-9,
                "{p} at {c}: {actual} vs oracle {expected}"
            );
        }
    }

    #[test]
    fn clamps_above_top_segment() {
        let table = BreakpointTable::cpcb();
        for p in tabled() {
            let top = table.segments(p).unwrap().last().unwrap().conc_high;
            let at_top = table.sub_index(p, top).unwrap();
            for factor in [1.0, 1.5, 10.0, 1000.0] {
                assert_eq!(table.sub_index(p, top * factor).unwrap(), at_top, "{p}");
            }
        }
    }

    fn record_with(values: &[(Pollutant, f64)]) -> CityDayRecord {
        let date = NaiveDate::from_ymd_opt(2018, 1, 1).unwrap();
        let mut record = CityDayRecord::empty("X", date);
        for (p, v) in values {
            record.set_pollutant(*p, Some(*v));
        }
        record
    }

    #[test]
    fn overall_aqi_zero_when_all_tabled_pollutants_zero() {
        let table = BreakpointTable::cpcb();
        let values: Vec<_> = tabled().into_iter().map(|p| (p, 0.0)).collect();
        let result = table.overall_aqi(&record_with(&values)).unwrap();
        assert_eq!(result.aqi, 0.0);
    }

    #[test]
    fn overall_aqi_requires_three_pollutants_with_pm() {
        let table = BreakpointTable::cpcb();
        // only PM2.5 present -> insufficient
        assert!(table.overall_aqi(&record_with(&[(Pollutant::Pm25, 80.0)])).is_none());
        // three present but no PM -> insufficient
        let no_pm = record_with(&[
            (Pollutant::No2, 50.0),
            (Pollutant::So2, 30.0),
            (Pollutant::Co, 1.0),
        ]);
        assert!(table.overall_aqi(&no_pm).is_none());
        // three present including PM -> defined
        let with_pm = record_with(&[
            (Pollutant::Pm25, 80.0),
            (Pollutant::So2, 30.0),
            (Pollutant::Co, 1.0),
        ]);
        let value = table.overall_aqi(&with_pm).unwrap();
        assert_eq!(value.dominant, Pollutant::Pm25);
        assert!((value.aqi - table.sub_index(Pollutant::Pm25, 80.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn overall_aqi_is_max_of_oracle_checked_sub_indices() {
        let table = BreakpointTable::cpcb();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let values: Vec<(Pollutant, f64)> = tabled()
                .into_iter()
                .map(|p| (p, rng.random_range(0.0..1500.0)))
                .collect();
            let record = record_with(&values);
            let expected = values
                .iter()
                .map(|(p, c)| oracle_sub_index(*p, *c).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            let actual = table.overall_aqi(&record).unwrap().aqi;
            assert!((actual - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn bucket_bands() {
        assert_eq!(bucket(0.0), AqiBucket::Good);
        assert_eq!(bucket(50.4), AqiBucket::Good);
        assert_eq!(bucket(50.6), AqiBucket::Satisfactory);
        assert_eq!(bucket(100.0), AqiBucket::Satisfactory);
        assert_eq!(bucket(150.0), AqiBucket::Moderate);
        assert_eq!(bucket(250.0), AqiBucket::Poor);
        assert_eq!(bucket(400.0), AqiBucket::VeryPoor);
        assert_eq!(bucket(401.0), AqiBucket::Severe);
        assert_eq!(bucket(2100.0), AqiBucket::Severe);
    }

    proptest! {
        // sub_index is non-decreasing and continuous in concentration
        #[test]
        fn sub_index_monotone_and_continuous(
            which in 0usize..7,
            base in 0.0..2500.0f64,
            step in 0.0..50.0f64,
        ) {
            let table = BreakpointTable::cpcb();
            let pollutants = tabled();
            let p = pollutants[which % pollutants.len()];
            let lo = table.sub_index(p, base).unwrap();
            let hi = table.sub_index(p, base + step).unwrap();
            prop_assert!(hi >= lo);
            // continuity: small concentration steps move the index a little
            let nudged = table.sub_index(p, base + 1e-9).unwrap();
            prop_assert!((nudged - lo).abs() < 1e-5);
        }

        // bucket(overall_aqi) is invariant under pollutant evaluation order;
        // exercised by shuffling which pollutants carry values
        #[test]
        fn overall_aqi_order_invariant(seed in 0u64..1000) {
            let table = BreakpointTable::cpcb();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut values: Vec<(Pollutant, f64)> = tabled()
                .into_iter()
                .map(|p| (p, rng.random_range(0.0..800.0)))
                .collect();
            let forward = table.overall_aqi(&record_with(&values));
            values.reverse();
            let reversed = table.overall_aqi(&record_with(&values));
            prop_assert_eq!(forward, reversed);
        }
    }
}
