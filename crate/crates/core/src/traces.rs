//! Hour-wise solar and load traces: file ingest, gap cleaning, and a
//! seeded synthetic generator for when no measured data is available.
//!
//! Trace files are plain CSV with the header
//! `hour,bs1_solar,...,bsN_solar,bs1_load,...,bsN_load`, one row per hour
//! and missing values encoded as empty fields. The writer and reader are
//! byte-exact inverses for complete bundles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{SimulationConfig, HOURS_PER_DAY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceKind {
    SolarHarvest,
    Load,
}

/// One station's hour-wise series over the whole horizon, in Wh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyTrace {
    pub bs_id: usize,
    pub kind: TraceKind,
    pub values: Vec<f64>,
}

/// Exactly one solar and one load trace per station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceBundle {
    pub solar: Vec<HourlyTrace>,
    pub load: Vec<HourlyTrace>,
}

impl TraceBundle {
    pub fn n(&self) -> usize {
        self.solar.len()
    }

    pub fn horizon_hours(&self) -> usize {
        self.solar.first().map(|t| t.values.len()).unwrap_or(0)
    }

    pub fn validate(&self, n: usize, horizon_hours: usize) -> Result<()> {
        if self.solar.len() != n || self.load.len() != n {
            return Err(Error::TraceShape(format!(
                "expected {n} solar and {n} load traces, found {} and {}",
                self.solar.len(),
                self.load.len()
            )));
        }
        for (idx, trace) in self.solar.iter().chain(self.load.iter()).enumerate() {
            if trace.values.len() != horizon_hours {
                return Err(Error::TraceShape(format!(
                    "trace {idx} has {} hours, expected {horizon_hours}",
                    trace.values.len()
                )));
            }
            if let Some(v) = trace.values.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::TraceShape(format!(
                    "trace for BS {} contains invalid value {v}",
                    trace.bs_id
                )));
            }
        }
        Ok(())
    }
}

/// Fill gaps and clamp a raw hourly series with the default window-3
/// smoother. See [`clean_trace_with_window`].
pub fn clean_trace(raw: &[Option<f64>]) -> Result<Vec<f64>> {
    clean_trace_with_window(raw, 3)
}

/// Fill gaps and clamp a raw hourly series.
///
/// Missing entries are replaced by linear interpolation between the nearest
/// present neighbours (gaps at either edge copy the nearest present value).
/// When at least one gap was filled, a centred moving average of the given
/// odd `window`, with replicated edge samples, is applied on top. Fully
/// present input is already considered clean and passes through unchanged,
/// which makes the operation idempotent. Output is clamped non-negative.
pub fn clean_trace_with_window(raw: &[Option<f64>], window: usize) -> Result<Vec<f64>> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "smoothing window must be odd and positive, got {window}"
        )));
    }
    let present = raw.iter().flatten().count();
    if present < 2 {
        return Err(Error::InsufficientTraceData(present));
    }
    if raw.iter().all(Option::is_some) {
        return Ok(raw.iter().map(|v| v.unwrap().max(0.0)).collect());
    }

    let filled = interpolate_gaps(raw);
    let len = filled.len();
    let half = (window / 2) as isize;
    let smoothed: Vec<f64> = (0..len as isize)
        .map(|t| {
            let sum: f64 = (t - half..=t + half)
                .map(|k| filled[k.clamp(0, len as isize - 1) as usize])
                .sum();
            (sum / window as f64).max(0.0)
        })
        .collect();
    Ok(smoothed)
}

fn interpolate_gaps(raw: &[Option<f64>]) -> Vec<f64> {
    let present: Vec<(usize, f64)> =
        raw.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).collect();
    let (first_idx, first_val) = present[0];
    let (last_idx, last_val) = *present.last().unwrap();

    let mut out = vec![0.0; raw.len()];
    for (i, slot) in raw.iter().enumerate() {
        out[i] = match slot {
            Some(v) => *v,
            None if i < first_idx => first_val,
            None if i > last_idx => last_val,
            None => {
                let right = present.partition_point(|(p, _)| *p < i);
                let (hi_i, hi_v) = present[right];
                let (lo_i, lo_v) = present[right - 1];
                let t = (i - lo_i) as f64 / (hi_i - lo_i) as f64;
                lo_v + t * (hi_v - lo_v)
            }
        };
    }
    out
}

fn header_for(n: usize) -> String {
    let mut h = String::from("hour");
    for i in 1..=n {
        h.push_str(&format!(",bs{i}_solar"));
    }
    for i in 1..=n {
        h.push_str(&format!(",bs{i}_load"));
    }
    h
}

/// Write a complete bundle in the trace file format.
pub fn write_trace_file<W: Write>(mut w: W, bundle: &TraceBundle) -> std::io::Result<()> {
    let n = bundle.n();
    let hours = bundle.horizon_hours();
    writeln!(w, "{}", header_for(n))?;
    for t in 0..hours {
        let mut line = t.to_string();
        for trace in bundle.solar.iter().chain(bundle.load.iter()) {
            line.push(',');
            line.push_str(&trace.values[t].to_string());
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_traces_to_path<P: AsRef<Path>>(path: P, bundle: &TraceBundle) -> Result<()> {
    let file = File::create(path)?;
    write_trace_file(BufWriter::new(file), bundle)?;
    Ok(())
}

/// Read, clean and shape-check a trace file.
///
/// The file must carry at least `horizon_hours` rows; extra rows are
/// dropped. Missing cells (empty fields) are filled via [`clean_trace`].
pub fn read_trace_file<R: BufRead>(reader: R, n: usize, horizon_hours: usize) -> Result<TraceBundle> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(Error::TraceShape("empty trace file".into())),
    };
    let expected_header = header_for(n);
    if header.trim_end() != expected_header {
        let found_cols = header.split(',').count();
        return Err(Error::TraceShape(format!(
            "header does not match {n} stations ({} data columns found, {} expected)",
            found_cols.saturating_sub(1),
            2 * n
        )));
    }

    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(horizon_hours); 2 * n];
    let mut rows = 0usize;
    for (line_no, line) in lines {
        if rows == horizon_hours {
            break;
        }
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 * n + 1 {
            return Err(Error::TraceParse {
                line: line_no + 1,
                msg: format!("expected {} fields, found {}", 2 * n + 1, fields.len()),
            });
        }
        let hour: usize = fields[0].trim().parse().map_err(|_| Error::TraceParse {
            line: line_no + 1,
            msg: format!("bad hour index '{}'", fields[0]),
        })?;
        if hour != rows {
            return Err(Error::TraceParse {
                line: line_no + 1,
                msg: format!("hour {hour} out of order, expected {rows}"),
            });
        }
        for (col, field) in fields[1..].iter().enumerate() {
            let field = field.trim();
            if field.is_empty() {
                columns[col].push(None);
            } else {
                let v: f64 = field.parse().map_err(|_| Error::TraceParse {
                    line: line_no + 1,
                    msg: format!("bad number '{field}'"),
                })?;
                columns[col].push(Some(v));
            }
        }
        rows += 1;
    }
    if rows < horizon_hours {
        return Err(Error::TraceShape(format!(
            "file has {rows} hour rows, need {horizon_hours}"
        )));
    }

    let mut bundle = TraceBundle { solar: Vec::with_capacity(n), load: Vec::with_capacity(n) };
    for (bs, column) in columns[..n].iter().enumerate() {
        bundle.solar.push(HourlyTrace {
            bs_id: bs,
            kind: TraceKind::SolarHarvest,
            values: clean_trace(column)?,
        });
    }
    for (bs, column) in columns[n..].iter().enumerate() {
        bundle.load.push(HourlyTrace {
            bs_id: bs,
            kind: TraceKind::Load,
            values: clean_trace(column)?,
        });
    }
    Ok(bundle)
}

/// Open and ingest a trace file from disk.
pub fn ingest_traces<P: AsRef<Path>>(path: P, n: usize, horizon_hours: usize) -> Result<TraceBundle> {
    let file = File::open(path)?;
    read_trace_file(BufReader::new(file), n, horizon_hours)
}

/// Shape parameters for the synthetic generator.
///
/// Solar follows a truncated sinusoid between `sunrise_hour` and
/// `sunset_hour`, modulated by a per-station daily weather factor (clear
/// days sit near 1, cloudy days crush output) and hourly multiplicative
/// noise. Load follows the 24-entry two-peak template scaled per station.
/// When `solar_to_load_ratio` is positive each station's yearly solar sum
/// is rescaled to exactly that fraction of its yearly load, so deficits
/// occur at a controlled rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthProfile {
    pub sunrise_hour: usize,
    pub sunset_hour: usize,
    pub solar_peak_wh: f64,
    pub solar_to_load_ratio: f64,
    pub load_day_shape: Vec<f64>,
    pub bs_scale_spread: f64,
    pub load_noise: f64,
    pub solar_noise: f64,
    pub cloudy_day_prob: f64,
    pub cloudy_factor_min: f64,
    pub cloudy_factor_max: f64,
    pub clear_day_jitter: f64,
}

impl Default for SynthProfile {
    fn default() -> Self {
        SynthProfile {
            sunrise_hour: 6,
            sunset_hour: 18,
            solar_peak_wh: 45.0,
            solar_to_load_ratio: 0.95,
            // Two demand peaks (mid-morning, evening) over a small night base.
            load_day_shape: vec![
                5.0, 4.0, 4.0, 4.0, 4.0, 5.0, // 00-05
                16.0, 21.0, 24.0, 25.0, 25.0, 23.0, // 06-11
                22.0, 22.0, 22.0, 23.0, 25.0, 25.0, // 12-17
                24.0, 23.0, // 18-19
                14.0, 9.0, 7.0, 5.0, // 20-23
            ],
            bs_scale_spread: 0.06,
            load_noise: 0.04,
            solar_noise: 0.05,
            cloudy_day_prob: 0.22,
            cloudy_factor_min: 0.0,
            cloudy_factor_max: 0.40,
            clear_day_jitter: 0.06,
        }
    }
}

impl SynthProfile {
    fn solar_shape(&self, hour_of_day: usize) -> f64 {
        if hour_of_day <= self.sunrise_hour || hour_of_day >= self.sunset_hour {
            return 0.0;
        }
        let span = (self.sunset_hour - self.sunrise_hour) as f64;
        let x = (hour_of_day - self.sunrise_hour) as f64 / span;
        (std::f64::consts::PI * x).sin()
    }
}

/// Generate a deterministic year of per-station traces from the config seed.
pub fn synth_traces(config: &SimulationConfig, profile: &SynthProfile) -> TraceBundle {
    let n = config.n;
    let hours = config.horizon_hours;
    let days = hours.div_ceil(HOURS_PER_DAY);

    // Station scale factors come from their own stream so that changing the
    // horizon never reshuffles them.
    let mut scale_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    scale_rng.set_stream(0);
    let scales: Vec<f64> = (0..n)
        .map(|_| 1.0 + profile.bs_scale_spread * scale_rng.random_range(-1.0..=1.0))
        .collect();

    let mut bundle = TraceBundle { solar: Vec::with_capacity(n), load: Vec::with_capacity(n) };
    for (bs, scale) in scales.iter().copied().enumerate() {
        let mut load_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        load_rng.set_stream(1 + 2 * bs as u64);
        let mut solar_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        solar_rng.set_stream(2 + 2 * bs as u64);

        let load_values: Vec<f64> = (0..hours)
            .map(|t| {
                let shape = profile.load_day_shape[t % HOURS_PER_DAY];
                let noise = 1.0 + profile.load_noise * load_rng.random_range(-1.0..=1.0);
                (shape * scale * noise).max(0.0)
            })
            .collect();

        let weather: Vec<f64> = (0..days)
            .map(|_| {
                if solar_rng.random_bool(profile.cloudy_day_prob) {
                    solar_rng.random_range(profile.cloudy_factor_min..=profile.cloudy_factor_max)
                } else {
                    1.0 - solar_rng.random_range(0.0..=profile.clear_day_jitter)
                }
            })
            .collect();
        let mut solar_values: Vec<f64> = (0..hours)
            .map(|t| {
                let shape = profile.solar_shape(t % HOURS_PER_DAY);
                let noise = 1.0 + profile.solar_noise * solar_rng.random_range(-1.0..=1.0);
                (profile.solar_peak_wh * shape * weather[t / HOURS_PER_DAY] * noise).max(0.0)
            })
            .collect();

        // Pin the yearly solar-to-load ratio exactly; the weather mix then
        // controls when the deficit lands rather than how big it is.
        if profile.solar_to_load_ratio > 0.0 {
            let load_sum: f64 = load_values.iter().sum();
            let solar_sum: f64 = solar_values.iter().sum();
            if solar_sum > 0.0 && load_sum > 0.0 {
                let k = profile.solar_to_load_ratio * load_sum / solar_sum;
                for v in &mut solar_values {
                    *v *= k;
                }
            }
        }

        bundle.solar.push(HourlyTrace {
            bs_id: bs,
            kind: TraceKind::SolarHarvest,
            values: solar_values,
        });
        bundle.load.push(HourlyTrace { bs_id: bs, kind: TraceKind::Load, values: load_values });
    }
    bundle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SimulationConfig;

    #[test]
    fn gap_is_interpolated_then_smoothed() {
        let cleaned = clean_trace(&[Some(4.0), None, Some(8.0)]).unwrap();
        // Interpolation gives [4, 6, 8]; window-3 smoothing with replicated
        // edges gives [14/3, 6, 22/3].
        assert!((cleaned[0] - 14.0 / 3.0).abs() < 1e-12);
        assert!((cleaned[1] - 6.0).abs() < 1e-12);
        assert!((cleaned[2] - 22.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_vector_is_a_fixed_point() {
        let raw: Vec<Option<f64>> = vec![Some(3.5); 10];
        assert_eq!(clean_trace(&raw).unwrap(), vec![3.5; 10]);
        // Still constant when a gap forces the smoother to run.
        let mut gappy = raw.clone();
        gappy[4] = None;
        assert_eq!(clean_trace(&gappy).unwrap(), vec![3.5; 10]);
    }

    #[test]
    fn fewer_than_two_present_values_is_an_error() {
        assert!(matches!(
            clean_trace(&[None, None]),
            Err(Error::InsufficientTraceData(0))
        ));
        assert!(matches!(
            clean_trace(&[None, Some(1.0)]),
            Err(Error::InsufficientTraceData(1))
        ));
    }

    #[test]
    fn edge_gaps_copy_nearest_value() {
        let cleaned = clean_trace(&[None, Some(6.0), Some(6.0), None]).unwrap();
        assert_eq!(cleaned, vec![6.0; 4]);
    }

    #[test]
    fn window_must_be_odd() {
        let raw = [Some(1.0), None, Some(3.0)];
        assert!(matches!(clean_trace_with_window(&raw, 2), Err(Error::InvalidConfig(_))));
        assert!(matches!(clean_trace_with_window(&raw, 0), Err(Error::InvalidConfig(_))));
        // Window 1 smoothing is the bare interpolation.
        assert_eq!(clean_trace_with_window(&raw, 1).unwrap(), vec![1.0, 2.0, 3.0]);
        // A window spanning the whole series averages everything.
        let wide = clean_trace_with_window(&raw, 5).unwrap();
        assert!((wide[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cleaning_fully_present_input_is_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let raw: Vec<Option<f64>> =
                (0..24).map(|_| Some(rng.random_range(0.0..50.0))).collect();
            let once = clean_trace(&raw).unwrap();
            let twice = clean_trace(&once.iter().copied().map(Some).collect::<Vec<_>>()).unwrap();
            assert_eq!(once, twice);
            assert_eq!(once, raw.iter().map(|v| v.unwrap()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn ingest_fills_missing_cell_by_interpolation() {
        // Linear column with one hole: interior values survive smoothing,
        // edges pick up the replicated-edge average.
        let csv = "hour,bs1_solar,bs1_load\n\
                   0,2,1\n\
                   1,4,1\n\
                   2,,1\n\
                   3,8,1\n\
                   4,10,1\n";
        let bundle = read_trace_file(csv.as_bytes(), 1, 5).unwrap();
        let solar = &bundle.solar[0].values;
        assert!((solar[0] - 8.0 / 3.0).abs() < 1e-12);
        assert!((solar[1] - 4.0).abs() < 1e-12);
        assert!((solar[2] - 6.0).abs() < 1e-12); // the filled cell
        assert!((solar[3] - 8.0).abs() < 1e-12);
        assert!((solar[4] - 28.0 / 3.0).abs() < 1e-12);
        // Fully present load column passes through untouched.
        assert_eq!(bundle.load[0].values, vec![1.0; 5]);
    }

    #[test]
    fn wrong_station_count_is_a_shape_error() {
        let csv = "hour,bs1_solar,bs2_solar,bs1_load,bs2_load\n0,1,1,1,1\n";
        let err = read_trace_file(csv.as_bytes(), 5, 1).unwrap_err();
        assert!(matches!(err, Error::TraceShape(_)), "{err}");
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let csv = "hour,bs1_solar,bs1_load\n0,1,1\n1,abc,1\n";
        match read_trace_file(csv.as_bytes(), 1, 2) {
            Err(Error::TraceParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    fn small_config(seed: u64) -> SimulationConfig {
        SimulationConfig { n: 3, horizon_hours: 24 * 30, rng_seed: seed, ..Default::default() }
    }

    #[test]
    fn synth_is_deterministic_per_seed() {
        let profile = SynthProfile::default();
        let a = synth_traces(&small_config(42), &profile);
        let b = synth_traces(&small_config(42), &profile);
        assert_eq!(a, b);
        let c = synth_traces(&small_config(43), &profile);
        assert_ne!(a, c);
    }

    #[test]
    fn zero_solar_peak_means_dark_sky() {
        let profile = SynthProfile { solar_peak_wh: 0.0, ..Default::default() };
        let bundle = synth_traces(&small_config(42), &profile);
        assert!(bundle.solar.iter().all(|t| t.values.iter().all(|v| *v == 0.0)));
    }

    #[test]
    fn night_hours_have_zero_solar() {
        let profile = SynthProfile::default();
        let bundle = synth_traces(&small_config(42), &profile);
        for trace in &bundle.solar {
            for (t, v) in trace.values.iter().enumerate() {
                let h = t % 24;
                if h <= profile.sunrise_hour || h >= profile.sunset_hour {
                    assert_eq!(*v, 0.0, "hour {t}");
                }
            }
        }
    }

    #[test]
    fn synth_output_satisfies_bundle_invariants_for_any_seed() {
        let profile = SynthProfile::default();
        for seed in 0..25 {
            let cfg = small_config(seed);
            let bundle = synth_traces(&cfg, &profile);
            bundle.validate(cfg.n, cfg.horizon_hours).unwrap();
        }
    }

    #[test]
    fn yearly_solar_tracks_the_configured_ratio() {
        let profile = SynthProfile::default();
        let cfg = SimulationConfig { rng_seed: 9, ..Default::default() };
        let bundle = synth_traces(&cfg, &profile);
        for bs in 0..cfg.n {
            let solar: f64 = bundle.solar[bs].values.iter().sum();
            let load: f64 = bundle.load[bs].values.iter().sum();
            assert!((solar / load - 0.95).abs() < 1e-9, "bs {bs}: ratio {}", solar / load);
        }
    }

    #[test]
    fn file_round_trip_is_exact() {
        let profile = SynthProfile::default();
        let cfg = small_config(11);
        let bundle = synth_traces(&cfg, &profile);
        let mut buf = Vec::new();
        write_trace_file(&mut buf, &bundle).unwrap();
        let back = read_trace_file(buf.as_slice(), cfg.n, cfg.horizon_hours).unwrap();
        assert_eq!(back, bundle);
        let mut buf2 = Vec::new();
        write_trace_file(&mut buf2, &back).unwrap();
        assert_eq!(buf, buf2);
    }
}
