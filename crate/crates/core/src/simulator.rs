//! Hourly discrete-time engine for the three evaluation cases.
//!
//! Every hour runs the same pipeline: solar intake and drone charging,
//! case-dependent support (nothing, local drone drain, or planned
//! exchanges followed by local drain), then load service. A station whose
//! served energy falls short of its demand records an outage for that
//! hour; unmet load is dropped, not carried over. Results aggregate into
//! 168-hour weekly windows, the final partial week included.

use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::time::Instant;

use crate::charging::apply_charging;
use crate::error::{Error, Result};
use crate::model::{CaseId, NetworkState, SimulationConfig, Topology, HOURS_PER_WEEK};
use crate::planner::{plan_exchanges, ExchangeMove};
use crate::traces::TraceBundle;

/// Everything that happened in one simulated hour.
#[derive(Debug, Clone, PartialEq)]
pub struct HourRecord {
    pub hour: usize,
    /// Net energy per station after charging, before any support ran.
    pub per_bs_net: Vec<f64>,
    /// Stations whose served energy fell short of demand, ascending.
    pub outages: Vec<usize>,
    pub moves: Vec<ExchangeMove>,
    /// Energy landed at recipients by this hour's exchanges.
    pub energy_transferred_wh: f64,
    pub grid_import_wh: f64,
    pub solar_in_wh: f64,
    pub solar_spilled_wh: f64,
    pub load_served_wh: f64,
    /// Transit losses over all drone legs this hour.
    pub transit_loss_wh: f64,
    /// True when some station was in deficit before support.
    pub had_deficit: bool,
    pub plan_infeasible: bool,
}

/// Advance the simulation by one hour.
pub fn step(
    state: &NetworkState,
    bundle: &TraceBundle,
    config: &SimulationConfig,
    topo: &Topology,
) -> Result<(NetworkState, HourRecord)> {
    let hour = state.hour;
    let horizon = config.horizon_hours.min(bundle.horizon_hours());
    if hour >= horizon {
        return Err(Error::EndOfHorizon(hour));
    }
    let n = config.n;

    // Load for this hour becomes part of the state the planner sees;
    // average power over an hourly bucket equals the load numerically.
    let mut current = state.clone();
    for bs in 0..n {
        let load = bundle.load[bs].values[hour];
        current.bs_load[bs] = load;
        current.bs_power[bs] = load;
    }

    let charge = apply_charging(&current, bundle, config, hour);
    current = charge.state;

    let per_bs_net: Vec<f64> = (0..n).map(|bs| current.net_energy(bs)).collect();
    let had_deficit = per_bs_net.iter().any(|net| *net < 0.0);

    let mut moves = Vec::new();
    let mut energy_transferred = 0.0;
    let mut transit_loss = 0.0;
    let mut plan_infeasible = false;
    if config.case_id == CaseId::OptimalRedistribution {
        let plan = plan_exchanges(&current, topo, &config.drone_spec, &config.weights, hour);
        energy_transferred = plan.energy_delivered_wh();
        transit_loss = plan.total_transit_loss_wh();
        plan_infeasible = plan.infeasible;
        moves = plan.moves.clone();
        current = plan.post_state;
    }

    // Serve loads: battery first, then (cases with drones) docked drones.
    let mut outages = Vec::new();
    let mut served_total = 0.0;
    for bs in 0..n {
        let load = current.bs_load[bs];
        let from_battery = current.bs_energy[bs].min(load);
        current.bs_energy[bs] -= from_battery;
        let mut unmet = load - from_battery;
        if config.case_id != CaseId::Baseline && unmet > 0.0 {
            for slot in current.drone_energy[bs].iter_mut().flatten() {
                if unmet <= 0.0 {
                    break;
                }
                let drain = slot.min(unmet);
                *slot -= drain;
                unmet -= drain;
            }
        }
        served_total += load - unmet;
        if unmet > 0.0 {
            outages.push(bs);
        }
    }

    current.hour = hour + 1;
    let record = HourRecord {
        hour,
        per_bs_net,
        outages,
        moves,
        energy_transferred_wh: energy_transferred,
        grid_import_wh: charge.grid_import_wh,
        solar_in_wh: charge.solar_in_wh,
        solar_spilled_wh: charge.solar_spilled_wh,
        load_served_wh: served_total,
        transit_loss_wh: transit_loss,
        had_deficit,
        plan_infeasible,
    };
    Ok((current, record))
}

/// Weekly aggregates for one case run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub case_id: CaseId,
    pub n: usize,
    pub horizon_hours: usize,
    pub weeks: usize,
    /// Outage counts per week per station (weeks x n).
    pub weekly_outages: Vec<Vec<u32>>,
    /// Exchange counts per week.
    pub weekly_exchanges: Vec<u32>,
    /// Weekly count of hours that saw any pre-support deficit.
    pub weekly_deficit_hours: Vec<u32>,
    pub total_outages: u64,
    pub total_exchanges: u64,
    pub total_energy_transferred_wh: f64,
    pub total_grid_import_wh: f64,
    /// Wall-clock duration of the run; not part of the serialized report so
    /// identical runs produce identical artifacts.
    #[serde(skip)]
    pub runtime_ms: u64,
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<MetricsReport> {
        serde_json::from_str(s).map_err(|e| Error::InvalidConfig(format!("bad report JSON: {e}")))
    }

    pub fn write_weekly_outages_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "week,bs,outages")?;
        for (week, row) in self.weekly_outages.iter().enumerate() {
            for (bs, count) in row.iter().enumerate() {
                writeln!(w, "{week},{bs},{count}")?;
            }
        }
        Ok(())
    }

    pub fn write_weekly_exchanges_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "week,exchanges")?;
        for (week, count) in self.weekly_exchanges.iter().enumerate() {
            writeln!(w, "{week},{count}")?;
        }
        Ok(())
    }
}

/// Parse a `week,bs,outages` file back into a weeks x n matrix.
pub fn read_weekly_outages_csv<R: BufRead>(r: R) -> Result<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim_end() != "week,bs,outages" {
                return Err(Error::TraceParse { line: 1, msg: "bad weekly outage header".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let bad = |msg: String| Error::TraceParse { line: idx + 1, msg };
        if f.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", f.len())));
        }
        let week: usize = f[0].parse().map_err(|_| bad(format!("bad week '{}'", f[0])))?;
        let bs: usize = f[1].parse().map_err(|_| bad(format!("bad bs '{}'", f[1])))?;
        let count: u32 = f[2].parse().map_err(|_| bad(format!("bad count '{}'", f[2])))?;
        if week == out.len() {
            out.push(Vec::new());
        }
        if week + 1 != out.len() || bs != out[week].len() {
            return Err(bad(format!("row ({week},{bs}) out of order")));
        }
        out[week].push(count);
    }
    Ok(out)
}

/// Parse a `week,exchanges` file back into a per-week vector.
pub fn read_weekly_exchanges_csv<R: BufRead>(r: R) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim_end() != "week,exchanges" {
                return Err(Error::TraceParse { line: 1, msg: "bad weekly exchange header".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let bad = |msg: String| Error::TraceParse { line: idx + 1, msg };
        if f.len() != 2 {
            return Err(bad(format!("expected 2 fields, found {}", f.len())));
        }
        let week: usize = f[0].parse().map_err(|_| bad(format!("bad week '{}'", f[0])))?;
        if week != out.len() {
            return Err(bad(format!("week {week} out of order")));
        }
        out.push(f[1].parse().map_err(|_| bad(format!("bad count '{}'", f[1])))?);
    }
    Ok(out)
}

/// Initial state for a case run: batteries empty, and the fleet either
/// fully charged on its docks or absent entirely for the baseline.
pub fn initial_state(config: &SimulationConfig) -> NetworkState {
    match config.case_id {
        CaseId::Baseline => NetworkState::empty(config.n, config.m),
        _ => NetworkState::with_full_fleet(config.n, config.m, &config.drone_spec),
    }
}

/// Run one case over the whole horizon, returning the weekly report and
/// every hour record.
pub fn run_case_recorded(
    config: &SimulationConfig,
    bundle: &TraceBundle,
    topo: &Topology,
) -> Result<(MetricsReport, Vec<HourRecord>)> {
    config.validate()?;
    bundle.validate(config.n, config.horizon_hours)?;
    if topo.n != config.n {
        return Err(Error::InvalidConfig(format!(
            "topology has {} stations, config expects {}",
            topo.n, config.n
        )));
    }

    let started = Instant::now();
    let horizon = config.horizon_hours;
    let weeks = horizon.div_ceil(HOURS_PER_WEEK);
    let mut weekly_outages = vec![vec![0u32; config.n]; weeks];
    let mut weekly_exchanges = vec![0u32; weeks];
    let mut weekly_deficit_hours = vec![0u32; weeks];
    let mut total_outages = 0u64;
    let mut total_exchanges = 0u64;
    let mut energy_transferred = 0.0;
    let mut grid_import = 0.0;

    let mut state = initial_state(config);
    let mut records = Vec::with_capacity(horizon);
    for hour in 0..horizon {
        let (next, record) = step(&state, bundle, config, topo)?;
        let week = hour / HOURS_PER_WEEK;
        for bs in &record.outages {
            weekly_outages[week][*bs] += 1;
            total_outages += 1;
        }
        weekly_exchanges[week] += record.moves.len() as u32;
        total_exchanges += record.moves.len() as u64;
        if record.had_deficit {
            weekly_deficit_hours[week] += 1;
        }
        energy_transferred += record.energy_transferred_wh;
        grid_import += record.grid_import_wh;
        state = next;
        records.push(record);
    }

    let report = MetricsReport {
        case_id: config.case_id,
        n: config.n,
        horizon_hours: horizon,
        weeks,
        weekly_outages,
        weekly_exchanges,
        weekly_deficit_hours,
        total_outages,
        total_exchanges,
        total_energy_transferred_wh: energy_transferred,
        total_grid_import_wh: grid_import,
        runtime_ms: started.elapsed().as_millis() as u64,
    };
    Ok((report, records))
}

/// Run one case over the whole horizon.
pub fn run_case(
    config: &SimulationConfig,
    bundle: &TraceBundle,
    topo: &Topology,
) -> Result<MetricsReport> {
    run_case_recorded(config, bundle, topo).map(|(report, _)| report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Topology;
    use crate::traces::{HourlyTrace, TraceBundle, TraceKind};

    fn bundle_from(solar: Vec<Vec<f64>>, load: Vec<Vec<f64>>) -> TraceBundle {
        TraceBundle {
            solar: solar
                .into_iter()
                .enumerate()
                .map(|(bs, values)| HourlyTrace { bs_id: bs, kind: TraceKind::SolarHarvest, values })
                .collect(),
            load: load
                .into_iter()
                .enumerate()
                .map(|(bs, values)| HourlyTrace { bs_id: bs, kind: TraceKind::Load, values })
                .collect(),
        }
    }

    fn config(case_id: CaseId, n: usize, m: usize, horizon: usize) -> SimulationConfig {
        SimulationConfig { n, m, case_id, horizon_hours: horizon, ..Default::default() }
    }

    #[test]
    fn baseline_deficit_is_an_outage_and_battery_floors_at_zero() {
        let cfg = config(CaseId::Baseline, 1, 1, 2);
        let topo = Topology::ring(1, &cfg.drone_spec);
        let bundle = bundle_from(vec![vec![0.0, 0.0]], vec![vec![5.0, 0.0]]);
        let state = initial_state(&cfg);
        let (next, rec) = step(&state, &bundle, &cfg, &topo).unwrap();
        assert_eq!(rec.outages, vec![0]);
        assert_eq!(next.bs_energy[0], 0.0);
        assert_eq!(rec.load_served_wh, 0.0);
    }

    #[test]
    fn static_support_drains_local_drones() {
        let mut cfg = config(CaseId::StaticDroneSupport, 1, 2, 24);
        cfg.drone_spec.capacity_wh = 3.0;
        cfg.drone_spec.min_exchange_wh = 1.0;
        let topo = Topology::ring(1, &cfg.drone_spec);
        // Midday, so the nocturnal policy leaves the drones alone.
        let mut state = initial_state(&cfg);
        state.hour = 12;
        let bundle = bundle_from(vec![vec![0.0; 24]], vec![vec![5.0; 24]]);
        let (next, rec) = step(&state, &bundle, &cfg, &topo).unwrap();
        // Two 3 Wh drones cover a 5 Wh load with 1 Wh left on the rack.
        assert!(rec.outages.is_empty());
        assert_eq!(next.docked_energy(0), 1.0);
        assert_eq!(rec.load_served_wh, 5.0);
    }

    #[test]
    fn optimal_case_moves_a_drone_and_avoids_the_outage() {
        let cfg = config(CaseId::OptimalRedistribution, 2, 1, 24);
        let topo = Topology::from_positions(&[(0.0, 0.0), (2.0, 0.0)], &cfg.drone_spec);
        let mut state = NetworkState::empty(2, 1);
        state.hour = 12;
        state.bs_energy = vec![0.0, 4.0];
        state.drone_energy = vec![vec![None], vec![Some(6.0)]];
        let mut solar = vec![vec![0.0; 24], vec![0.0; 24]];
        let mut load = vec![vec![0.0; 24], vec![0.0; 24]];
        solar[0][12] = 0.0;
        load[0][12] = 3.0;
        let bundle = bundle_from(solar, load);
        let (next, rec) = step(&state, &bundle, &cfg, &topo).unwrap();
        assert_eq!(rec.moves.len(), 1);
        assert!(rec.outages.is_empty());
        assert_eq!(rec.energy_transferred_wh, 5.0);
        // 5 Wh arrived, 3 served the load: 2 Wh stays docked.
        assert_eq!(next.docked_energy(0), 2.0);
    }

    #[test]
    fn zero_load_means_zero_outages_everywhere() {
        for case in CaseId::ALL {
            let cfg = config(case, 2, 2, 400);
            let topo = Topology::ring(2, &cfg.drone_spec);
            let bundle = bundle_from(vec![vec![1.0; 400]; 2], vec![vec![0.0; 400]; 2]);
            let report = run_case(&cfg, &bundle, &topo).unwrap();
            assert_eq!(report.total_outages, 0, "{case}");
            if case != CaseId::OptimalRedistribution {
                assert!(report.weekly_exchanges.iter().all(|c| *c == 0));
            }
        }
    }

    #[test]
    fn run_is_deterministic() {
        let cfg = SimulationConfig {
            horizon_hours: 24 * 21,
            case_id: CaseId::OptimalRedistribution,
            ..Default::default()
        };
        let topo = Topology::ring(cfg.n, &cfg.drone_spec);
        let bundle = crate::traces::synth_traces(&cfg, &crate::traces::SynthProfile::default());
        let a = run_case(&cfg, &bundle, &topo).unwrap();
        let b = run_case(&cfg, &bundle, &topo).unwrap();
        assert_eq!(a.weekly_outages, b.weekly_outages);
        assert_eq!(a.weekly_exchanges, b.weekly_exchanges);
        assert_eq!(a.total_energy_transferred_wh, b.total_energy_transferred_wh);
    }

    #[test]
    fn static_support_never_does_worse_than_baseline_per_station_week() {
        let base_cfg = SimulationConfig { horizon_hours: 24 * 60, ..Default::default() };
        let topo = Topology::ring(base_cfg.n, &base_cfg.drone_spec);
        let bundle = crate::traces::synth_traces(&base_cfg, &crate::traces::SynthProfile::default());
        let baseline =
            run_case(&base_cfg.with_case(CaseId::Baseline), &bundle, &topo).unwrap();
        let with_drones =
            run_case(&base_cfg.with_case(CaseId::StaticDroneSupport), &bundle, &topo).unwrap();
        for (week, (b, s)) in
            baseline.weekly_outages.iter().zip(&with_drones.weekly_outages).enumerate()
        {
            for bs in 0..base_cfg.n {
                assert!(
                    s[bs] <= b[bs],
                    "week {week} bs {bs}: static {} > baseline {}",
                    s[bs],
                    b[bs]
                );
            }
        }
    }

    #[test]
    fn weekly_sums_match_totals() {
        let cfg = SimulationConfig {
            horizon_hours: 24 * 40 + 5, // deliberately not a whole number of weeks
            case_id: CaseId::OptimalRedistribution,
            ..Default::default()
        };
        let topo = Topology::ring(cfg.n, &cfg.drone_spec);
        let bundle = crate::traces::synth_traces(&cfg, &crate::traces::SynthProfile::default());
        let (report, records) = run_case_recorded(&cfg, &bundle, &topo).unwrap();
        assert_eq!(report.weeks, (24 * 40 + 5usize).div_ceil(HOURS_PER_WEEK));
        let weekly_sum: u64 = report.weekly_outages.iter().flatten().map(|c| *c as u64).sum();
        assert_eq!(weekly_sum, report.total_outages);
        let exchange_sum: u64 = report.weekly_exchanges.iter().map(|c| *c as u64).sum();
        let moves: u64 = records.iter().map(|r| r.moves.len() as u64).sum();
        assert_eq!(exchange_sum, moves);
        assert_eq!(exchange_sum, report.total_exchanges);
    }

    #[test]
    fn hourly_energy_balance_holds() {
        use crate::charging::ChargingPolicy;
        let policies = [
            (ChargingPolicy::NocturnalFull, None),
            (ChargingPolicy::SolarWeighted { cheap_window: (0..6).collect() }, None),
            (ChargingPolicy::EnergyBuffer { buffer_floor_wh: 60.0 }, Some(400.0)),
        ];
        for (policy, cap) in policies {
            let cfg = SimulationConfig {
                horizon_hours: 24 * 30,
                case_id: CaseId::OptimalRedistribution,
                charging_policy: policy,
                bs_battery_cap_wh: cap,
                ..Default::default()
            };
            let topo = Topology::ring(cfg.n, &cfg.drone_spec);
            let bundle =
                crate::traces::synth_traces(&cfg, &crate::traces::SynthProfile::default());
            let mut state = initial_state(&cfg);
            for _ in 0..cfg.horizon_hours {
                let before = state.total_energy();
                let (next, rec) = step(&state, &bundle, &cfg, &topo).unwrap();
                let after = next.total_energy();
                let expected = before + rec.solar_in_wh + rec.grid_import_wh
                    - rec.load_served_wh
                    - rec.transit_loss_wh;
                assert!(
                    (after - expected).abs() <= 1e-9 * expected.abs().max(1.0),
                    "hour {} ({}): after {after}, expected {expected}",
                    rec.hour,
                    cfg.charging_policy.slug()
                );
                if cap.is_none() {
                    assert_eq!(rec.solar_spilled_wh, 0.0);
                }
                state = next;
            }
        }
    }

    #[test]
    fn report_json_and_csv_round_trip() {
        let cfg = SimulationConfig {
            horizon_hours: 24 * 15,
            case_id: CaseId::OptimalRedistribution,
            ..Default::default()
        };
        let topo = Topology::ring(cfg.n, &cfg.drone_spec);
        let bundle = crate::traces::synth_traces(&cfg, &crate::traces::SynthProfile::default());
        let report = run_case(&cfg, &bundle, &topo).unwrap();

        let json = report.to_json();
        let back = MetricsReport::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);

        let mut buf = Vec::new();
        report.write_weekly_outages_csv(&mut buf).unwrap();
        assert_eq!(read_weekly_outages_csv(buf.as_slice()).unwrap(), report.weekly_outages);

        let mut buf = Vec::new();
        report.write_weekly_exchanges_csv(&mut buf).unwrap();
        assert_eq!(read_weekly_exchanges_csv(buf.as_slice()).unwrap(), report.weekly_exchanges);
    }

    #[test]
    fn stepping_past_the_horizon_signals_the_end() {
        let cfg = config(CaseId::Baseline, 1, 1, 2);
        let topo = Topology::ring(1, &cfg.drone_spec);
        let bundle = bundle_from(vec![vec![0.0, 0.0]], vec![vec![0.0, 0.0]]);
        let mut state = initial_state(&cfg);
        for _ in 0..2 {
            let (next, _) = step(&state, &bundle, &cfg, &topo).unwrap();
            state = next;
        }
        assert!(matches!(step(&state, &bundle, &cfg, &topo), Err(Error::EndOfHorizon(2))));
    }
}
