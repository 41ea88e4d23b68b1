//! Per-hour battery intake and drone charging policies.
//!
//! Every hour the station battery absorbs that hour's solar harvest, then
//! docked drones charge according to the selected policy. Drone charging
//! draws from an external feed (tracked as grid import), except where a
//! policy explicitly redirects solar surplus or battery energy.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{NetworkState, SimulationConfig};
use crate::traces::TraceBundle;

/// Hours treated as night for [`ChargingPolicy::NocturnalFull`]: 20:00-05:00.
pub fn is_night_hour(hour_of_day: usize) -> bool {
    hour_of_day <= 5 || hour_of_day >= 20
}

/// Drone charging behaviour, selected by name in the run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ChargingPolicy {
    /// During night hours every docked drone charges to capacity from the
    /// external feed.
    NocturnalFull,
    /// Drones charge only during the configured cheap-rate hours, taking
    /// the hour's solar surplus first and the external feed for the rest.
    SolarWeighted { cheap_window: BTreeSet<usize> },
    /// Drones charge whenever the station battery exceeds the floor,
    /// drawing the battery down no further than the floor. No grid use.
    EnergyBuffer { buffer_floor_wh: f64 },
}

impl ChargingPolicy {
    pub fn validate(&self) -> Result<()> {
        match self {
            ChargingPolicy::NocturnalFull => Ok(()),
            ChargingPolicy::SolarWeighted { cheap_window } => {
                if let Some(h) = cheap_window.iter().find(|h| **h > 23) {
                    return Err(Error::InvalidConfig(format!(
                        "cheap_window hour {h} outside 0..=23"
                    )));
                }
                Ok(())
            }
            ChargingPolicy::EnergyBuffer { buffer_floor_wh } => {
                if *buffer_floor_wh < 0.0 || !buffer_floor_wh.is_finite() {
                    return Err(Error::InvalidConfig("buffer_floor_wh must be >= 0".into()));
                }
                Ok(())
            }
        }
    }

    /// Manifest slug for this policy.
    pub fn slug(&self) -> &'static str {
        match self {
            ChargingPolicy::NocturnalFull => "nocturnal-full",
            ChargingPolicy::SolarWeighted { .. } => "solar-weighted",
            ChargingPolicy::EnergyBuffer { .. } => "energy-buffer",
        }
    }
}

/// Result of one charging pass: the next state plus the energy flows needed
/// for conservation accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeOutcome {
    pub state: NetworkState,
    /// Solar energy absorbed by station batteries this hour.
    pub solar_in_wh: f64,
    /// Energy drawn from the external feed to charge drones.
    pub grid_import_wh: f64,
    /// Solar energy discarded because a battery cap was hit.
    pub solar_spilled_wh: f64,
}

/// Apply one hour of solar intake and drone charging.
///
/// Panics if `hour` is outside the bundle horizon; the simulator guards
/// this. Battery storage is unbounded unless a cap is configured.
pub fn apply_charging(
    state: &NetworkState,
    bundle: &TraceBundle,
    config: &SimulationConfig,
    hour: usize,
) -> ChargeOutcome {
    assert!(
        hour < bundle.horizon_hours(),
        "hour {hour} outside trace horizon {}",
        bundle.horizon_hours()
    );
    let mut next = state.clone();
    let hour_of_day = hour % crate::model::HOURS_PER_DAY;
    let capacity = config.drone_spec.capacity_wh;
    let mut solar_in = 0.0;
    let mut grid = 0.0;
    let mut spill = 0.0;

    for bs in 0..next.n() {
        let harvest = bundle.solar[bs].values[hour];
        let mut intake = harvest;
        if let Some(cap) = config.bs_battery_cap_wh {
            let room = (cap - next.bs_energy[bs]).max(0.0);
            if intake > room {
                spill += intake - room;
                intake = room;
            }
        }
        next.bs_energy[bs] += intake;
        solar_in += intake;

        match &config.charging_policy {
            ChargingPolicy::NocturnalFull => {
                if is_night_hour(hour_of_day) {
                    for slot in next.drone_energy[bs].iter_mut().flatten() {
                        let need = (capacity - *slot).max(0.0);
                        *slot += need;
                        grid += need;
                    }
                }
            }
            ChargingPolicy::SolarWeighted { cheap_window } => {
                if cheap_window.contains(&hour_of_day) {
                    let surplus = (harvest - bundle.load[bs].values[hour]).max(0.0);
                    let mut solar_budget = surplus.min(next.bs_energy[bs]);
                    for slot in next.drone_energy[bs].iter_mut().flatten() {
                        let need = (capacity - *slot).max(0.0);
                        let from_solar = need.min(solar_budget);
                        solar_budget -= from_solar;
                        next.bs_energy[bs] -= from_solar;
                        grid += need - from_solar;
                        *slot += need;
                    }
                }
            }
            ChargingPolicy::EnergyBuffer { buffer_floor_wh } => {
                let mut available = (next.bs_energy[bs] - buffer_floor_wh).max(0.0);
                for slot in next.drone_energy[bs].iter_mut().flatten() {
                    if available <= 0.0 {
                        break;
                    }
                    let take = (capacity - *slot).max(0.0).min(available);
                    *slot += take;
                    next.bs_energy[bs] -= take;
                    available -= take;
                }
            }
        }
    }

    ChargeOutcome { state: next, solar_in_wh: solar_in, grid_import_wh: grid, solar_spilled_wh: spill }
}
