//! Energy-aware backhaul selection for cells whose terrestrial link sits
//! near depletion.
//!
//! The rule is a residual-energy argmax over every drone docked at other
//! stations: a drone may relay the cell's backhaul only if it would finish
//! the hop and the duty with at least `d0 + reserve_margin` left in the
//! battery. When no drone qualifies, traffic falls back to a terrestrial
//! route when one is configured, and is deferred otherwise.

use serde::{Deserialize, Serialize};

use crate::model::{DroneSpec, NetworkState, Topology};
use crate::scoring;

/// Run-configuration scalars for backhaul decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackhaulConfig {
    /// Energy spent serving the backhaul duty itself, Wh.
    pub duty_cost_wh: f64,
    /// Safety margin kept above `d0` after the duty, Wh.
    pub reserve_margin_wh: f64,
    /// Whether a terrestrial fallback path exists.
    pub terrestrial_available: bool,
}

impl Default for BackhaulConfig {
    fn default() -> Self {
        BackhaulConfig { duty_cost_wh: 5.0, reserve_margin_wh: 2.0, terrestrial_available: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BackhaulChoice {
    /// Relay through the drone docked at `bs`, slot `slot`.
    DroneBackhaul { bs: usize, slot: usize },
    TerrestrialRoute,
    Defer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackhaulReason {
    /// The chosen drone keeps a safe reserve after the duty.
    SufficientReserve,
    /// No candidate drones are docked anywhere.
    AllDronesLow,
    /// Candidates exist but serving would risk depleting them.
    DepletionRisk,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackhaulDecision {
    pub choice: BackhaulChoice,
    pub reason: BackhaulReason,
}

/// Pick a backhaul route for `requesting_bs`.
///
/// Candidates are all drones docked at other stations. The best candidate
/// maximises residual energy after the hop and the duty; ties go to the
/// lowest (station, slot), so the decision is independent of enumeration
/// order.
pub fn select_backhaul(
    requesting_bs: usize,
    state: &NetworkState,
    topo: &Topology,
    spec: &DroneSpec,
    cfg: &BackhaulConfig,
) -> BackhaulDecision {
    let mut best: Option<(f64, usize, usize)> = None;
    for bs in 0..state.n() {
        if bs == requesting_bs {
            continue;
        }
        let hop = scoring::transit_energy(bs, requesting_bs, topo, spec);
        for (slot, docked) in state.drone_energy[bs].iter().enumerate() {
            let Some(energy) = docked else { continue };
            let residual = energy - hop - cfg.duty_cost_wh;
            if best.is_none_or(|(r, _, _)| residual > r) {
                best = Some((residual, bs, slot));
            }
        }
    }

    let fallback = |reason| BackhaulDecision {
        choice: if cfg.terrestrial_available {
            BackhaulChoice::TerrestrialRoute
        } else {
            BackhaulChoice::Defer
        },
        reason,
    };

    match best {
        None => fallback(BackhaulReason::AllDronesLow),
        Some((residual, bs, slot)) => {
            if residual >= spec.min_exchange_wh + cfg.reserve_margin_wh {
                BackhaulDecision {
                    choice: BackhaulChoice::DroneBackhaul { bs, slot },
                    reason: BackhaulReason::SufficientReserve,
                }
            } else {
                fallback(BackhaulReason::DepletionRisk)
            }
        }
    }
}
