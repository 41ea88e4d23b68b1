//! Transfer-scoring formulas and the drone transit-energy model.
//!
//! The three scores chain into one another: the load-transfer score `L`
//! feeds the traffic-loading score `T`, which feeds the decision cost.
//! They mix Wh, km, W and currency into dimensionless figures of merit;
//! no unit reconciliation is attempted. All functions here are pure.

use crate::error::{Error, Result};
use crate::model::{DroneSpec, NetworkState, Topology, Weights};

fn check_bs(index: usize, n: usize) -> Result<()> {
    if index >= n {
        return Err(Error::BsIndex { index, n });
    }
    Ok(())
}

/// Load-transfer score between two stations:
/// `alpha * E_i + (1 - alpha) * D_ij + zeta * P_i`.
pub fn load_transfer(
    i: usize,
    j: usize,
    state: &NetworkState,
    topo: &Topology,
    w: &Weights,
) -> Result<f64> {
    check_bs(i, topo.n)?;
    check_bs(j, topo.n)?;
    if i == j {
        return Err(Error::SameNode(i));
    }
    Ok(w.alpha * state.bs_energy[i]
        + (1.0 - w.alpha) * topo.distance[i][j]
        + w.zeta * state.bs_power[i])
}

/// Monetary equivalent of moving energy from `i` to `j` at hour `h`: the
/// pairwise transfer cost priced at that hour's rate.
pub fn monetary_transfer_cost(i: usize, j: usize, hour: usize, topo: &Topology, w: &Weights) -> f64 {
    topo.transfer_cost[i][j] * w.price_at(hour)
}

/// Residual energy of a drone after hopping `distance_km`: floored at zero.
/// This is the replaceable residual-energy term in the traffic score.
pub fn residual_after_hop(distance_km: f64, drone_wh: f64, spec: &DroneSpec) -> f64 {
    (drone_wh - spec.loss_per_km_wh * distance_km).max(0.0)
}

/// Traffic-loading score:
/// `beta * L(i,j) + (1 - beta) * C_ijh - delta * F(D_ij, E_dj)`,
/// where drone `d` is read from slot `slot` at station `j` and `F` is the
/// drone's residual energy after the hop ([`residual_after_hop`]).
#[allow(clippy::too_many_arguments)]
pub fn traffic_loading(
    i: usize,
    j: usize,
    hour: usize,
    slot: usize,
    state: &NetworkState,
    topo: &Topology,
    spec: &DroneSpec,
    w: &Weights,
) -> Result<f64> {
    let l = load_transfer(i, j, state, topo, w)?;
    let drone = state.drone_energy[j]
        .get(slot)
        .copied()
        .flatten()
        .ok_or(Error::AbsentDrone { bs: j, slot })?;
    let cost = monetary_transfer_cost(i, j, hour, topo, w);
    let residual = residual_after_hop(topo.distance[i][j], drone, spec);
    Ok(w.beta * l + (1.0 - w.beta) * cost - w.delta * residual)
}

/// Decision cost used to rank candidate exchanges:
/// `gamma * T(i,j,h) + (1 - gamma) * P_h + epsilon * Pi(i,j)`.
#[allow(clippy::too_many_arguments)]
pub fn decision_cost(
    i: usize,
    j: usize,
    hour: usize,
    slot: usize,
    state: &NetworkState,
    topo: &Topology,
    spec: &DroneSpec,
    w: &Weights,
) -> Result<f64> {
    let t = traffic_loading(i, j, hour, slot, state, topo, spec, w)?;
    Ok(w.gamma * t + (1.0 - w.gamma) * w.price_at(hour) + w.epsilon * topo.success_prob[i][j])
}

/// Energy a drone spends flying from `i` to `j`. Intra-station moves are
/// free; inter-station moves cost the per-km rate over the distance.
pub fn transit_energy(i: usize, j: usize, topo: &Topology, spec: &DroneSpec) -> f64 {
    if i == j {
        return 0.0;
    }
    spec.loss_per_km_wh * topo.distance[i][j]
}

/// Flight time in minutes for the hop from `i` to `j`.
pub fn transit_minutes(i: usize, j: usize, topo: &Topology, spec: &DroneSpec) -> f64 {
    if i == j {
        return 0.0;
    }
    topo.distance[i][j] / spec.speed_kmph * 60.0
}
