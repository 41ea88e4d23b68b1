//! Domain types and state matrices shared by every other module.
//!
//! A network is `n` solar-powered base stations, each with a battery, an
//! hourly load, and `m` drone docking slots. Per-hour snapshots are plain
//! immutable data: advancing time means constructing the next-hour state,
//! so states can be shared freely across concurrent scenario runs.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub const HOURS_PER_DAY: usize = 24;
pub const HOURS_PER_WEEK: usize = 168;
pub const DEFAULT_HORIZON_HOURS: usize = 8760;

/// Minimum admissible spacing between two distinct base stations, in km.
pub const MIN_INTER_BS_KM: f64 = 2.0;

/// Scalar weighting factors for the transfer-scoring formulas, plus the
/// hourly energy price vector.
///
/// `alpha`, `beta`, `gamma` appear as convex-combination coefficients and
/// must lie in `[0, 1]`; `zeta`, `delta`, `epsilon` are non-negative gains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub zeta: f64,
    pub delta: f64,
    pub epsilon: f64,
    /// Price of energy per Wh for each hour of the day (24 entries).
    pub price_by_hour: Vec<f64>,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            alpha: 0.7,
            beta: 0.5,
            gamma: 0.3,
            zeta: 0.8,
            delta: 0.6,
            epsilon: 0.4,
            price_by_hour: vec![1.0; HOURS_PER_DAY],
        }
    }
}

impl Weights {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        for (name, v) in [("zeta", self.zeta), ("delta", self.delta), ("epsilon", self.epsilon)] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be >= 0, got {v}")));
            }
        }
        if self.price_by_hour.len() != HOURS_PER_DAY {
            return Err(Error::InvalidConfig(format!(
                "price_by_hour must have {} entries, got {}",
                HOURS_PER_DAY,
                self.price_by_hour.len()
            )));
        }
        if let Some(p) = self.price_by_hour.iter().find(|p| **p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidConfig(format!("price_by_hour entries must be >= 0, got {p}")));
        }
        Ok(())
    }

    /// Energy price for an absolute hour index (wraps over the day).
    pub fn price_at(&self, hour: usize) -> f64 {
        self.price_by_hour[hour % HOURS_PER_DAY]
    }
}

/// Physical drone parameters. Energy figures are Wh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroneSpec {
    /// Battery capacity of one drone.
    pub capacity_wh: f64,
    /// Cruise speed, km/h.
    pub speed_kmph: f64,
    /// Energy drawn per minute of hover/service time.
    pub loss_per_min_wh: f64,
    /// Energy drawn per km of transit flight.
    pub loss_per_km_wh: f64,
    /// Minimum drone energy required to take part in a single exchange (d0).
    pub min_exchange_wh: f64,
}

impl Default for DroneSpec {
    fn default() -> Self {
        // d0 equals the transit cost of the shortest admissible hop
        // (0.5 Wh/km over 2 km).
        DroneSpec {
            capacity_wh: 30.0,
            speed_kmph: 60.0,
            loss_per_min_wh: 0.5,
            loss_per_km_wh: 0.5,
            min_exchange_wh: 1.0,
        }
    }
}

/// Static network geometry and pairwise transfer parameters.
///
/// `distance` is symmetric with a zero diagonal; off-diagonal entries are
/// at least [`MIN_INTER_BS_KM`]. `transfer_cost` is the energy cost matrix
/// (Wh) for moving a drone between stations; `success_prob` the probability
/// of a successful transfer (defaults to 1 everywhere).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub n: usize,
    /// Planar coordinates in km; distances derive from these.
    pub positions: Vec<(f64, f64)>,
    pub distance: Vec<Vec<f64>>,
    pub transfer_cost: Vec<Vec<f64>>,
    pub success_prob: Vec<Vec<f64>>,
}

impl Topology {
    /// Build a topology from station coordinates. Transfer costs are the
    /// per-km transit loss over the straight-line distance.
    pub fn from_positions(positions: &[(f64, f64)], spec: &DroneSpec) -> Topology {
        let n = positions.len();
        let mut distance = vec![vec![0.0; n]; n];
        let mut transfer_cost = vec![vec![0.0; n]; n];
        let mut success_prob = vec![vec![1.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dx = positions[i].0 - positions[j].0;
                let dy = positions[i].1 - positions[j].1;
                let d = (dx * dx + dy * dy).sqrt();
                distance[i][j] = d;
                transfer_cost[i][j] = spec.loss_per_km_wh * d;
                success_prob[i][j] = 1.0;
            }
        }
        Topology { n, positions: positions.to_vec(), distance, transfer_cost, success_prob }
    }

    /// Default layout: stations on a circle sized so that adjacent stations
    /// sit 2.2 km apart, comfortably above the 2 km floor.
    pub fn ring(n: usize, spec: &DroneSpec) -> Topology {
        assert!(n >= 1, "topology needs at least one station");
        if n == 1 {
            return Topology::from_positions(&[(0.0, 0.0)], spec);
        }
        let half_angle = std::f64::consts::PI / n as f64;
        let radius = 1.1 / half_angle.sin();
        let positions: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (radius * theta.cos(), radius * theta.sin())
            })
            .collect();
        Topology::from_positions(&positions, spec)
    }

    /// Replace the all-ones success matrix with a distance-decay model
    /// `exp(-distance / decay_km)`. Diagonal stays 1.
    pub fn with_distance_decay_success(mut self, decay_km: f64) -> Topology {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    self.success_prob[i][j] = (-self.distance[i][j] / decay_km).exp();
                }
            }
        }
        self
    }
}

/// A docking slot: `Some(energy)` when a drone is docked, `None` after the
/// drone has departed. Energy is never negative.
pub type DroneSlot = Option<f64>;

/// One-hour snapshot of the network: battery energies, hourly loads, the
/// drone matrix, and the instantaneous power draw per station.
///
/// The drone matrix keeps its rectangular n x m shape throughout; departed
/// drones leave an absent slot rather than shrinking the row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkState {
    /// Time index, in hours from the start of the run.
    pub hour: usize,
    /// Battery energy per station, Wh.
    pub bs_energy: Vec<f64>,
    /// Energy demanded this hour per station, Wh.
    pub bs_load: Vec<f64>,
    /// Average power draw per station, W. With hourly buckets this equals
    /// the load expressed over one hour.
    pub bs_power: Vec<f64>,
    /// Drone matrix: row per station, column per docking slot.
    pub drone_energy: Vec<Vec<DroneSlot>>,
}

impl NetworkState {
    /// Empty network: zero energies and loads, all slots absent.
    pub fn empty(n: usize, m: usize) -> NetworkState {
        NetworkState {
            hour: 0,
            bs_energy: vec![0.0; n],
            bs_load: vec![0.0; n],
            bs_power: vec![0.0; n],
            drone_energy: vec![vec![None; m]; n],
        }
    }

    /// Every slot holds a fully charged drone.
    pub fn with_full_fleet(n: usize, m: usize, spec: &DroneSpec) -> NetworkState {
        let mut st = NetworkState::empty(n, m);
        st.drone_energy = vec![vec![Some(spec.capacity_wh); m]; n];
        st
    }

    pub fn n(&self) -> usize {
        self.bs_energy.len()
    }

    /// Total energy docked at one station.
    pub fn docked_energy(&self, bs: usize) -> f64 {
        self.drone_energy[bs].iter().flatten().sum()
    }

    /// Net energy of a station: battery + docked drones - this hour's load.
    /// Negative net is a deficit.
    pub fn net_energy(&self, bs: usize) -> f64 {
        self.bs_energy[bs] + self.docked_energy(bs) - self.bs_load[bs]
    }

    /// Battery plus drone energy summed over the whole network.
    pub fn total_energy(&self) -> f64 {
        let batteries: f64 = self.bs_energy.iter().sum();
        let drones: f64 = self
            .drone_energy
            .iter()
            .map(|row| row.iter().flatten().sum::<f64>())
            .sum();
        batteries + drones
    }

    /// Number of docked drones across the network.
    pub fn fleet_size(&self) -> usize {
        self.drone_energy.iter().map(|row| row.iter().flatten().count()).sum()
    }
}

/// The three evaluation scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    /// Stations run on solar and battery alone; no drones exist.
    Baseline,
    /// Each station may drain its own docked drones, but drones never move.
    StaticDroneSupport,
    /// Full greedy redistribution: drones are exchanged between stations
    /// before loads are served.
    OptimalRedistribution,
}

impl CaseId {
    pub const ALL: [CaseId; 3] =
        [CaseId::Baseline, CaseId::StaticDroneSupport, CaseId::OptimalRedistribution];

    /// Short slug used in file names and manifests.
    pub fn slug(&self) -> &'static str {
        match self {
            CaseId::Baseline => "baseline",
            CaseId::StaticDroneSupport => "static",
            CaseId::OptimalRedistribution => "optimal",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl std::str::FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CaseId> {
        match s.trim().to_ascii_lowercase().as_str() {
            "baseline" | "case1" | "no-drones" => Ok(CaseId::Baseline),
            "static" | "case2" | "static-drone-support" => Ok(CaseId::StaticDroneSupport),
            "optimal" | "case3" | "optimal-redistribution" => Ok(CaseId::OptimalRedistribution),
            other => Err(Error::InvalidConfig(format!(
                "unknown case '{other}' (expected baseline, static or optimal)"
            ))),
        }
    }
}

/// Full parameterisation of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Number of base stations.
    pub n: usize,
    /// Docking slots (and initial drones) per station.
    pub m: usize,
    pub weights: Weights,
    pub drone_spec: DroneSpec,
    pub case_id: CaseId,
    pub horizon_hours: usize,
    pub charging_policy: crate::charging::ChargingPolicy,
    pub rng_seed: u64,
    /// Optional battery cap per station; `None` means unbounded storage.
    pub bs_battery_cap_wh: Option<f64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            n: 5,
            m: 10,
            weights: Weights::default(),
            drone_spec: DroneSpec::default(),
            case_id: CaseId::OptimalRedistribution,
            horizon_hours: DEFAULT_HORIZON_HOURS,
            charging_policy: crate::charging::ChargingPolicy::NocturnalFull,
            rng_seed: 7,
            bs_battery_cap_wh: None,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        if self.m < 1 {
            return Err(Error::InvalidConfig("m must be >= 1".into()));
        }
        if self.horizon_hours < 1 {
            return Err(Error::InvalidConfig("horizon_hours must be >= 1".into()));
        }
        self.weights.validate()?;
        let spec = &self.drone_spec;
        if !(spec.min_exchange_wh > 0.0 && spec.capacity_wh > spec.min_exchange_wh) {
            return Err(Error::InvalidConfig(format!(
                "drone spec requires capacity > d0 > 0 (capacity {}, d0 {})",
                spec.capacity_wh, spec.min_exchange_wh
            )));
        }
        if spec.speed_kmph <= 0.0 {
            return Err(Error::InvalidConfig("drone speed must be > 0".into()));
        }
        self.charging_policy.validate()?;
        Ok(())
    }

    pub fn with_case(&self, case_id: CaseId) -> SimulationConfig {
        SimulationConfig { case_id, ..self.clone() }
    }
}

/// One violated invariant, with enough indices to locate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    NonFinite { field: String, i: usize, j: usize },
    NegativeEnergy { bs: usize },
    NegativeLoad { bs: usize },
    NegativePower { bs: usize },
    VectorLength { field: String, expected: usize, found: usize },
    RaggedDroneRow { bs: usize, expected: usize, found: usize },
    DroneNegative { bs: usize, slot: usize },
    DroneOverCapacity { bs: usize, slot: usize },
    DistanceDiagonal { i: usize },
    DistanceAsymmetric { i: usize, j: usize },
    DistanceBelowMinimum { i: usize, j: usize },
    TransferCostDiagonal { i: usize },
    TransferCostNonPositive { i: usize, j: usize },
    SuccessProbOutOfRange { i: usize, j: usize },
    SuccessProbDiagonal { i: usize },
    SpecCapacityOrder,
    SpecSpeedNonPositive,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NonFinite { field, i, j } => write!(f, "non-finite {field} at ({i},{j})"),
            NegativeEnergy { bs } => write!(f, "negative battery energy at BS {bs}"),
            NegativeLoad { bs } => write!(f, "negative load at BS {bs}"),
            NegativePower { bs } => write!(f, "negative power at BS {bs}"),
            VectorLength { field, expected, found } => {
                write!(f, "{field} has length {found}, expected {expected}")
            }
            RaggedDroneRow { bs, expected, found } => {
                write!(f, "drone row {bs} has {found} slots, expected {expected}")
            }
            DroneNegative { bs, slot } => write!(f, "negative drone energy at ({bs},{slot})"),
            DroneOverCapacity { bs, slot } => write!(f, "capacity exceeded at ({bs},{slot})"),
            DistanceDiagonal { i } => write!(f, "nonzero distance diagonal at {i}"),
            DistanceAsymmetric { i, j } => write!(f, "asymmetric distance at ({i},{j})"),
            DistanceBelowMinimum { i, j } => {
                write!(f, "inter-BS distance below {MIN_INTER_BS_KM} km at ({i},{j})")
            }
            TransferCostDiagonal { i } => write!(f, "nonzero transfer cost diagonal at {i}"),
            TransferCostNonPositive { i, j } => {
                write!(f, "non-positive transfer cost at ({i},{j})")
            }
            SuccessProbOutOfRange { i, j } => {
                write!(f, "success probability outside [0,1] at ({i},{j})")
            }
            SuccessProbDiagonal { i } => write!(f, "success probability diagonal not 1 at {i}"),
            SpecCapacityOrder => write!(f, "drone spec requires capacity > d0 > 0"),
            SpecSpeedNonPositive => write!(f, "drone speed must be > 0"),
        }
    }
}

/// Diagnostic check of every state, topology and spec invariant. Returns an
/// empty list when the state is valid. Total over all finite and non-finite
/// numeric input; never panics.
pub fn validate_state(state: &NetworkState, topo: &Topology, spec: &DroneSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = topo.n;

    for (field, vec) in [
        ("bs_energy", &state.bs_energy),
        ("bs_load", &state.bs_load),
        ("bs_power", &state.bs_power),
    ] {
        if vec.len() != n {
            out.push(Violation::VectorLength {
                field: field.into(),
                expected: n,
                found: vec.len(),
            });
        }
        for (i, v) in vec.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation::NonFinite { field: field.into(), i, j: 0 });
            } else if *v < 0.0 {
                out.push(match field {
                    "bs_energy" => Violation::NegativeEnergy { bs: i },
                    "bs_load" => Violation::NegativeLoad { bs: i },
                    _ => Violation::NegativePower { bs: i },
                });
            }
        }
    }

    if state.drone_energy.len() != n {
        out.push(Violation::VectorLength {
            field: "drone_energy".into(),
            expected: n,
            found: state.drone_energy.len(),
        });
    }
    let m = state.drone_energy.first().map(|r| r.len()).unwrap_or(0);
    for (i, row) in state.drone_energy.iter().enumerate() {
        if row.len() != m {
            out.push(Violation::RaggedDroneRow { bs: i, expected: m, found: row.len() });
        }
        for (j, slot) in row.iter().enumerate() {
            if let Some(e) = slot {
                if !e.is_finite() {
                    out.push(Violation::NonFinite { field: "drone_energy".into(), i, j });
                } else if *e < 0.0 {
                    out.push(Violation::DroneNegative { bs: i, slot: j });
                } else if *e > spec.capacity_wh {
                    out.push(Violation::DroneOverCapacity { bs: i, slot: j });
                }
            }
        }
    }

    // Topology invariants. Symmetry tolerance only absorbs float dust.
    for (field, matrix) in [
        ("distance", &topo.distance),
        ("transfer_cost", &topo.transfer_cost),
        ("success_prob", &topo.success_prob),
    ] {
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            out.push(Violation::VectorLength {
                field: field.into(),
                expected: n,
                found: matrix.len(),
            });
        }
    }
    for (i, row) in topo.distance.iter().enumerate().take(n) {
        for (j, d) in row.iter().copied().enumerate().take(n) {
            if !d.is_finite() {
                out.push(Violation::NonFinite { field: "distance".into(), i, j });
                continue;
            }
            let mirror = topo.distance.get(j).and_then(|r| r.get(i)).copied();
            if i == j {
                if d != 0.0 {
                    out.push(Violation::DistanceDiagonal { i });
                }
            } else if mirror.is_none_or(|m| (d - m).abs() > 1e-9) {
                if i < j {
                    out.push(Violation::DistanceAsymmetric { i, j });
                }
            } else if d < MIN_INTER_BS_KM - 1e-9 {
                out.push(Violation::DistanceBelowMinimum { i, j });
            }
        }
    }
    for (i, row) in topo.transfer_cost.iter().enumerate().take(n) {
        for (j, c) in row.iter().copied().enumerate().take(n) {
            if !c.is_finite() {
                out.push(Violation::NonFinite { field: "transfer_cost".into(), i, j });
                continue;
            }
            if i == j {
                if c != 0.0 {
                    out.push(Violation::TransferCostDiagonal { i });
                }
            } else if c <= 0.0 {
                out.push(Violation::TransferCostNonPositive { i, j });
            }
        }
    }
    for (i, row) in topo.success_prob.iter().enumerate().take(n) {
        for (j, p) in row.iter().copied().enumerate().take(n) {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                out.push(Violation::SuccessProbOutOfRange { i, j });
            } else if i == j && p != 1.0 {
                out.push(Violation::SuccessProbDiagonal { i });
            }
        }
    }

    let spec_order_ok = spec.min_exchange_wh > 0.0 && spec.capacity_wh > spec.min_exchange_wh;
    if !spec_order_ok {
        out.push(Violation::SpecCapacityOrder);
    }
    let speed_ok = spec.speed_kmph > 0.0;
    if !speed_ok {
        out.push(Violation::SpecSpeedNonPositive);
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_setup() -> (NetworkState, Topology, DroneSpec) {
        let spec = DroneSpec::default();
        let topo = Topology::ring(5, &spec);
        let state = NetworkState::with_full_fleet(5, 10, &spec);
        (state, topo, spec)
    }

    #[test]
    fn boundary_state_is_valid() {
        // All-zero energies, zero loads, full drone matrix at capacity.
        let (state, topo, spec) = default_setup();
        assert!(validate_state(&state, &topo, &spec).is_empty());
    }

    #[test]
    fn over_capacity_drone_is_flagged() {
        let (mut state, topo, spec) = default_setup();
        state.drone_energy[2][4] = Some(31.0);
        let violations = validate_state(&state, &topo, &spec);
        assert_eq!(violations, vec![Violation::DroneOverCapacity { bs: 2, slot: 4 }]);
        assert_eq!(violations[0].to_string(), "capacity exceeded at (2,4)");
    }

    #[test]
    fn too_close_stations_are_flagged() {
        let (state, mut topo, spec) = default_setup();
        topo.distance[1][2] = 1.0;
        topo.distance[2][1] = 1.0;
        let violations = validate_state(&state, &topo, &spec);
        assert!(violations.contains(&Violation::DistanceBelowMinimum { i: 1, j: 2 }));
    }

    #[test]
    fn validate_is_total_on_weird_input() {
        let (mut state, mut topo, spec) = default_setup();
        state.bs_energy[0] = f64::NAN;
        state.bs_load[1] = f64::INFINITY;
        state.drone_energy[0][0] = Some(f64::NAN);
        topo.distance[0][1] = f64::NAN;
        // Must not panic, must report something.
        let violations = validate_state(&state, &topo, &spec);
        assert!(!violations.is_empty());
    }

    #[test]
    fn validate_is_total_on_ragged_matrices() {
        let (state, mut topo, spec) = default_setup();
        topo.distance.truncate(3);
        topo.distance[1].truncate(2);
        topo.transfer_cost.truncate(1);
        topo.success_prob[2] = vec![];
        let violations = validate_state(&state, &topo, &spec);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::VectorLength { field, .. } if field == "distance")));
    }

    #[test]
    fn ring_respects_distance_floor() {
        let spec = DroneSpec::default();
        for n in 1..=8 {
            let topo = Topology::ring(n, &spec);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(topo.distance[i][j] >= MIN_INTER_BS_KM, "n={n} ({i},{j})");
                        assert!((topo.distance[i][j] - topo.distance[j][i]).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn state_round_trips_bitwise_through_json() {
        let spec = DroneSpec::default();
        let mut state = NetworkState::with_full_fleet(3, 2, &spec);
        state.bs_energy = vec![0.1 + 0.2, 1.0 / 3.0, f64::MIN_POSITIVE];
        state.bs_load = vec![2.5, 0.0, 9.75];
        state.drone_energy[1][0] = None;
        state.drone_energy[2][1] = Some(29.999999999999996);
        let json = serde_json::to_string(&state).unwrap();
        let back: NetworkState = serde_json::from_str(&json).unwrap();
        assert_eq!(back.hour, state.hour);
        for (a, b) in back.bs_energy.iter().zip(&state.bs_energy) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for (ra, rb) in back.drone_energy.iter().zip(&state.drone_energy) {
            for (a, b) in ra.iter().zip(rb) {
                match (a, b) {
                    (Some(a), Some(b)) => assert_eq!(a.to_bits(), b.to_bits()),
                    (None, None) => {}
                    _ => panic!("slot presence changed"),
                }
            }
        }
    }

    #[test]
    fn net_energy_counts_docked_drones() {
        let spec = DroneSpec::default();
        let mut st = NetworkState::with_full_fleet(2, 2, &spec);
        st.bs_energy[0] = 5.0;
        st.bs_load[0] = 80.0;
        // 5 + 60 - 80
        assert_eq!(st.net_energy(0), -15.0);
        st.drone_energy[0][1] = None;
        assert_eq!(st.net_energy(0), -45.0);
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let mut cfg = SimulationConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.weights.alpha = 1.2;
        assert!(cfg.validate().is_err());
        cfg.weights.alpha = 0.7;
        cfg.m = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn case_ids_parse_from_slugs() {
        for case in CaseId::ALL {
            assert_eq!(case.slug().parse::<CaseId>().unwrap(), case);
        }
        assert!("case2".parse::<CaseId>().unwrap() == CaseId::StaticDroneSupport);
        assert!("bogus".parse::<CaseId>().is_err());
    }
}
