//! Greedy drone-exchange planning: feasibility check, row sorting, and the
//! surplus-to-deficit dispatch loop, plus an exhaustive oracle for small
//! instances.
//!
//! Planning works on station nets (battery + docked drones - load). While
//! some station is in deficit, the neediest one is paired with the
//! highest-surplus donor whose strongest drone passes the admissibility
//! guard, and that drone flies over. Donors only ever give energy they can
//! spare: a move never pushes the donor itself into deficit, which also
//! bounds the loop. When the recipient has no free docking slot the
//! exchange is two-way: its weakest drone flies back to the donor's vacated
//! slot, so every station keeps its full complement of docks. The greedy
//! loop and the oracle share one admissibility rule, so they explore the
//! same move space.

use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::model::{DroneSpec, NetworkState, Topology, Weights};
use crate::scoring;

/// One executed drone relocation. `drone_slot` is the column the drone
/// occupied in the donor row at departure. `energy_delivered_wh` is the
/// drone's energy on arrival (departure energy minus transit loss).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeMove {
    pub hour: usize,
    pub from_bs: usize,
    pub to_bs: usize,
    pub drone_slot: usize,
    pub energy_delivered_wh: f64,
    pub transit_loss_wh: f64,
    pub cost_score: f64,
}

/// Result of one planning call.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangePlan {
    pub moves: Vec<ExchangeMove>,
    /// The algorithm's running exchange counter; equals `moves.len()`.
    pub result_count: usize,
    pub post_state: NetworkState,
    /// Set when the global feasibility test failed and planning was skipped.
    pub infeasible: bool,
    /// Whether any station was in deficit when planning started.
    pub had_deficit: bool,
    /// Transit losses paid by counter-flow drones in two-way exchanges.
    /// Forward losses live on the individual moves.
    pub return_transit_loss_wh: f64,
}

impl ExchangePlan {
    /// Total energy landed at recipients.
    pub fn energy_delivered_wh(&self) -> f64 {
        self.moves.iter().map(|m| m.energy_delivered_wh).sum()
    }

    /// Transit losses over all drone legs, forward and return.
    pub fn total_transit_loss_wh(&self) -> f64 {
        self.moves.iter().map(|m| m.transit_loss_wh).sum::<f64>() + self.return_transit_loss_wh
    }
}

/// Global solvability test: total battery energy minus total load plus
/// total drone energy must strictly exceed `n * d0 * m`.
pub fn feasible(state: &NetworkState, spec: &DroneSpec, n: usize, m: usize) -> bool {
    let batteries: f64 = state.bs_energy.iter().sum();
    let loads: f64 = state.bs_load.iter().sum();
    let drones: f64 =
        state.drone_energy.iter().map(|row| row.iter().flatten().sum::<f64>()).sum();
    batteries - loads + drones > (n * m) as f64 * spec.min_exchange_wh
}

/// Sort every drone row ascending with absent slots first, so the last
/// column always holds the station's strongest drone. All other fields pass
/// through unchanged.
pub fn sort_drone_rows(state: &NetworkState) -> NetworkState {
    let mut next = state.clone();
    for row in &mut next.drone_energy {
        row.sort_by(|a, b| match (a, b) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(x), Some(y)) => x.total_cmp(y),
        });
    }
    next
}

fn deficit_of(net: f64) -> f64 {
    (-net).max(0.0)
}

/// Index of the strongest drone in a sorted row, if any.
fn last_occupied(row: &[Option<f64>]) -> Option<usize> {
    row.iter().rposition(Option::is_some)
}

/// A donor/recipient pairing that passes the admissibility rule, with the
/// slot bookkeeping already resolved. Built against sorted rows.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    donor: usize,
    recipient: usize,
    donor_slot: usize,
    drone_wh: f64,
    transit_wh: f64,
    delivered_wh: f64,
    /// Slot freed at the recipient by a counter-flow drone, when its row is
    /// full: (slot, departing energy).
    swap_back: Option<(usize, f64)>,
}

/// Shared admissibility rule for the greedy planner and the oracle.
///
/// A move from `donor` to `recipient` is admissible when all of:
/// - the recipient is in deficit and the donor has surplus (net > 0);
/// - the donor's strongest drone clears `drone - cost - d0 > deficit`;
/// - the donor's net stays non-negative after the drone leaves;
/// - the exchange leaves the recipient free of its deficit (this is
///   implied by the guard for one-way moves but must also cover the
///   energy carried away by a counter-flow drone in two-way exchanges).
fn admissible(
    rows: &[Vec<Option<f64>>],
    nets: &[f64],
    donor: usize,
    recipient: usize,
    topo: &Topology,
    spec: &DroneSpec,
) -> Option<Candidate> {
    if donor == recipient || nets[recipient] >= 0.0 || nets[donor] <= 0.0 {
        return None;
    }
    let donor_slot = last_occupied(&rows[donor])?;
    let drone_wh = rows[donor][donor_slot]?;
    let transit_wh = scoring::transit_energy(donor, recipient, topo, spec);
    let deficit = deficit_of(nets[recipient]);
    let clears_guard = drone_wh - transit_wh - spec.min_exchange_wh > deficit;
    if !clears_guard {
        return None;
    }
    if nets[donor] - drone_wh < 0.0 {
        return None;
    }
    let delivered_wh = drone_wh - transit_wh;
    let swap_back = if rows[recipient].iter().all(Option::is_some) {
        let weakest = rows[recipient][0].expect("full row has a first drone");
        if delivered_wh - weakest <= deficit {
            return None;
        }
        Some((0, weakest))
    } else {
        None
    };
    Some(Candidate {
        donor,
        recipient,
        donor_slot,
        drone_wh,
        transit_wh,
        delivered_wh,
        swap_back,
    })
}

/// Apply a candidate to rows and nets. Returns the transit loss paid by the
/// counter-flow drone (zero for one-way moves).
fn execute(cand: &Candidate, rows: &mut [Vec<Option<f64>>], nets: &mut [f64]) -> f64 {
    rows[cand.donor][cand.donor_slot] = None;
    let mut return_loss = 0.0;
    match cand.swap_back {
        Some((slot, weakest)) => {
            rows[cand.recipient][slot] = Some(cand.delivered_wh);
            let arrives = (weakest - cand.transit_wh).max(0.0);
            return_loss = weakest - arrives;
            rows[cand.donor][cand.donor_slot] = Some(arrives);
            nets[cand.donor] += arrives - cand.drone_wh;
            nets[cand.recipient] += cand.delivered_wh - weakest;
        }
        None => {
            let free = rows[cand.recipient]
                .iter()
                .position(Option::is_none)
                .expect("one-way move requires a free slot");
            rows[cand.recipient][free] = Some(cand.delivered_wh);
            nets[cand.donor] -= cand.drone_wh;
            nets[cand.recipient] += cand.delivered_wh;
        }
    }
    sort_row(&mut rows[cand.donor]);
    sort_row(&mut rows[cand.recipient]);
    return_loss
}

fn sort_row(row: &mut [Option<f64>]) {
    row.sort_by(|a, b| match (a, b) {
        (None, None) => std::cmp::Ordering::Equal,
        (None, Some(_)) => std::cmp::Ordering::Less,
        (Some(_), None) => std::cmp::Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(y),
    });
}

/// Run one greedy planning pass over the network for the given hour.
///
/// Recipients are visited worst-net first, donors best-net first, ties to
/// the lowest index, so planning is fully deterministic. Each executed move
/// erases the recipient's deficit, so the loop runs at most `n` times. The
/// decision cost of the selected pairing is recorded on the move for
/// reporting; it does not alter energies.
pub fn plan_exchanges(
    state: &NetworkState,
    topo: &Topology,
    spec: &DroneSpec,
    w: &Weights,
    hour: usize,
) -> ExchangePlan {
    let sorted = sort_drone_rows(state);
    let n = sorted.n();
    let m = sorted.drone_energy.first().map(|r| r.len()).unwrap_or(0);
    let mut nets: Vec<f64> = (0..n).map(|i| sorted.net_energy(i)).collect();
    let had_deficit = nets.iter().any(|net| *net < 0.0);

    if !feasible(&sorted, spec, n, m) {
        return ExchangePlan {
            moves: Vec::new(),
            result_count: 0,
            post_state: sorted,
            infeasible: true,
            had_deficit,
            return_transit_loss_wh: 0.0,
        };
    }

    let mut rows = sorted.drone_energy.clone();
    let mut moves = Vec::new();
    let mut return_loss_total = 0.0;

    loop {
        let mut deficits: Vec<usize> = (0..n).filter(|i| nets[*i] < 0.0).collect();
        if deficits.is_empty() {
            break;
        }
        deficits.sort_by(|a, b| nets[*a].total_cmp(&nets[*b]).then(a.cmp(b)));
        let mut donors: Vec<usize> = (0..n).filter(|i| nets[*i] > 0.0).collect();
        donors.sort_by(|a, b| nets[*b].total_cmp(&nets[*a]).then(a.cmp(b)));

        let mut selected = None;
        'pairs: for &recipient in &deficits {
            for &donor in &donors {
                if let Some(cand) = admissible(&rows, &nets, donor, recipient, topo, spec) {
                    selected = Some(cand);
                    break 'pairs;
                }
            }
        }
        let Some(cand) = selected else { break };

        let cost_score = {
            let scored = NetworkState { drone_energy: rows.clone(), ..sorted.clone() };
            scoring::decision_cost(
                cand.recipient,
                cand.donor,
                hour,
                cand.donor_slot,
                &scored,
                topo,
                spec,
                w,
            )
            .expect("admissible candidate scores cleanly")
        };
        return_loss_total += execute(&cand, &mut rows, &mut nets);
        moves.push(ExchangeMove {
            hour,
            from_bs: cand.donor,
            to_bs: cand.recipient,
            drone_slot: cand.donor_slot,
            energy_delivered_wh: cand.delivered_wh,
            transit_loss_wh: cand.transit_wh,
            cost_score,
        });
    }

    let post_state = NetworkState { drone_energy: rows, ..sorted };
    ExchangePlan {
        result_count: moves.len(),
        moves,
        post_state,
        infeasible: false,
        had_deficit,
        return_transit_loss_wh: return_loss_total,
    }
}

/// One relocation found by the exhaustive oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMove {
    pub from_bs: usize,
    pub to_bs: usize,
    pub energy_delivered_wh: f64,
}

/// Outcome of the exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    /// A shortest deficit-eliminating sequence of admissible moves.
    Solved { moves: Vec<OracleMove> },
    /// No admissible sequence within the move bound eliminates all deficits.
    Unsolvable,
}

impl OracleOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, OracleOutcome::Solved { .. })
    }
}

const ORACLE_MAX_N: usize = 4;
const ORACLE_MAX_M: usize = 3;
const ORACLE_MAX_MOVES: usize = 6;

/// Exhaustively search move sequences (same admissibility rule and global
/// feasibility gate as [`plan_exchanges`], strongest-drone-only donors) and
/// return a shortest sequence that clears every deficit, or report that
/// none exists within `max_moves`. Bounded to tiny instances by
/// construction.
pub fn oracle_plan(
    state: &NetworkState,
    topo: &Topology,
    spec: &DroneSpec,
    max_moves: usize,
) -> Result<OracleOutcome> {
    let n = state.n();
    let m = state.drone_energy.first().map(|r| r.len()).unwrap_or(0);
    if n > ORACLE_MAX_N || m > ORACLE_MAX_M || max_moves > ORACLE_MAX_MOVES {
        return Err(Error::OracleBound(format!(
            "n <= {ORACLE_MAX_N}, m <= {ORACLE_MAX_M}, max_moves <= {ORACLE_MAX_MOVES} \
             (got n={n}, m={m}, max_moves={max_moves})"
        )));
    }

    let sorted = sort_drone_rows(state);
    let nets: Vec<f64> = (0..n).map(|i| sorted.net_energy(i)).collect();
    if nets.iter().any(|net| *net < 0.0) && !feasible(&sorted, spec, n, m) {
        return Ok(OracleOutcome::Unsolvable);
    }

    // Iterative deepening: the first depth with a solution is minimal.
    for depth in 0..=max_moves {
        let mut rows = sorted.drone_energy.clone();
        let mut nets = nets.clone();
        if let Some(moves) = search(&mut rows, &mut nets, topo, spec, depth) {
            return Ok(OracleOutcome::Solved { moves });
        }
    }
    Ok(OracleOutcome::Unsolvable)
}

fn search(
    rows: &mut Vec<Vec<Option<f64>>>,
    nets: &mut Vec<f64>,
    topo: &Topology,
    spec: &DroneSpec,
    depth: usize,
) -> Option<Vec<OracleMove>> {
    let n = nets.len();
    if nets.iter().all(|net| *net >= 0.0) {
        return Some(Vec::new());
    }
    if depth == 0 {
        return None;
    }
    for recipient in 0..n {
        for donor in 0..n {
            let Some(cand) = admissible(rows, nets, donor, recipient, topo, spec) else {
                continue;
            };
            let saved_rows = rows.clone();
            let saved_nets = nets.clone();
            execute(&cand, rows, nets);
            if let Some(mut rest) = search(rows, nets, topo, spec, depth - 1) {
                rest.insert(
                    0,
                    OracleMove {
                        from_bs: donor,
                        to_bs: recipient,
                        energy_delivered_wh: cand.delivered_wh,
                    },
                );
                return Some(rest);
            }
            *rows = saved_rows;
            *nets = saved_nets;
        }
    }
    None
}

const PLAN_HEADER: &str = "hour,from,to,slot,delivered,loss,cost_score";

/// Write moves in the line-oriented plan format used for golden files.
pub fn write_plan_text<W: Write>(mut w: W, moves: &[ExchangeMove]) -> std::io::Result<()> {
    writeln!(w, "{PLAN_HEADER}")?;
    for m in moves {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            m.hour, m.from_bs, m.to_bs, m.drone_slot, m.energy_delivered_wh, m.transit_loss_wh, m.cost_score
        )?;
    }
    Ok(())
}

/// Parse the plan format back into moves.
pub fn read_plan_text<R: BufRead>(r: R) -> Result<Vec<ExchangeMove>> {
    let mut moves = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim_end() != PLAN_HEADER {
                return Err(Error::PlanParse { line: 1, msg: "bad header".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(Error::PlanParse {
                line: idx + 1,
                msg: format!("expected 7 fields, found {}", f.len()),
            });
        }
        let parse_usize = |s: &str, what: &str| {
            s.trim().parse::<usize>().map_err(|_| Error::PlanParse {
                line: idx + 1,
                msg: format!("bad {what} '{s}'"),
            })
        };
        let parse_f64 = |s: &str, what: &str| {
            s.trim().parse::<f64>().map_err(|_| Error::PlanParse {
                line: idx + 1,
                msg: format!("bad {what} '{s}'"),
            })
        };
        moves.push(ExchangeMove {
            hour: parse_usize(f[0], "hour")?,
            from_bs: parse_usize(f[1], "from")?,
            to_bs: parse_usize(f[2], "to")?,
            drone_slot: parse_usize(f[3], "slot")?,
            energy_delivered_wh: parse_f64(f[4], "delivered")?,
            transit_loss_wh: parse_f64(f[5], "loss")?,
            cost_score: parse_f64(f[6], "cost_score")?,
        });
    }
    Ok(moves)
}
