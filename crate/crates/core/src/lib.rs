//! Discrete-time simulation and planning for drone-assisted energy
//! redistribution across solar-powered small-cell base stations.
//!
//! Each base station carries a solar panel, a battery, an hourly load
//! trace and a rack of courier drones. The library scores candidate
//! drone exchanges, plans greedy surplus-to-deficit dispatches hour by
//! hour, and runs a year-long evaluation across three scenarios: no
//! drones at all, station-local drone support, and full redistribution.
//!
//! Modules:
//! - [`model`]: shared domain types, state matrices and validation
//! - [`traces`]: solar/load trace ingest, cleaning and synthesis
//! - [`scoring`]: transfer-scoring formulas and the transit-energy model
//! - [`planner`]: the greedy exchange planner and its exhaustive oracle
//! - [`charging`]: per-hour battery intake and drone charging policies
//! - [`backhaul`]: energy-aware backhaul route selection
//! - [`simulator`]: the hourly engine, outage detection, weekly metrics

pub mod backhaul;
pub mod charging;
pub mod error;
pub mod model;
pub mod planner;
pub mod scoring;
pub mod simulator;
pub mod traces;

pub use error::{Error, Result};
