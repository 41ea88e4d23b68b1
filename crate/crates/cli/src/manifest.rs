//! Run manifests: a flat TOML file of key-value settings plus optional
//! override tables, resolved against the library defaults.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use aerogrid::charging::ChargingPolicy;
use aerogrid::model::{CaseId, DroneSpec, SimulationConfig, Weights};
use aerogrid::traces::SynthProfile;

/// On-disk manifest. Every key is optional; omitted keys fall back to the
/// library defaults (the five-station, ten-drone reference setup).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManifestFile {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub horizon_hours: Option<usize>,
    /// Case slugs: baseline, static, optimal. Defaults to all three.
    pub cases: Option<Vec<String>>,
    /// nocturnal-full, solar-weighted or energy-buffer.
    pub charging_policy: Option<String>,
    pub out_dir: Option<PathBuf>,
    /// Read traces from this file instead of synthesizing them.
    pub trace_file: Option<PathBuf>,
    pub bs_battery_cap_wh: Option<f64>,
    /// Replace the all-ones transfer success matrix with
    /// `exp(-distance / decay_km)`.
    pub success_decay_km: Option<f64>,
    pub weights: WeightsOverride,
    pub drone: DroneOverride,
    pub charging: ChargingOverride,
    /// Synthetic trace generator settings; ignored when `trace_file` is set.
    pub profile: SynthProfile,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightsOverride {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub zeta: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub price_by_hour: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DroneOverride {
    pub capacity_wh: Option<f64>,
    pub speed_kmph: Option<f64>,
    pub loss_per_min_wh: Option<f64>,
    pub loss_per_km_wh: Option<f64>,
    pub min_exchange_wh: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChargingOverride {
    pub buffer_floor_wh: Option<f64>,
    pub cheap_window: Option<Vec<usize>>,
}

/// Where hourly traces come from.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    File(PathBuf),
    Synthetic(SynthProfile),
}

/// A fully resolved run request.
#[derive(Debug, Clone)]
pub struct RunManifest {
    /// Base configuration; the case id is substituted per requested case.
    pub config: SimulationConfig,
    pub cases: Vec<CaseId>,
    pub trace_source: TraceSource,
    pub out_dir: PathBuf,
    pub success_decay_km: Option<f64>,
}

impl RunManifest {
    /// Station layout for this run: the default ring, with the optional
    /// distance-decay transfer success model applied.
    pub fn topology(&self) -> aerogrid::model::Topology {
        let topo = aerogrid::model::Topology::ring(self.config.n, &self.config.drone_spec);
        match self.success_decay_km {
            Some(decay) => topo.with_distance_decay_success(decay),
            None => topo,
        }
    }
}

/// Command-line overrides applied on top of the manifest file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub cases: Option<Vec<CaseId>>,
    pub out_dir: Option<PathBuf>,
    pub horizon_hours: Option<usize>,
}

impl ManifestFile {
    pub fn load(path: &Path) -> Result<ManifestFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }

    /// Resolve against defaults and command-line overrides.
    pub fn resolve(&self, overrides: &Overrides) -> Result<RunManifest> {
        let defaults = SimulationConfig::default();
        let weights = Weights {
            alpha: self.weights.alpha.unwrap_or(defaults.weights.alpha),
            beta: self.weights.beta.unwrap_or(defaults.weights.beta),
            gamma: self.weights.gamma.unwrap_or(defaults.weights.gamma),
            zeta: self.weights.zeta.unwrap_or(defaults.weights.zeta),
            delta: self.weights.delta.unwrap_or(defaults.weights.delta),
            epsilon: self.weights.epsilon.unwrap_or(defaults.weights.epsilon),
            price_by_hour: self
                .weights
                .price_by_hour
                .clone()
                .unwrap_or(defaults.weights.price_by_hour),
        };
        let drone_spec = DroneSpec {
            capacity_wh: self.drone.capacity_wh.unwrap_or(defaults.drone_spec.capacity_wh),
            speed_kmph: self.drone.speed_kmph.unwrap_or(defaults.drone_spec.speed_kmph),
            loss_per_min_wh: self
                .drone
                .loss_per_min_wh
                .unwrap_or(defaults.drone_spec.loss_per_min_wh),
            loss_per_km_wh: self
                .drone
                .loss_per_km_wh
                .unwrap_or(defaults.drone_spec.loss_per_km_wh),
            min_exchange_wh: self
                .drone
                .min_exchange_wh
                .unwrap_or(defaults.drone_spec.min_exchange_wh),
        };
        let charging_policy = match self.charging_policy.as_deref().unwrap_or("nocturnal-full") {
            "nocturnal-full" => ChargingPolicy::NocturnalFull,
            "solar-weighted" => ChargingPolicy::SolarWeighted {
                cheap_window: self
                    .charging
                    .cheap_window
                    .clone()
                    .unwrap_or_else(|| vec![0, 1, 2, 3, 4, 5])
                    .into_iter()
                    .collect::<BTreeSet<usize>>(),
            },
            "energy-buffer" => ChargingPolicy::EnergyBuffer {
                buffer_floor_wh: self.charging.buffer_floor_wh.unwrap_or(10.0),
            },
            other => bail!("unknown charging policy '{other}'"),
        };

        let config = SimulationConfig {
            n: self.n.unwrap_or(defaults.n),
            m: self.m.unwrap_or(defaults.m),
            weights,
            drone_spec,
            case_id: CaseId::OptimalRedistribution,
            horizon_hours: overrides
                .horizon_hours
                .or(self.horizon_hours)
                .unwrap_or(defaults.horizon_hours),
            charging_policy,
            rng_seed: overrides.seed.or(self.seed).unwrap_or(defaults.rng_seed),
            bs_battery_cap_wh: self.bs_battery_cap_wh,
        };

        let cases: Vec<CaseId> = match (&overrides.cases, &self.cases) {
            (Some(cli), _) => cli.clone(),
            (None, Some(listed)) => listed
                .iter()
                .map(|s| CaseId::from_str(s).map_err(anyhow::Error::from))
                .collect::<Result<_>>()?,
            (None, None) => CaseId::ALL.to_vec(),
        };
        if cases.is_empty() {
            bail!("manifest requests zero cases; list at least one of baseline, static, optimal");
        }

        let out_dir = overrides
            .out_dir
            .clone()
            .or_else(|| self.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));

        let trace_source = match &self.trace_file {
            Some(path) => TraceSource::File(path.clone()),
            None => TraceSource::Synthetic(self.profile.clone()),
        };

        if let Some(decay) = self.success_decay_km {
            let usable = decay.is_finite() && decay > 0.0;
            if !usable {
                bail!("success_decay_km must be > 0, got {decay}");
            }
        }
        config.validate().map_err(anyhow::Error::from)?;
        Ok(RunManifest {
            config,
            cases,
            trace_source,
            out_dir,
            success_decay_km: self.success_decay_km,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_manifest_resolves_to_defaults() {
        let mf: ManifestFile = toml::from_str("").unwrap();
        let run = mf.resolve(&Overrides::default()).unwrap();
        assert_eq!(run.config.n, 5);
        assert_eq!(run.config.m, 10);
        assert_eq!(run.config.rng_seed, 7);
        assert_eq!(run.cases, CaseId::ALL.to_vec());
        assert!(matches!(run.trace_source, TraceSource::Synthetic(_)));
    }

    #[test]
    fn manifest_keys_override_defaults() {
        let text = r#"
            n = 3
            seed = 11
            horizon_hours = 240
            cases = ["optimal"]
            charging_policy = "energy-buffer"

            [weights]
            alpha = 0.9

            [charging]
            buffer_floor_wh = 25.0
        "#;
        let mf: ManifestFile = toml::from_str(text).unwrap();
        let run = mf.resolve(&Overrides::default()).unwrap();
        assert_eq!(run.config.n, 3);
        assert_eq!(run.config.rng_seed, 11);
        assert_eq!(run.config.weights.alpha, 0.9);
        assert_eq!(run.config.weights.beta, 0.5);
        assert_eq!(run.cases, vec![CaseId::OptimalRedistribution]);
        assert!(matches!(
            run.config.charging_policy,
            ChargingPolicy::EnergyBuffer { buffer_floor_wh } if buffer_floor_wh == 25.0
        ));
    }

    #[test]
    fn zero_cases_is_rejected() {
        let mf: ManifestFile = toml::from_str(r#"cases = []"#).unwrap();
        let err = mf.resolve(&Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("zero cases"));
    }

    #[test]
    fn cli_overrides_win() {
        let mf: ManifestFile = toml::from_str("seed = 3\nhorizon_hours = 100").unwrap();
        let overrides = Overrides {
            seed: Some(9),
            horizon_hours: Some(48),
            cases: Some(vec![CaseId::Baseline]),
            out_dir: Some(PathBuf::from("elsewhere")),
        };
        let run = mf.resolve(&overrides).unwrap();
        assert_eq!(run.config.rng_seed, 9);
        assert_eq!(run.config.horizon_hours, 48);
        assert_eq!(run.cases, vec![CaseId::Baseline]);
        assert_eq!(run.out_dir, PathBuf::from("elsewhere"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<ManifestFile>("bogus_key = 1").is_err());
    }
}
