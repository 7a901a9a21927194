//! Experiment configuration: strict JSON in, resolved snapshot out.
//!
//! Unknown keys are rejected everywhere (`deny_unknown_fields`), command
//! line flags override config keys, and the post-override ("resolved")
//! config is persisted next to the outputs so a run can always be
//! reproduced from its artifacts alone.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::exact::DEFAULT_ENUMERATION_CAP;
use crate::graphs::{Family, Graph, GraphError};
use crate::model::Couplings;
use crate::paperchecks::Engine;

use super::CliError;

/// Environment variable consulted for the default output directory when
/// neither `--out` nor the config's `out` key is given.
pub const OUT_DIR_ENV: &str = "ISING_GRAPHS_OUT";

/// Fallback output directory when nothing else names one.
pub const OUT_DIR_DEFAULT: &str = "ising-graphs-out";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: FamilySpec,
    pub couplings: CouplingsSpec,
    /// β values, in run order. Commands that interpolate on the grid
    /// (betac) additionally require it to be increasing.
    #[serde(default)]
    pub beta_grid: Vec<f64>,
    /// External field; only magnetization sweeps consume it.
    #[serde(default)]
    pub h: f64,
    #[serde(default)]
    pub boundary: BoundarySpec,
    pub engine: EngineSpec,
    /// Master seed; every Monte Carlo task derives its own stream from
    /// (seed, task key), so runs are reproducible at any parallelism.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<C2Section>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betac: Option<BetaCSection>,
}

/// Graph family plus every shape parameter, so a config names one
/// concrete graph. Size-sweeping commands (sweep, betac) reuse the family
/// kind and override the size member per task.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Torus { d: u32, l: u32 },
    Box { d: u32, l: u32 },
    Tree { degree: u32, radius: u32 },
    Lamplighter { radius: u32 },
}

impl FamilySpec {
    pub fn kind(&self) -> Family {
        match *self {
            FamilySpec::Torus { d, .. } => Family::Torus { d },
            FamilySpec::Box { d, .. } => Family::Box { d },
            FamilySpec::Tree { degree, .. } => Family::Tree { degree },
            FamilySpec::Lamplighter { .. } => Family::Lamplighter,
        }
    }

    /// The size member `Family::build` consumes: side length for
    /// torus/box, radius for the ball families.
    pub fn size(&self) -> u32 {
        match *self {
            FamilySpec::Torus { l, .. } | FamilySpec::Box { l, .. } => l,
            FamilySpec::Tree { radius, .. } | FamilySpec::Lamplighter { radius } => radius,
        }
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        self.kind().build(self.size())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingsSpec {
    NearestNeighbor { j: f64 },
    ByDistance { entries: Vec<DistanceCoupling> },
    ByEdgeOrbit { entries: Vec<OrbitCoupling> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceCoupling {
    pub distance: u32,
    pub j: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitCoupling {
    /// Unordered label pair identifying the edge orbit.
    pub a: u32,
    pub b: u32,
    pub j: f64,
}

impl CouplingsSpec {
    pub fn to_couplings(&self) -> Couplings {
        match self {
            CouplingsSpec::NearestNeighbor { j } => Couplings::nearest_neighbor(*j),
            CouplingsSpec::ByDistance { entries } => Couplings::ByDistance(
                entries.iter().map(|e| (e.distance, e.j)).collect(),
            ),
            CouplingsSpec::ByEdgeOrbit { entries } => {
                let mut map = BTreeMap::new();
                for e in entries {
                    map.insert((e.a.min(e.b), e.a.max(e.b)), e.j);
                }
                Couplings::ByEdgeOrbit(map)
            }
        }
    }

    /// The single nearest-neighbor J, where the commands that need one
    /// (betac) insist on that shape.
    pub fn nearest_neighbor_j(&self) -> Option<f64> {
        match self {
            CouplingsSpec::NearestNeighbor { j } => Some(*j),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundarySpec {
    #[default]
    Free,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EngineSpec {
    Exact {
        #[serde(default = "default_cap")]
        cap: usize,
    },
    Mc {
        sweeps: u64,
    },
}

fn default_cap() -> usize {
    DEFAULT_ENUMERATION_CAP
}

impl EngineSpec {
    pub fn to_engine(&self, seed: u64) -> Engine {
        match *self {
            EngineSpec::Exact { cap } => Engine::Exact { cap },
            EngineSpec::Mc { sweeps } => Engine::Mc { sweeps, seed },
        }
    }

    pub fn mc_sweeps(&self) -> Option<u64> {
        match *self {
            EngineSpec::Mc { sweeps } => Some(sweeps),
            EngineSpec::Exact { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaSection {
    /// Origin vertex; defaults to the graph's distinguished origin.
    #[serde(default)]
    pub origin: Option<u32>,
    pub n_max: u32,
    /// Emit an SVG polyline of κ(n)^{1/n} per β.
    #[serde(default)]
    pub svg: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct C2Section {
    /// Base witness x₁; defaults to the graph's origin.
    #[serde(default)]
    pub x1: Option<u32>,
    /// Radius base: x_n sits on the sphere of radius k^n.
    pub k: u32,
    /// Number of witnesses N (sets K_1 ⊂ … ⊂ K_N).
    pub n: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepObservable {
    #[default]
    Binder,
    Magnetization,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Size member per task (side length or radius, per family).
    pub sizes: Vec<u32>,
    #[serde(default)]
    pub observable: SweepObservable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaCSection {
    pub sizes: Vec<u32>,
}

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
            // serde_json reports line/column for both syntax and schema
            // (unknown key, wrong type, bad tag) errors
            CliError::Config(format!("{}: {e}", path.display()))
        })?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        for &beta in &self.beta_grid {
            if !beta.is_finite() || beta < 0.0 {
                return Err(CliError::Config(format!(
                    "beta_grid entries must be finite and >= 0, got {beta}"
                )));
            }
        }
        if !self.h.is_finite() {
            return Err(CliError::Config("h must be finite".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Config("jobs must be >= 1".into()));
        }
        Ok(())
    }

    /// Applies flag overrides and fixes the output directory
    /// (flag > config key > $ISING_GRAPHS_OUT > default).
    pub fn resolve(mut self, overrides: &Overrides) -> Self {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(jobs) = overrides.jobs {
            self.jobs = Some(jobs);
        }
        if let Some(out) = &overrides.out {
            self.out = Some(out.display().to_string());
        }
        if self.out.is_none() {
            self.out = Some(
                std::env::var(OUT_DIR_ENV).unwrap_or_else(|_| OUT_DIR_DEFAULT.to_string()),
            );
        }
        self
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.out.as_deref().unwrap_or(OUT_DIR_DEFAULT))
    }

    /// The canonical serialized form persisted as `config.resolved.json`.
    pub fn emit(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("config serializes");
        text.push('\n');
        text
    }

    pub fn require_nonempty_grid(&self) -> Result<(), CliError> {
        if self.beta_grid.is_empty() {
            return Err(CliError::Config("beta_grid must not be empty".into()));
        }
        Ok(())
    }

    pub fn require_section<'a, T>(
        section: &'a Option<T>,
        name: &str,
    ) -> Result<&'a T, CliError> {
        section.as_ref().ok_or_else(|| {
            CliError::Config(format!("this command needs the \"{name}\" config section"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            family: FamilySpec::Tree {
                degree: 3,
                radius: 6,
            },
            couplings: CouplingsSpec::NearestNeighbor { j: 1.0 },
            beta_grid: vec![0.1, 0.2, 0.3],
            h: 0.0,
            boundary: BoundarySpec::Free,
            engine: EngineSpec::Exact { cap: 24 },
            seed: 7,
            jobs: Some(2),
            out: Some("out".into()),
            kappa: Some(KappaSection {
                origin: None,
                n_max: 4,
                svg: false,
            }),
            c2: None,
            sweep: None,
            betac: None,
        }
    }

    #[test]
    fn config_round_trips() {
        let config = sample();
        let parsed: ExperimentConfig = serde_json::from_str(&config.emit()).unwrap();
        assert_eq!(parsed, config);
    }

    #[test]
    fn unknown_keys_with_location_diagnostics() {
        let bad = r#"{
  "family": {"name": "tree", "degree": 3, "radius": 6, "flavor": "oak"},
  "couplings": {"type": "nearest_neighbor", "j": 1.0},
  "engine": {"type": "exact"}
}"#;
        let err = serde_json::from_str::<ExperimentConfig>(bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("flavor"), "{msg}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn invalid_family_name_is_diagnosed() {
        let bad = r#"{
  "family": {"name": "hypercube", "d": 4},
  "couplings": {"type": "nearest_neighbor", "j": 1.0},
  "engine": {"type": "exact"}
}"#;
        let err = serde_json::from_str::<ExperimentConfig>(bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("hypercube") || msg.contains("variant"), "{msg}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn overrides_win_and_env_fills_out_dir() {
        let config = sample().resolve(&Overrides {
            seed: Some(99),
            jobs: None,
            out: Some(PathBuf::from("elsewhere")),
        });
        assert_eq!(config.seed, 99);
        assert_eq!(config.jobs, Some(2));
        assert_eq!(config.out.as_deref(), Some("elsewhere"));
    }

    #[test]
    fn couplings_convert() {
        let by_orbit = CouplingsSpec::ByEdgeOrbit {
            entries: vec![OrbitCoupling { a: 1, b: 0, j: 0.5 }],
        };
        match by_orbit.to_couplings() {
            Couplings::ByEdgeOrbit(map) => assert_eq!(map[&(0, 1)], 0.5),
            other => panic!("wrong variant: {other:?}"),
        }
        assert_eq!(
            CouplingsSpec::NearestNeighbor { j: 2.0 }.nearest_neighbor_j(),
            Some(2.0)
        );
    }
}
