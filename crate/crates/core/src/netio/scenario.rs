use std::path::{Path, PathBuf};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::parser::parse_network;
use crate::dynamics::{OutputGrid, RateSchedule, SimOptions};
use crate::error::{Error, Result};
use crate::netcore::ReactionNetwork;

/// Run description read from a `.json` scenario file. Relative paths are
/// resolved against the scenario file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Path of the `.crn` network file.
    pub network: PathBuf,
    pub x0: Vec<f64>,
    /// Reference state x̃ for divergences and Birch projections.
    #[serde(default)]
    pub x_ref: Option<Vec<f64>>,
    /// Origin x° of the KL thermodynamic function.
    #[serde(default)]
    pub x_origin: Option<Vec<f64>>,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Number of uniformly spaced output samples, both ends included.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_atol")]
    pub atol: f64,
    /// Certificate and classification tolerance.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// State at which `decompose` and `classify` evaluate (defaults to x0).
    #[serde(default)]
    pub state: Option<Vec<f64>>,
    /// Flux to decompose (defaults to the mass-action flux at `state`).
    #[serde(default)]
    pub flux: Option<Vec<f64>>,
    /// Tabulated rate schedule JSON for time-dependent simulation.
    #[serde(default)]
    pub schedule: Option<PathBuf>,
    /// Random Pythagoras triples checked by `equilibrium`.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_t_end() -> f64 {
    10.0
}
fn default_grid() -> usize {
    201
}
fn default_rtol() -> f64 {
    1e-8
}
fn default_atol() -> f64 {
    1e-10
}
fn default_tol() -> f64 {
    1e-8
}
fn default_samples() -> usize {
    16
}

impl ScenarioConfig {
    pub fn new(network: impl Into<PathBuf>, x0: Vec<f64>) -> Self {
        Self {
            network: network.into(),
            x0,
            x_ref: None,
            x_origin: None,
            t_end: default_t_end(),
            grid: default_grid(),
            rtol: default_rtol(),
            atol: default_atol(),
            tol: default_tol(),
            state: None,
            flux: None,
            schedule: None,
            samples: default_samples(),
        }
    }
}

/// A validated scenario with its network loaded.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub network: ReactionNetwork,
    /// Schedule loaded from `config.schedule`.
    pub schedule: Option<RateSchedule>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        let config: ScenarioConfig =
            serde_json::from_str(&text).map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let net_path = resolve(base, &config.network);
        let net_text = std::fs::read_to_string(&net_path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", net_path.display())))?;
        let network = parse_network(&net_text).map_err(|e| match e {
            Error::Parse { span, message } => {
                Error::Scenario(format!("{}:{span}: {message}", net_path.display()))
            }
            other => other,
        })?;
        let schedule = match &config.schedule {
            Some(p) => {
                let sp = resolve(base, p);
                let text = std::fs::read_to_string(&sp)
                    .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", sp.display())))?;
                Some(super::emit::schedule_from_json(&text)?)
            }
            None => None,
        };
        Self::from_parts(config, network, schedule)
    }

    pub fn from_parts(config: ScenarioConfig, network: ReactionNetwork, schedule: Option<RateSchedule>) -> Result<Self> {
        let s = Self {
            config,
            network,
            schedule,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.config;
        let n = self.network.n_species();
        let vector = |name: &str, v: &[f64], len: usize| -> Result<()> {
            if v.len() != len {
                return Err(Error::Scenario(format!("`{name}` has length {} but expected {len}", v.len())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Scenario(format!("`{name}` has non-finite entries")));
            }
            Ok(())
        };
        let positive = |name: &str, v: &[f64]| -> Result<()> {
            vector(name, v, n)?;
            if v.iter().any(|&x| x <= 0.0) {
                return Err(Error::Scenario(format!("`{name}` must be strictly positive")));
            }
            Ok(())
        };
        positive("x0", &c.x0)?;
        for (name, v) in [("x_ref", &c.x_ref), ("x_origin", &c.x_origin), ("state", &c.state)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if let Some(j) = &c.flux {
            vector("flux", j, self.network.n_edges())?;
        }
        for (name, v) in [("t_end", c.t_end), ("rtol", c.rtol), ("atol", c.atol), ("tol", c.tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Scenario(format!("`{name}` must be positive, got {v}")));
            }
        }
        if c.grid < 2 {
            return Err(Error::Scenario("`grid` needs at least two samples".into()));
        }
        if let Some(s) = &self.schedule {
            if s.n_edges() != self.network.n_edges() {
                return Err(Error::Scenario(format!(
                    "schedule has {} edges but the network has {}",
                    s.n_edges(),
                    self.network.n_edges()
                )));
            }
        }
        Ok(())
    }

    pub fn x0(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.config.x0)
    }

    pub fn x_ref(&self) -> Option<DVector<f64>> {
        self.config.x_ref.as_deref().map(DVector::from_column_slice)
    }

    pub fn state(&self) -> DVector<f64> {
        self.config.state.as_deref().map_or_else(|| self.x0(), DVector::from_column_slice)
    }

    pub fn sim_options(&self) -> SimOptions {
        let mut o = SimOptions::default()
            .with_tolerances(self.config.rtol, self.config.atol)
            .with_grid(OutputGrid::Uniform(self.config.grid));
        o.x_ref = self.x_ref();
        o
    }

    /// Replaces one rate constant, addressed as `<label>.kf` or `<label>.kr`.
    pub fn set_rate(&mut self, key: &str, value: f64) -> Result<()> {
        let (label, which) = key
            .rsplit_once('.')
            .ok_or_else(|| Error::Scenario(format!("rate key `{key}` must look like <label>.kf or <label>.kr")))?;
        let e = self
            .network
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Scenario(format!("unknown reaction label `{label}`")))?;
        let mut kp = self.network.kplus().to_vec();
        let mut km = self.network.kminus().to_vec();
        match which {
            "kf" => kp[e] = value,
            "kr" => km[e] = value,
            _ => return Err(Error::Scenario(format!("rate key `{key}` must end in .kf or .kr"))),
        }
        self.network = self.network.with_rates(kp, km)?;
        Ok(())
    }
}
