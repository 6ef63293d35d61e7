//! Scenario description, loaded from TOML. Unknown keys are rejected.
//!
//! ```toml
//! topology = "sprint"          # built-in name or path to a topology file
//! interest_rate = 100.0        # interests per second per consumer
//! data_payload_bits = 8200
//! interest_bits = 320
//! duration_s = 60.0            # per episode
//! episodes = 50
//! seed = 1
//! strategy = "idqf"            # or "best_route"
//! agents = [3]                 # router ids running the agent (idqf only)
//! retx_timeout_s = 1.0
//! pit_lifetime_s = 2.0
//! cs_capacity = 0
//! warmup_s = 20.0
//! replicates = 5
//!
//! [idqf]
//! delta_t_ms = 100
//! retx_mode = "agent_way"      # or "br_way"
//! features = ["avg_delay", "satisfaction_ratio"]
//! reward = "rw"                # or "rw1"
//! top_k_faces = 2
//!
//! [dqn]
//! lr = 0.001
//! # see DqnHyper for the full key set
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::rl::{DqnHyper, Feature, FeatureSet};
use crate::sim::SimTime;
use crate::strategy::{IdqfConfig, RetxMode, RewardKind};
use crate::topology::{self, TopologySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    BestRoute,
    Idqf,
}

impl StrategyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::BestRoute => "best_route",
            StrategyKind::Idqf => "idqf",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdqfSection {
    pub delta_t_ms: u64,
    pub retx_mode: RetxMode,
    pub features: Vec<Feature>,
    pub reward: RewardKind,
    pub top_k_faces: usize,
}

impl Default for IdqfSection {
    fn default() -> Self {
        Self {
            delta_t_ms: 100,
            retx_mode: RetxMode::AgentWay,
            features: vec![Feature::AvgDelay, Feature::SatisfactionRatio],
            reward: RewardKind::Rw,
            top_k_faces: 2,
        }
    }
}

impl IdqfSection {
    pub fn to_config(&self) -> IdqfConfig {
        IdqfConfig {
            delta_t: SimTime::from_millis(self.delta_t_ms),
            retx_mode: self.retx_mode,
            features: FeatureSet::from_features(&self.features),
            reward: self.reward,
            top_k_faces: self.top_k_faces,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub topology: String,
    pub interest_rate: f64,
    pub data_payload_bits: u64,
    pub interest_bits: u64,
    pub duration_s: f64,
    pub episodes: usize,
    pub seed: u64,
    pub strategy: StrategyKind,
    pub agents: Vec<usize>,
    pub retx_timeout_s: f64,
    pub pit_lifetime_s: f64,
    pub cs_capacity: usize,
    pub warmup_s: f64,
    pub replicates: usize,
    pub idqf: IdqfSection,
    pub dqn: DqnHyper,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            topology: "sprint".into(),
            interest_rate: 100.0,
            data_payload_bits: crate::ndn::DEFAULT_DATA_BITS,
            interest_bits: crate::ndn::DEFAULT_INTEREST_BITS,
            duration_s: 60.0,
            episodes: 50,
            seed: 1,
            strategy: StrategyKind::Idqf,
            agents: vec![topology::SPRINT_PRIMARY_AGENT],
            retx_timeout_s: 1.0,
            pit_lifetime_s: 2.0,
            cs_capacity: 0,
            warmup_s: 20.0,
            replicates: 5,
            idqf: IdqfSection::default(),
            dqn: DqnHyper::default(),
        }
    }
}

fn cfg(msg: impl Into<String>) -> SimError {
    SimError::Config(msg.into())
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        toml::from_str(text).map_err(|e| cfg(e.to_string()))
    }

    /// Loads a scenario; a relative topology path is resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = fs::read_to_string(path).map_err(|e| cfg(format!("cannot read scenario {}: {e}", path.display())))?;
        let mut c = Self::from_toml(&text).map_err(|e| match e {
            SimError::Config(m) => cfg(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if c.topology != "sprint" && Path::new(&c.topology).is_relative() {
            if let Some(dir) = path.parent() {
                c.topology = dir.join(&c.topology).to_string_lossy().into_owned();
            }
        }
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn load_topology(&self) -> Result<TopologySpec, SimError> {
        if self.topology == "sprint" {
            return Ok(topology::sprint());
        }
        let path = PathBuf::from(&self.topology);
        let text = fs::read_to_string(&path).map_err(|e| cfg(format!("cannot read topology {}: {e}", path.display())))?;
        topology::parse_topology(&text).map_err(|e| cfg(format!("{}: {e}", path.display())))
    }

    pub fn duration(&self) -> SimTime {
        SimTime::from_secs_f64(self.duration_s)
    }

    pub fn warmup(&self) -> SimTime {
        SimTime::from_secs_f64(self.warmup_s)
    }

    pub fn retx_timeout(&self) -> SimTime {
        SimTime::from_secs_f64(self.retx_timeout_s)
    }

    pub fn pit_lifetime(&self) -> SimTime {
        SimTime::from_secs_f64(self.pit_lifetime_s)
    }

    /// Nodes whose strategy is the learning agent.
    pub fn agent_nodes(&self) -> &[usize] {
        match self.strategy {
            StrategyKind::Idqf => &self.agents,
            StrategyKind::BestRoute => &[],
        }
    }

    pub fn validate(&self, topo: &TopologySpec) -> Result<(), SimError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(cfg(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("interest_rate", self.interest_rate)?;
        positive("duration_s", self.duration_s)?;
        positive("retx_timeout_s", self.retx_timeout_s)?;
        positive("pit_lifetime_s", self.pit_lifetime_s)?;
        if !(self.warmup_s.is_finite() && self.warmup_s >= 0.0 && self.warmup_s < self.duration_s) {
            return Err(cfg(format!(
                "warmup_s must be in [0, duration_s), got {} with duration {}",
                self.warmup_s, self.duration_s
            )));
        }
        if self.data_payload_bits == 0 || self.interest_bits == 0 {
            return Err(cfg("packet sizes must be positive"));
        }
        if self.episodes == 0 {
            return Err(cfg("episodes must be at least 1"));
        }
        if self.replicates == 0 {
            return Err(cfg("replicates must be at least 1"));
        }
        topo.validate().map_err(|e| cfg(e.to_string()))?;
        if topo.consumers.is_empty() || topo.producers.is_empty() {
            return Err(cfg("scenario needs at least one consumer and one producer"));
        }
        if !topo.is_connected() {
            return Err(cfg("topology is not connected"));
        }
        if topo.node_count() < 2 {
            return Err(cfg("topology needs at least two routers for traffic to cross a link"));
        }
        if self.strategy == StrategyKind::Idqf {
            if self.agents.is_empty() {
                return Err(cfg("idqf strategy needs at least one agent node"));
            }
            self.idqf.to_config().validate().map_err(cfg)?;
            self.dqn.validate().map_err(cfg)?;
            if self.idqf.delta_t_ms == 0 {
                return Err(cfg("delta_t_ms must be positive"));
            }
            let degree = |v: usize| topo.neighbors(v).len();
            let mut seen = std::collections::BTreeSet::new();
            for &a in &self.agents {
                if a >= topo.node_count() {
                    return Err(cfg(format!("agent node {a} does not exist")));
                }
                if !seen.insert(a) {
                    return Err(cfg(format!("agent node {a} listed twice")));
                }
                if degree(a) < self.idqf.top_k_faces {
                    return Err(cfg(format!(
                        "agent node {a} has {} router faces, fewer than top_k_faces = {}",
                        degree(a),
                        self.idqf.top_k_faces
                    )));
                }
            }
        }
        Ok(())
    }
}
