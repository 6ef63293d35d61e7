//! Text checkpoint format for trained agents.
//!
//! ```text
//! IDQF-CHECKPOINT v1
//! agents <count>
//! agent <node-id>
//! dims <input> <hidden> <output>
//! features <name>[,<name>...]
//! top_k <k>
//! decisions <agent decisions taken so far>
//! hyper <key>=<value> ...
//! w1 <hidden*input values, row-major>
//! b1 <hidden values>
//! w2 <output*hidden values, row-major>
//! b2 <output values>
//! end
//! ```
//!
//! The `agent ... end` block repeats once per agent, ordered by node id.
//! Floats use Rust's shortest round-trip formatting, so write-then-read is lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::dqn::DqnHyper;
use super::features::Feature;
use super::mlp::Mlp;
use crate::error::SimError;

pub const MAGIC: &str = "IDQF-CHECKPOINT v1";

#[derive(Debug, Clone, PartialEq)]
pub struct AgentCheckpoint {
    pub node: usize,
    pub features: Vec<Feature>,
    pub top_k: usize,
    pub decisions: u64,
    pub hyper: DqnHyper,
    pub net: Mlp,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Checkpoint {
    pub agents: Vec<AgentCheckpoint>,
}

fn err(msg: impl Into<String>) -> SimError {
    SimError::Checkpoint(msg.into())
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

fn hyper_line(h: &DqnHyper) -> String {
    format!(
        "lr={:?} gamma={:?} eps_start={:?} eps_min={:?} decay_rate={:?} batch_size={} \
         replay_capacity={} penalty_c_s={:?} cm={:?} r_thrs={} q_update_rate={:?} target_sync={}",
        h.lr,
        h.gamma,
        h.eps_start,
        h.eps_min,
        h.decay_rate,
        h.batch_size,
        h.replay_capacity,
        h.penalty_c_s,
        h.cm,
        h.r_thrs,
        h.q_update_rate,
        h.target_sync
    )
}

fn parse_hyper(fields: &[&str]) -> Result<DqnHyper, SimError> {
    let mut h = DqnHyper::default();
    for kv in fields {
        let (k, v) = kv.split_once('=').ok_or_else(|| err(format!("bad hyper field {kv}")))?;
        let f = || v.parse::<f64>().map_err(|_| err(format!("bad value for {k}: {v}")));
        let u = || v.parse::<u64>().map_err(|_| err(format!("bad value for {k}: {v}")));
        match k {
            "lr" => h.lr = f()?,
            "gamma" => h.gamma = f()?,
            "eps_start" => h.eps_start = f()?,
            "eps_min" => h.eps_min = f()?,
            "decay_rate" => h.decay_rate = f()?,
            "batch_size" => h.batch_size = u()? as usize,
            "replay_capacity" => h.replay_capacity = u()? as usize,
            "penalty_c_s" => h.penalty_c_s = f()?,
            "cm" => h.cm = f()?,
            "r_thrs" => h.r_thrs = u()?,
            "q_update_rate" => h.q_update_rate = f()?,
            "target_sync" => h.target_sync = u()?,
            other => return Err(err(format!("unknown hyper key {other}"))),
        }
    }
    Ok(h)
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{MAGIC}").unwrap();
        writeln!(s, "agents {}", self.agents.len()).unwrap();
        for a in &self.agents {
            let feats: Vec<&str> = a.features.iter().map(|f| f.as_str()).collect();
            writeln!(s, "agent {}", a.node).unwrap();
            writeln!(s, "dims {} {} {}", a.net.input, a.net.hidden, a.net.output).unwrap();
            writeln!(s, "features {}", feats.join(",")).unwrap();
            writeln!(s, "top_k {}", a.top_k).unwrap();
            writeln!(s, "decisions {}", a.decisions).unwrap();
            writeln!(s, "hyper {}", hyper_line(&a.hyper)).unwrap();
            writeln!(s, "w1 {}", join(&a.net.w1)).unwrap();
            writeln!(s, "b1 {}", join(&a.net.b1)).unwrap();
            writeln!(s, "w2 {}", join(&a.net.w2)).unwrap();
            writeln!(s, "b2 {}", join(&a.net.b2)).unwrap();
            writeln!(s, "end").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, SimError> {
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err(err(format!("missing header {MAGIC:?}")));
        }
        let mut next = |key: &str| -> Result<Vec<&str>, SimError> {
            let line = lines.next().ok_or_else(|| err(format!("unexpected end, expected {key}")))?;
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some(k) if k == key => Ok(parts.collect()),
                got => Err(err(format!("expected {key}, found {got:?}"))),
            }
        };
        let single = |v: Vec<&str>, key: &str| -> Result<u64, SimError> {
            match v.as_slice() {
                [x] => x.parse().map_err(|_| err(format!("bad {key}: {x}"))),
                _ => Err(err(format!("{key} takes one value"))),
            }
        };
        let floats = |v: Vec<&str>, n: usize, key: &str| -> Result<Vec<f64>, SimError> {
            let out: Result<Vec<f64>, _> = v.iter().map(|x| x.parse::<f64>()).collect();
            let out = out.map_err(|_| err(format!("bad float in {key}")))?;
            if out.len() != n {
                return Err(err(format!("{key}: expected {n} values, found {}", out.len())));
            }
            Ok(out)
        };

        let count = single(next("agents")?, "agents")? as usize;
        let mut agents = Vec::with_capacity(count);
        for _ in 0..count {
            let node = single(next("agent")?, "agent")? as usize;
            let dims: Vec<usize> = next("dims")?
                .iter()
                .map(|d| d.parse().map_err(|_| err(format!("bad dim {d}"))))
                .collect::<Result<_, _>>()?;
            let [input, hidden, output] = dims[..] else {
                return Err(err("dims takes three values"));
            };
            let features = match next("features")?.as_slice() {
                [list] => list
                    .split(',')
                    .map(|f| Feature::parse(f).ok_or_else(|| err(format!("unknown feature {f}"))))
                    .collect::<Result<Vec<_>, _>>()?,
                _ => return Err(err("features takes one comma-separated list")),
            };
            let top_k = single(next("top_k")?, "top_k")? as usize;
            let decisions = single(next("decisions")?, "decisions")?;
            let hyper = parse_hyper(&next("hyper")?)?;
            let mut net = Mlp::zeros(input, hidden, output);
            net.w1 = floats(next("w1")?, hidden * input, "w1")?;
            net.b1 = floats(next("b1")?, hidden, "b1")?;
            net.w2 = floats(next("w2")?, output * hidden, "w2")?;
            net.b2 = floats(next("b2")?, output, "b2")?;
            next("end")?;
            if top_k != output {
                return Err(err(format!("agent {node}: top_k {top_k} != output dim {output}")));
            }
            agents.push(AgentCheckpoint {
                node,
                features,
                top_k,
                decisions,
                hyper,
                net,
            });
        }
        Ok(Checkpoint { agents })
    }

    pub fn save(&self, path: &Path) -> Result<(), SimError> {
        fs::write(path, self.to_text()).map_err(|e| SimError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = fs::read_to_string(path).map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn agent(&self, node: usize) -> Option<&AgentCheckpoint> {
        self.agents.iter().find(|a| a.node == node)
    }
}
