//! Agent-driven forwarding: each decision epoch the node's Q-network picks one
//! face, which then carries every new interest until the next decision.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::best_route::br_choose;
use crate::error::DivergenceError;
use crate::ndn::{FaceId, FibEntry, OutRecord, PitEntry};
use crate::rl::{
    act, build_features, epsilon_at, reward_rw, reward_rw1, train_on_batch, train_step, AgentCheckpoint,
    DqnHyper, EpochTotals, Experience, FaceObservation, FeatureSet, FeatureVector, Mlp, ReplayBuffer,
    DEFAULT_HIDDEN,
};
use crate::sim::{substream, SimRng, SimTime, Stream};

/// Number of most recent RTTs averaged into the delay feature.
pub const RECENT_DELAYS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetxMode {
    /// Retransmissions are forwarded by best-route rules.
    BrWay,
    /// Retransmissions follow the agent's current face like new interests.
    AgentWay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardKind {
    Rw,
    Rw1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdqfConfig {
    pub delta_t: SimTime,
    pub retx_mode: RetxMode,
    pub features: FeatureSet,
    pub reward: RewardKind,
    pub top_k_faces: usize,
}

impl Default for IdqfConfig {
    fn default() -> Self {
        Self {
            delta_t: SimTime::from_millis(100),
            retx_mode: RetxMode::AgentWay,
            features: FeatureSet {
                avg_delay: true,
                satisfaction_ratio: true,
                ..Default::default()
            },
            reward: RewardKind::Rw,
            top_k_faces: 2,
        }
    }
}

impl IdqfConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.delta_t == SimTime::ZERO {
            return Err("delta_t must be positive".into());
        }
        if self.top_k_faces < 2 {
            return Err("top_k_faces must be at least 2".into());
        }
        if self.features.count() == 0 {
            return Err("at least one state feature must be enabled".into());
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.features.dimension(self.top_k_faces)
    }
}

/// Counters for one decision epoch. Face-indexed vectors use FIB rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochStats {
    pub epoch_start: SimTime,
    /// Rank of the face chosen for this epoch.
    pub chosen: usize,
    /// RTTs of Data received on the chosen face.
    pub rtt_samples: Vec<SimTime>,
    pub retransmitted: u64,
    pub new: u64,
    /// Retransmissions split by the face of their original transmission.
    pub retx_by_origin: Vec<u64>,
    /// Data received this epoch for interests forwarded this epoch.
    pub satisfied: Vec<u64>,
    pub forwarded: Vec<u64>,
}

impl EpochStats {
    pub fn new(faces: usize, epoch_start: SimTime, chosen: usize) -> Self {
        Self {
            epoch_start,
            chosen,
            rtt_samples: Vec::new(),
            retransmitted: 0,
            new: 0,
            retx_by_origin: vec![0; faces],
            satisfied: vec![0; faces],
            forwarded: vec![0; faces],
        }
    }

    pub fn data_count(&self) -> usize {
        self.rtt_samples.len()
    }

    fn mean_rtt_s(&self) -> f64 {
        if self.rtt_samples.is_empty() {
            0.0
        } else {
            self.rtt_samples.iter().map(|t| t.as_secs_f64()).sum::<f64>() / self.rtt_samples.len() as f64
        }
    }
}

/// A router's learning agent. Network, replay buffer, exploration counter and
/// RNG persist across episodes; everything else is reset by [`begin_episode`].
///
/// [`begin_episode`]: IdqfAgent::begin_episode
#[derive(Debug, Clone)]
pub struct IdqfAgent {
    pub node: usize,
    config: IdqfConfig,
    hyper: DqnHyper,
    net: Mlp,
    target: Option<Mlp>,
    buffer: ReplayBuffer,
    rng: SimRng,
    decisions: u64,
    train_steps: u64,
    learning: bool,

    faces: Vec<FaceId>,
    stats: EpochStats,
    recent: Vec<VecDeque<SimTime>>,
    satisfaction: Vec<f64>,
    current: Option<(FeatureVector, usize)>,
    epoch_id: u64,
    guard: Option<(u64, SimTime)>,
    episode_reward: f64,
    episode_decisions: u64,
    episode_usage: Vec<u64>,
    episode_rewards: Vec<f64>,
    last_loss: Option<f64>,
}

impl IdqfAgent {
    pub fn new(node: usize, config: IdqfConfig, hyper: DqnHyper, seed: u64) -> Self {
        let mut rng = substream(seed, Stream::Agent, node as u64);
        let net = Mlp::glorot(config.input_dim(), DEFAULT_HIDDEN, config.top_k_faces, &mut rng);
        Self::with_net(node, config, hyper, net, rng)
    }

    fn with_net(node: usize, config: IdqfConfig, hyper: DqnHyper, net: Mlp, rng: SimRng) -> Self {
        let k = config.top_k_faces;
        Self {
            node,
            target: (hyper.target_sync > 0).then(|| net.clone()),
            buffer: ReplayBuffer::new(hyper.replay_capacity),
            config,
            hyper,
            net,
            rng,
            decisions: 0,
            train_steps: 0,
            learning: true,
            faces: Vec::new(),
            stats: EpochStats::new(k, SimTime::ZERO, 0),
            recent: vec![VecDeque::new(); k],
            satisfaction: vec![1.0; k],
            current: None,
            epoch_id: 0,
            guard: None,
            episode_reward: 0.0,
            episode_decisions: 0,
            episode_usage: vec![0; k],
            episode_rewards: Vec::new(),
            last_loss: None,
        }
    }

    /// Restores a trained agent; `config` must describe the same network shape.
    pub fn from_checkpoint(ckpt: &AgentCheckpoint, config: IdqfConfig, seed: u64) -> Result<Self, String> {
        if ckpt.net.input != config.input_dim() || ckpt.net.output != config.top_k_faces {
            return Err(format!(
                "checkpoint for node {} has dims {}->{} but the scenario expects {}->{}",
                ckpt.node,
                ckpt.net.input,
                ckpt.net.output,
                config.input_dim(),
                config.top_k_faces
            ));
        }
        if FeatureSet::from_features(&ckpt.features) != config.features {
            return Err(format!("checkpoint for node {} uses different state features", ckpt.node));
        }
        let rng = substream(seed, Stream::Agent, ckpt.node as u64);
        let mut agent = Self::with_net(ckpt.node, config, ckpt.hyper.clone(), ckpt.net.clone(), rng);
        agent.decisions = ckpt.decisions;
        Ok(agent)
    }

    pub fn to_checkpoint(&self) -> AgentCheckpoint {
        AgentCheckpoint {
            node: self.node,
            features: self.config.features.enabled(),
            top_k: self.config.top_k_faces,
            decisions: self.decisions,
            hyper: self.hyper.clone(),
            net: self.net.clone(),
        }
    }

    /// Disables exploration and learning (greedy evaluation) or re-enables them.
    pub fn set_learning(&mut self, learning: bool) {
        self.learning = learning;
    }

    pub fn config(&self) -> &IdqfConfig {
        &self.config
    }

    pub fn hyper(&self) -> &DqnHyper {
        &self.hyper
    }

    pub fn net(&self) -> &Mlp {
        &self.net
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn decisions(&self) -> u64 {
        self.decisions
    }

    pub fn episode_decisions(&self) -> u64 {
        self.episode_decisions
    }

    pub fn train_steps(&self) -> u64 {
        self.train_steps
    }

    pub fn last_loss(&self) -> Option<f64> {
        self.last_loss
    }

    pub fn stats(&self) -> &EpochStats {
        &self.stats
    }

    pub fn faces(&self) -> &[FaceId] {
        &self.faces
    }

    pub fn chosen_face(&self) -> Option<FaceId> {
        self.faces.get(self.stats.chosen).copied()
    }

    /// Per-face forwarding counts for the current episode, FIB rank order.
    pub fn episode_usage(&self) -> &[u64] {
        &self.episode_usage
    }

    /// Cumulative reward of every finished episode.
    pub fn episode_rewards(&self) -> &[f64] {
        &self.episode_rewards
    }

    pub fn epsilon(&self) -> f64 {
        if self.learning {
            epsilon_at(self.decisions, &self.hyper)
        } else {
            0.0
        }
    }

    fn rank(&self, face: FaceId) -> Option<usize> {
        self.faces.iter().position(|f| *f == face)
    }

    /// Resets per-episode state and takes the first decision at `now`.
    pub fn begin_episode(&mut self, faces: Vec<FaceId>, now: SimTime) {
        assert_eq!(faces.len(), self.config.top_k_faces, "agent needs exactly top_k faces");
        let k = faces.len();
        self.faces = faces;
        self.recent = vec![VecDeque::new(); k];
        self.satisfaction = vec![1.0; k];
        self.episode_reward = 0.0;
        self.episode_decisions = 0;
        self.episode_usage = vec![0; k];
        self.stats = EpochStats::new(k, now, 0);
        let state = self.observe();
        let action = self.decide(&state);
        self.current = Some((state, action));
        self.stats = EpochStats::new(k, now, action);
        self.epoch_id += 1;
        self.guard = Some((self.epoch_id, now + self.config.delta_t + self.config.delta_t));
    }

    /// Closes the final epoch as terminal and logs the episode's cumulative reward.
    pub fn end_episode(&mut self, now: SimTime) -> Result<f64, DivergenceError> {
        self.close_epoch(now, true)?;
        self.guard = None;
        let total = self.episode_reward;
        self.episode_rewards.push(total);
        Ok(total)
    }

    /// Guard timer to schedule for the current epoch, if not yet handed out.
    pub fn take_guard(&mut self) -> Option<(u64, SimTime)> {
        self.guard.take()
    }

    pub fn on_guard(&mut self, epoch_id: u64, now: SimTime) -> Result<(), DivergenceError> {
        if epoch_id == self.epoch_id {
            self.maybe_close(now)?;
        }
        Ok(())
    }

    /// Face for an interest arriving on `in_face`. `entry` is the PIT entry
    /// before this transmission's out-record is written.
    pub fn choose(
        &mut self,
        fib: &FibEntry,
        entry: Option<&PitEntry>,
        in_face: Option<FaceId>,
        is_retx: bool,
        now: SimTime,
    ) -> Result<Option<FaceId>, DivergenceError> {
        self.maybe_close(now)?;
        let face = if is_retx && self.config.retx_mode == RetxMode::BrWay {
            br_choose(fib, entry, in_face, true, now)
        } else {
            let lf = self.faces[self.stats.chosen];
            if Some(lf) != in_face {
                Some(lf)
            } else {
                self.faces.iter().copied().find(|f| Some(*f) != in_face)
            }
        };
        let Some(face) = face else {
            return Ok(None);
        };
        if is_retx {
            self.stats.retransmitted += 1;
            let origin = entry
                .and_then(|e| e.first_face)
                .and_then(|f| self.rank(f))
                .unwrap_or(self.stats.chosen);
            self.stats.retx_by_origin[origin] += 1;
        } else {
            self.stats.new += 1;
        }
        if let Some(r) = self.rank(face) {
            self.stats.forwarded[r] += 1;
            self.episode_usage[r] += 1;
        }
        Ok(Some(face))
    }

    /// Feeds back a Data packet that arrived on `in_face` and matched `out`.
    pub fn record_data(
        &mut self,
        in_face: FaceId,
        out: Option<&OutRecord>,
        now: SimTime,
    ) -> Result<(), DivergenceError> {
        self.maybe_close(now)?;
        let (Some(rank), Some(out)) = (self.rank(in_face), out) else {
            return Ok(());
        };
        let rtt = now - out.sent_at;
        let ring = &mut self.recent[rank];
        if ring.len() == RECENT_DELAYS {
            ring.pop_front();
        }
        ring.push_back(rtt);
        if rank == self.stats.chosen {
            self.stats.rtt_samples.push(rtt);
        }
        if out.sent_at >= self.stats.epoch_start && self.stats.satisfied[rank] < self.stats.forwarded[rank] {
            self.stats.satisfied[rank] += 1;
        }
        Ok(())
    }

    fn maybe_close(&mut self, now: SimTime) -> Result<(), DivergenceError> {
        if now >= self.stats.epoch_start + self.config.delta_t {
            self.close_epoch(now, false)?;
        }
        Ok(())
    }

    /// Current state vector from the open epoch's counters.
    pub fn observe(&self) -> FeatureVector {
        let faces: Vec<FaceObservation> = (0..self.config.top_k_faces)
            .map(|j| {
                let ring = &self.recent[j];
                let avg = if ring.is_empty() {
                    0.0
                } else {
                    ring.iter().map(|t| t.as_secs_f64()).sum::<f64>() / ring.len() as f64
                };
                FaceObservation {
                    avg_delay_s: avg,
                    satisfaction_ratio: self.satisfaction[j],
                    retx_from_face: self.stats.retx_by_origin[j],
                    is_last_choice: j == self.stats.chosen,
                }
            })
            .collect();
        let totals = EpochTotals {
            retransmitted: self.stats.retransmitted,
            new: self.stats.new,
        };
        build_features(&self.config.features, &faces, totals)
    }

    /// Reward earned by the open epoch's action.
    pub fn epoch_reward(&self) -> f64 {
        let s = &self.stats;
        match self.config.reward {
            RewardKind::Rw => {
                let rtts: Vec<f64> = s.rtt_samples.iter().map(|t| t.as_secs_f64()).collect();
                reward_rw(&rtts, s.retransmitted, self.hyper.penalty_c_s)
            }
            RewardKind::Rw1 => reward_rw1(
                s.mean_rtt_s() * 1000.0,
                s.retransmitted,
                s.new,
                s.retx_by_origin[s.chosen],
                self.hyper.cm,
                self.hyper.r_thrs,
            ),
        }
    }

    fn decide(&mut self, state: &[f64]) -> usize {
        let eps = self.epsilon();
        let a = act(&self.net, state, eps, &mut self.rng);
        self.decisions += 1;
        self.episode_decisions += 1;
        a
    }

    fn close_epoch(&mut self, now: SimTime, terminal: bool) -> Result<(), DivergenceError> {
        for j in 0..self.satisfaction.len() {
            if self.stats.forwarded[j] > 0 {
                self.satisfaction[j] = self.stats.satisfied[j] as f64 / self.stats.forwarded[j] as f64;
            }
        }
        let next_state = self.observe();
        let reward = self.epoch_reward();
        if let Some((state, action)) = self.current.take() {
            self.episode_reward += reward;
            if self.learning {
                self.learn(Experience {
                    state,
                    action,
                    reward,
                    next_state: next_state.clone(),
                    terminal,
                })?;
            }
        }
        if terminal {
            return Ok(());
        }
        let dt = self.config.delta_t.as_nanos();
        let elapsed = (now - self.stats.epoch_start).as_nanos();
        let new_start = self.stats.epoch_start + SimTime::from_nanos((elapsed / dt).max(1) * dt);
        let action = self.decide(&next_state);
        self.current = Some((next_state, action));
        self.stats = EpochStats::new(self.faces.len(), new_start, action);
        self.epoch_id += 1;
        self.guard = Some((self.epoch_id, new_start + self.config.delta_t + self.config.delta_t));
        Ok(())
    }

    fn learn(&mut self, exp: Experience) -> Result<(), DivergenceError> {
        let loss = if self.buffer.is_disabled() {
            Some(train_on_batch(&mut self.net, self.target.as_ref(), &[&exp], &self.hyper)?)
        } else {
            self.buffer.push(exp);
            train_step(&mut self.net, self.target.as_ref(), &self.buffer, &self.hyper, &mut self.rng)?
        };
        if let Some(l) = loss {
            self.last_loss = Some(l);
            self.train_steps += 1;
            if self.hyper.target_sync > 0 && self.train_steps % self.hyper.target_sync == 0 {
                self.target = Some(self.net.clone());
            }
        }
        Ok(())
    }
}
