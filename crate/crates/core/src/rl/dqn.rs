//! Epsilon-greedy action selection and the DQN gradient step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::mlp::{Mlp, Target};
use super::replay::{Experience, ReplayBuffer};
use crate::error::DivergenceError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DqnHyper {
    /// Gradient step size.
    pub lr: f64,
    pub gamma: f64,
    pub eps_start: f64,
    pub eps_min: f64,
    pub decay_rate: f64,
    pub batch_size: usize,
    /// 0 trains on the current transition only.
    pub replay_capacity: usize,
    /// Seconds charged per retransmission in the delay reward.
    pub penalty_c_s: f64,
    pub cm: f64,
    pub r_thrs: u64,
    /// Blend between the current estimate and the bootstrapped target; 1 is a pure DQN target.
    pub q_update_rate: f64,
    /// Copy the online net into a target net every this many gradient steps; 0 disables.
    pub target_sync: u64,
}

impl Default for DqnHyper {
    fn default() -> Self {
        Self {
            lr: 0.001,
            gamma: 0.9,
            eps_start: 1.0,
            eps_min: 0.05,
            decay_rate: 0.001,
            batch_size: 16,
            replay_capacity: 2000,
            penalty_c_s: 4.0,
            cm: 4000.0,
            r_thrs: 0,
            q_update_rate: 1.0,
            target_sync: 0,
        }
    }
}

impl DqnHyper {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(format!("gamma must be in [0, 1), got {}", self.gamma));
        }
        if !(self.eps_min > 0.0 && self.eps_min <= self.eps_start && self.eps_start <= 1.0) {
            return Err(format!(
                "need 0 < eps_min <= eps_start <= 1, got eps_min={} eps_start={}",
                self.eps_min, self.eps_start
            ));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(format!("lr must be positive, got {}", self.lr));
        }
        if self.decay_rate < 0.0 {
            return Err("decay_rate must be non-negative".into());
        }
        if self.batch_size == 0 {
            return Err("batch_size must be at least 1".into());
        }
        if !(self.q_update_rate > 0.0 && self.q_update_rate <= 1.0) {
            return Err("q_update_rate must be in (0, 1]".into());
        }
        Ok(())
    }
}

/// Exploration probability after `step` agent decisions.
pub fn epsilon_at(step: u64, hyper: &DqnHyper) -> f64 {
    hyper.eps_min + (hyper.eps_start - hyper.eps_min) * (-hyper.decay_rate * step as f64).exp()
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(q: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in q.iter().enumerate().skip(1) {
        if *v > q[best] {
            best = i;
        }
    }
    best
}

/// Epsilon-greedy action.
pub fn act<R: Rng>(net: &Mlp, state: &[f64], eps: f64, rng: &mut R) -> usize {
    debug_assert!((0.0..=1.0).contains(&eps));
    // draw only when exploring is possible so greedy runs consume no randomness
    if eps > 0.0 && rng.gen::<f64>() < eps {
        rng.gen_range(0..net.output)
    } else {
        argmax(&net.forward(state))
    }
}

/// One gradient step on `batch`. Bootstrap values come from `target` when given.
pub fn train_on_batch(
    net: &mut Mlp,
    target: Option<&Mlp>,
    batch: &[&Experience],
    hyper: &DqnHyper,
) -> Result<f64, DivergenceError> {
    let bootstrap = target.unwrap_or(net);
    let values: Vec<f64> = batch
        .iter()
        .map(|e| {
            let mut y = e.reward;
            if !e.terminal {
                let next = bootstrap.forward(&e.next_state);
                y += hyper.gamma * next.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            }
            if hyper.q_update_rate < 1.0 {
                let q = net.forward(&e.state)[e.action];
                y = q + hyper.q_update_rate * (y - q);
            }
            y
        })
        .collect();
    let targets: Vec<Target<'_>> = batch
        .iter()
        .zip(&values)
        .map(|(e, &value)| Target {
            input: &e.state,
            action: e.action,
            value,
        })
        .collect();
    let (loss, grads) = net.loss_and_gradients(&targets);
    if !loss.is_finite() {
        return Err(DivergenceError(format!("non-finite loss {loss}")));
    }
    net.apply(&grads, hyper.lr);
    net.check_finite()?;
    Ok(loss)
}

/// Samples a mini-batch from `buffer` and trains on it. Returns `None` while the
/// buffer holds fewer than `batch_size` transitions.
pub fn train_step<R: Rng>(
    net: &mut Mlp,
    target: Option<&Mlp>,
    buffer: &ReplayBuffer,
    hyper: &DqnHyper,
    rng: &mut R,
) -> Result<Option<f64>, DivergenceError> {
    if buffer.len() < hyper.batch_size {
        return Ok(None);
    }
    let batch = buffer.sample(hyper.batch_size, rng);
    train_on_batch(net, target, &batch, hyper).map(Some)
}
