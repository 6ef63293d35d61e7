//! DQN machinery: features, rewards, replay, the Q-network and its training step.

pub mod checkpoint;
pub mod dqn;
pub mod features;
pub mod mlp;
pub mod replay;
pub mod reward;

pub use checkpoint::{AgentCheckpoint, Checkpoint};
pub use dqn::{act, argmax, epsilon_at, train_on_batch, train_step, DqnHyper};
pub use features::{build_features, EpochTotals, FaceObservation, Feature, FeatureSet, FeatureVector, DELAY_CAP_S, RETX_DIFF_SCALE};
pub use mlp::{Gradients, Mlp, Target, DEFAULT_HIDDEN};
pub use replay::{Experience, ReplayBuffer};
pub use reward::{reward_rw, reward_rw1, retx_diff, retx_ratio, rw1_case, Rw1Case};
