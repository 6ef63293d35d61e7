//! Discrete-event NDN forwarding simulator with a per-router deep Q-network
//! forwarding strategy, a best-route baseline and an experiment harness.

pub mod error;
pub mod harness;
pub mod ndn;
pub mod rl;
pub mod sim;
pub mod strategy;
pub mod topology;

pub use error::{DivergenceError, SimError, TopologyError};
