//! Discrete-event engine, simulated clock, links and seeded randomness.

mod engine;
mod link;
mod rng;
mod time;

pub use engine::Scheduler;
pub use link::{Direction, LinkSpec, LinkState, QueueCounters, Transmit, DEFAULT_QUEUE_CAPACITY};
pub use rng::{derive_seed, substream, SimRng, Stream};
pub use time::SimTime;
