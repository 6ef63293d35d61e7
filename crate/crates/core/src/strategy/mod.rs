//! Per-node forwarding strategies.

mod best_route;
mod idqf;

pub use best_route::br_choose;
pub use idqf::{EpochStats, IdqfAgent, IdqfConfig, RetxMode, RewardKind, RECENT_DELAYS};

use crate::error::DivergenceError;
use crate::ndn::{FaceId, FibEntry, OutRecord, PitEntry};
use crate::sim::SimTime;

#[derive(Debug, Clone)]
pub enum Strategy {
    BestRoute,
    Idqf(Box<IdqfAgent>),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::BestRoute => "best_route",
            Strategy::Idqf(_) => "idqf",
        }
    }

    pub fn choose(
        &mut self,
        fib: &FibEntry,
        entry: Option<&PitEntry>,
        in_face: Option<FaceId>,
        is_retx: bool,
        now: SimTime,
    ) -> Result<Option<FaceId>, DivergenceError> {
        match self {
            Strategy::BestRoute => Ok(br_choose(fib, entry, in_face, is_retx, now)),
            Strategy::Idqf(agent) => agent.choose(fib, entry, in_face, is_retx, now),
        }
    }

    pub fn on_data(&mut self, in_face: FaceId, out: Option<&OutRecord>, now: SimTime) -> Result<(), DivergenceError> {
        match self {
            Strategy::BestRoute => Ok(()),
            Strategy::Idqf(agent) => agent.record_data(in_face, out, now),
        }
    }

    pub fn agent(&self) -> Option<&IdqfAgent> {
        match self {
            Strategy::Idqf(a) => Some(a),
            Strategy::BestRoute => None,
        }
    }

    pub fn agent_mut(&mut self) -> Option<&mut IdqfAgent> {
        match self {
            Strategy::Idqf(a) => Some(a),
            Strategy::BestRoute => None,
        }
    }
}
