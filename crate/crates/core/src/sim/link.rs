//! Store-and-forward point-to-point links with a drop-tail queue per direction.

use std::collections::VecDeque;

use super::SimTime;
use crate::error::SimError;

pub const DEFAULT_QUEUE_CAPACITY: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkSpec {
    /// One-way propagation delay in microseconds.
    pub delay_us: u64,
    pub bandwidth_bps: u64,
    /// Packets not yet fully serialized, including the one on the wire.
    pub queue_capacity: usize,
}

impl LinkSpec {
    pub fn new(delay_us: u64, bandwidth_bps: u64, queue_capacity: usize) -> Result<Self, SimError> {
        let spec = Self {
            delay_us,
            bandwidth_bps,
            queue_capacity,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.delay_us == 0 {
            return Err(SimError::InvalidLink("delay must be positive".into()));
        }
        if self.bandwidth_bps == 0 {
            return Err(SimError::InvalidLink("bandwidth must be positive".into()));
        }
        if self.queue_capacity == 0 {
            return Err(SimError::InvalidLink("queue capacity must be at least 1".into()));
        }
        Ok(())
    }

    pub fn delay(&self) -> SimTime {
        SimTime::from_micros(self.delay_us)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// From endpoint `a` to endpoint `b`.
    Forward,
    Reverse,
}

impl Direction {
    fn index(self) -> usize {
        match self {
            Direction::Forward => 0,
            Direction::Reverse => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transmit {
    Arrives(SimTime),
    Dropped,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueueCounters {
    pub offered: u64,
    pub delivered: u64,
    pub dropped: u64,
}

#[derive(Debug, Clone, Default)]
struct Lane {
    next_free: SimTime,
    /// Serialization completion times of packets still in the queue, ascending.
    backlog: VecDeque<SimTime>,
    counters: QueueCounters,
}

impl Lane {
    fn drain(&mut self, now: SimTime) {
        while self.backlog.front().is_some_and(|&done| done <= now) {
            self.backlog.pop_front();
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinkState {
    pub spec: LinkSpec,
    lanes: [Lane; 2],
}

impl LinkState {
    pub fn new(spec: LinkSpec) -> Self {
        Self {
            spec,
            lanes: Default::default(),
        }
    }

    /// Offers a packet of `size_bits` to the queue in `dir` at `now`.
    pub fn transmit(&mut self, dir: Direction, size_bits: u64, now: SimTime) -> Transmit {
        assert!(size_bits > 0, "packet size must be positive");
        let spec = self.spec;
        let lane = &mut self.lanes[dir.index()];
        lane.counters.offered += 1;
        lane.drain(now);
        if lane.backlog.len() >= spec.queue_capacity {
            lane.counters.dropped += 1;
            return Transmit::Dropped;
        }
        let start = now.max(lane.next_free);
        let done = start + SimTime::serialization(size_bits, spec.bandwidth_bps);
        lane.next_free = done;
        lane.backlog.push_back(done);
        lane.counters.delivered += 1;
        Transmit::Arrives(done + spec.delay())
    }

    /// Packets in `dir` not fully serialized at `now`.
    pub fn queued(&mut self, dir: Direction, now: SimTime) -> usize {
        let lane = &mut self.lanes[dir.index()];
        lane.drain(now);
        lane.backlog.len()
    }

    pub fn next_free(&self, dir: Direction) -> SimTime {
        self.lanes[dir.index()].next_free
    }

    pub fn counters(&self, dir: Direction) -> &QueueCounters {
        &self.lanes[dir.index()].counters
    }
}
