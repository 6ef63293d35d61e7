//! Priority-queue event scheduler keyed by `(fire_at, seq)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::SimTime;
use crate::error::SimError;

struct Scheduled<E> {
    fire_at: SimTime,
    seq: u64,
    payload: E,
}

impl<E> PartialEq for Scheduled<E> {
    fn eq(&self, other: &Self) -> bool {
        self.fire_at == other.fire_at && self.seq == other.seq
    }
}

impl<E> Eq for Scheduled<E> {}

impl<E> PartialOrd for Scheduled<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E> Ord for Scheduled<E> {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .fire_at
            .cmp(&self.fire_at)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Single-threaded discrete-event scheduler.
pub struct Scheduler<E> {
    now: SimTime,
    next_seq: u64,
    queue: BinaryHeap<Scheduled<E>>,
    processed: u64,
}

impl<E> Default for Scheduler<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E> Scheduler<E> {
    pub fn new() -> Self {
        Self {
            now: SimTime::ZERO,
            next_seq: 0,
            queue: BinaryHeap::new(),
            processed: 0,
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    pub fn processed(&self) -> u64 {
        self.processed
    }

    /// Enqueues `payload` to fire at `fire_at`. Returns the tiebreak sequence number.
    pub fn schedule(&mut self, fire_at: SimTime, payload: E) -> Result<u64, SimError> {
        if fire_at < self.now {
            return Err(SimError::ScheduleInPast {
                now: self.now,
                fire_at,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.queue.push(Scheduled {
            fire_at,
            seq,
            payload,
        });
        Ok(seq)
    }

    pub fn schedule_in(&mut self, delay: SimTime, payload: E) -> u64 {
        let at = self.now + delay;
        self.schedule(at, payload)
            .expect("relative scheduling cannot be in the past")
    }

    /// Pops the next event if it fires at or before `t_end`, advancing the clock.
    pub fn pop_until(&mut self, t_end: SimTime) -> Option<(SimTime, E)> {
        if self.queue.peek()?.fire_at > t_end {
            return None;
        }
        let ev = self.queue.pop()?;
        debug_assert!(ev.fire_at >= self.now);
        self.now = ev.fire_at;
        self.processed += 1;
        Some((ev.fire_at, ev.payload))
    }

    /// Advances the clock to `t_end` once no more events are due.
    pub fn advance_to(&mut self, t_end: SimTime) {
        if t_end > self.now {
            self.now = t_end;
        }
    }

    /// Processes every event with `fire_at <= t_end` in order, then sets the clock to `t_end`.
    pub fn run_until<F>(&mut self, t_end: SimTime, mut handler: F) -> u64
    where
        F: FnMut(&mut Self, SimTime, E),
    {
        let mut count = 0;
        while let Some((t, ev)) = self.pop_until(t_end) {
            handler(self, t, ev);
            count += 1;
        }
        self.advance_to(t_end);
        count
    }

    /// Drops every pending event without processing it.
    pub fn clear(&mut self) {
        self.queue.clear();
    }
}
