//! Interest/Data processing pipeline of one router.

use super::{is_retransmission, ContentStore, Data, Face, FaceId, Fib, Interest, OutRecord, Pit};
use crate::error::DivergenceError;
use crate::sim::SimTime;
use crate::strategy::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    NoRoute,
    /// The strategy found no face other than the one the interest came from.
    NoFace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterestOutcome {
    Forwarded { face: FaceId, retransmission: bool },
    Aggregated,
    SatisfiedFromCache(Data),
    Dropped(DropReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataOutcome {
    SatisfiedDownstream {
        faces: Vec<FaceId>,
        /// Upstream record the Data answered, if it came back on a face we used.
        out: Option<OutRecord>,
    },
    Unsolicited,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForwarderCounters {
    pub interests_in: u64,
    pub forwarded: u64,
    pub retransmissions: u64,
    pub aggregated: u64,
    pub cache_hits: u64,
    pub dropped: u64,
    pub no_route: u64,
    pub data_in: u64,
    pub data_out: u64,
    pub unsolicited: u64,
    pub pit_expired: u64,
}

#[derive(Debug, Clone)]
pub struct Forwarder {
    pub node: usize,
    pub faces: Vec<Face>,
    pub fib: Fib,
    pub pit: Pit,
    pub cs: ContentStore,
    pub strategy: Strategy,
    pub pit_lifetime: SimTime,
    pub counters: ForwarderCounters,
}

impl Forwarder {
    pub fn new(node: usize, faces: Vec<Face>, fib: Fib, strategy: Strategy, cs_capacity: usize, pit_lifetime: SimTime) -> Self {
        Self {
            node,
            faces,
            fib,
            pit: Pit::new(),
            cs: ContentStore::new(cs_capacity),
            strategy,
            pit_lifetime,
            counters: ForwarderCounters::default(),
        }
    }

    pub fn face(&self, id: FaceId) -> Option<&Face> {
        self.faces.iter().find(|f| f.id == id)
    }

    pub fn on_interest(
        &mut self,
        in_face: FaceId,
        interest: &Interest,
        now: SimTime,
    ) -> Result<InterestOutcome, DivergenceError> {
        self.counters.interests_in += 1;
        let name = &interest.name;
        if let Some(data) = self.cs.lookup(name) {
            self.counters.cache_hits += 1;
            return Ok(InterestOutcome::SatisfiedFromCache(data));
        }
        let lifetime = self.pit_lifetime;
        if let Some(entry) = self.pit.get_mut(name) {
            let from_other = entry.pending_in_records(now, lifetime).any(|r| r.face != in_face);
            let from_self = entry.pending_in_records(now, lifetime).any(|r| r.face == in_face);
            if from_other && !from_self {
                entry.insert_in_record(in_face, now, lifetime);
                self.counters.aggregated += 1;
                return Ok(InterestOutcome::Aggregated);
            }
        }
        let Some(fib_entry) = self.fib.lookup(&name.prefix) else {
            self.counters.dropped += 1;
            self.counters.no_route += 1;
            return Ok(InterestOutcome::Dropped(DropReason::NoRoute));
        };
        let retx = is_retransmission(self.pit.get(name), now);
        let entry = self.pit.get_or_insert(name, now, lifetime);
        entry.insert_in_record(in_face, now, lifetime);
        let Some(face) = self.strategy.choose(fib_entry, Some(entry), Some(in_face), retx, now)? else {
            if entry.out_records.is_empty() {
                self.pit.remove(name);
            }
            self.counters.dropped += 1;
            return Ok(InterestOutcome::Dropped(DropReason::NoFace));
        };
        entry.insert_out_record(face, now, lifetime, !retx);
        self.counters.forwarded += 1;
        if retx {
            self.counters.retransmissions += 1;
        }
        Ok(InterestOutcome::Forwarded {
            face,
            retransmission: retx,
        })
    }

    pub fn on_data(&mut self, in_face: FaceId, data: &Data, now: SimTime) -> Result<DataOutcome, DivergenceError> {
        self.counters.data_in += 1;
        let Some(entry) = self.pit.remove(&data.name) else {
            self.counters.unsolicited += 1;
            return Ok(DataOutcome::Unsolicited);
        };
        let out = entry.out_record(in_face).copied();
        self.strategy.on_data(in_face, out.as_ref(), now)?;
        let faces: Vec<FaceId> = entry
            .pending_in_records(now, self.pit_lifetime)
            .map(|r| r.face)
            .filter(|f| *f != in_face)
            .collect();
        self.counters.data_out += faces.len() as u64;
        self.cs.insert(data.clone());
        Ok(DataOutcome::SatisfiedDownstream { faces, out })
    }

    /// Expiry time the PIT currently holds for `name`.
    pub fn pit_expiry(&self, name: &super::Name) -> Option<SimTime> {
        self.pit.get(name).map(|e| e.entry_expires_at)
    }

    /// Timer callback for one PIT entry.
    pub fn expire_entry(&mut self, name: &super::Name, now: SimTime) -> bool {
        let removed = self.pit.expire_one(name, now);
        if removed {
            self.counters.pit_expired += 1;
        }
        removed
    }

    pub fn expire_pit(&mut self, now: SimTime) -> usize {
        let n = self.pit.expire(now);
        self.counters.pit_expired += n as u64;
        n
    }
}
