//! Pending Interest Table.

use std::collections::BTreeMap;

use super::{FaceId, Name};
use crate::sim::SimTime;

pub const DEFAULT_PIT_LIFETIME: SimTime = SimTime::from_secs(2);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InRecord {
    pub face: FaceId,
    pub arrival: SimTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutRecord {
    pub face: FaceId,
    pub sent_at: SimTime,
    pub expires_at: SimTime,
    pub was_new: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PitEntry {
    pub name: Name,
    pub in_records: Vec<InRecord>,
    pub out_records: Vec<OutRecord>,
    pub entry_expires_at: SimTime,
    /// Upstream face used when this entry first forwarded the interest.
    pub first_face: Option<FaceId>,
}

impl PitEntry {
    pub fn new(name: Name, now: SimTime, lifetime: SimTime) -> Self {
        Self {
            name,
            in_records: Vec::new(),
            out_records: Vec::new(),
            entry_expires_at: now + lifetime,
            first_face: None,
        }
    }

    pub fn has_live_out_record(&self, now: SimTime) -> bool {
        self.out_records.iter().any(|r| r.expires_at > now)
    }

    pub fn out_record(&self, face: FaceId) -> Option<&OutRecord> {
        self.out_records.iter().find(|r| r.face == face)
    }

    pub fn live_out_record(&self, face: FaceId, now: SimTime) -> Option<&OutRecord> {
        self.out_record(face).filter(|r| r.expires_at > now)
    }

    pub fn in_record(&self, face: FaceId) -> Option<&InRecord> {
        self.in_records.iter().find(|r| r.face == face)
    }

    /// In-records whose downstream is still waiting at `now`.
    pub fn pending_in_records(&self, now: SimTime, lifetime: SimTime) -> impl Iterator<Item = &InRecord> {
        self.in_records
            .iter()
            .filter(move |r| r.arrival + lifetime > now)
    }

    /// Adds or refreshes the in-record for `face` and extends the entry lifetime.
    pub fn insert_in_record(&mut self, face: FaceId, now: SimTime, lifetime: SimTime) {
        match self.in_records.iter_mut().find(|r| r.face == face) {
            Some(r) => r.arrival = now,
            None => self.in_records.push(InRecord { face, arrival: now }),
        }
        self.entry_expires_at = self.entry_expires_at.max(now + lifetime);
    }

    pub fn insert_out_record(&mut self, face: FaceId, now: SimTime, lifetime: SimTime, was_new: bool) {
        let rec = OutRecord {
            face,
            sent_at: now,
            expires_at: now + lifetime,
            was_new,
        };
        match self.out_records.iter_mut().find(|r| r.face == face) {
            Some(r) => *r = rec,
            None => self.out_records.push(rec),
        }
        if self.first_face.is_none() {
            self.first_face = Some(face);
        }
        self.entry_expires_at = self.entry_expires_at.max(now + lifetime);
    }
}

/// Router-side retransmission test: an unexpired out-record exists.
pub fn is_retransmission(entry: Option<&PitEntry>, now: SimTime) -> bool {
    entry.is_some_and(|e| e.has_live_out_record(now))
}

#[derive(Debug, Default, Clone)]
pub struct Pit {
    entries: BTreeMap<Name, PitEntry>,
}

impl Pit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &Name) -> Option<&PitEntry> {
        self.entries.get(name)
    }

    pub fn get_mut(&mut self, name: &Name) -> Option<&mut PitEntry> {
        self.entries.get_mut(name)
    }

    pub fn get_or_insert(&mut self, name: &Name, now: SimTime, lifetime: SimTime) -> &mut PitEntry {
        self.entries
            .entry(name.clone())
            .or_insert_with(|| PitEntry::new(name.clone(), now, lifetime))
    }

    pub fn remove(&mut self, name: &Name) -> Option<PitEntry> {
        self.entries.remove(name)
    }

    /// Removes `name` if its lifetime has passed at `now`.
    pub fn expire_one(&mut self, name: &Name, now: SimTime) -> bool {
        if self
            .entries
            .get(name)
            .is_some_and(|e| e.entry_expires_at <= now)
        {
            self.entries.remove(name);
            true
        } else {
            false
        }
    }

    /// Removes every entry whose lifetime has passed at `now`.
    pub fn expire(&mut self, now: SimTime) -> usize {
        let before = self.entries.len();
        self.entries.retain(|_, e| e.entry_expires_at > now);
        before - self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PitEntry> {
        self.entries.values()
    }
}
