//! Forwarding Information Base.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::FaceId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NextHop {
    pub face: FaceId,
    /// One-way shortest-path propagation delay through this face, microseconds.
    pub cost_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibEntry {
    pub prefix: Arc<str>,
    /// Ascending by cost, ties broken by smaller face id.
    pub next_hops: Vec<NextHop>,
}

impl FibEntry {
    pub fn new(prefix: impl Into<Arc<str>>, mut next_hops: Vec<NextHop>) -> Self {
        next_hops.sort_by_key(|h| (h.cost_us, h.face));
        Self {
            prefix: prefix.into(),
            next_hops,
        }
    }

    pub fn truncate(&mut self, k: usize) {
        self.next_hops.truncate(k);
    }

    pub fn rank_of(&self, face: FaceId) -> Option<usize> {
        self.next_hops.iter().position(|h| h.face == face)
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.next_hops.iter().map(|h| h.face)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Fib {
    entries: BTreeMap<Arc<str>, FibEntry>,
}

impl Fib {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry: FibEntry) {
        self.entries.insert(entry.prefix.clone(), entry);
    }

    /// Longest-prefix match over `/`-separated components.
    pub fn lookup(&self, prefix: &str) -> Option<&FibEntry> {
        let mut p = prefix;
        loop {
            if let Some(e) = self.entries.get(p) {
                return Some(e);
            }
            match p.rfind('/') {
                Some(0) if p.len() > 1 => p = "/",
                Some(i) if i > 0 => p = &p[..i],
                _ => return None,
            }
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &FibEntry> {
        self.entries.values()
    }

    pub fn truncate_all(&mut self, k: usize) {
        for e in self.entries.values_mut() {
            e.truncate(k);
        }
    }
}
