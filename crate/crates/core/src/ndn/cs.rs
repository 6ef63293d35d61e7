use std::collections::{BTreeMap, HashMap};

use super::{Data, Name};

/// Content Store with least-recently-used eviction. Capacity 0 disables caching.
#[derive(Debug, Clone, Default)]
pub struct ContentStore {
    capacity: usize,
    tick: u64,
    entries: HashMap<Name, (Data, u64)>,
    recency: BTreeMap<u64, Name>,
}

impl ContentStore {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            ..Default::default()
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&mut self, name: &Name) -> Option<Data> {
        let tick = self.next_tick();
        let (data, used) = self.entries.get_mut(name)?;
        self.recency.remove(used);
        *used = tick;
        self.recency.insert(tick, name.clone());
        Some(data.clone())
    }

    pub fn insert(&mut self, data: Data) {
        if self.capacity == 0 {
            return;
        }
        let tick = self.next_tick();
        if let Some((_, old)) = self.entries.remove(&data.name) {
            self.recency.remove(&old);
        } else if self.entries.len() == self.capacity {
            if let Some((_, victim)) = self.recency.pop_first() {
                self.entries.remove(&victim);
            }
        }
        self.recency.insert(tick, data.name.clone());
        self.entries.insert(data.name.clone(), (data, tick));
    }

    fn next_tick(&mut self) -> u64 {
        self.tick += 1;
        self.tick
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(seq: u64) -> Data {
        Data {
            name: Name::new("/p", seq),
            payload_bits: 8200,
        }
    }

    #[test]
    fn zero_capacity_never_caches() {
        let mut cs = ContentStore::new(0);
        cs.insert(data(1));
        assert!(cs.lookup(&data(1).name).is_none());
        assert!(cs.is_empty());
    }

    #[test]
    fn evicts_least_recently_used() {
        let mut cs = ContentStore::new(2);
        cs.insert(data(1));
        cs.insert(data(2));
        assert!(cs.lookup(&data(1).name).is_some());
        cs.insert(data(3));
        assert_eq!(cs.len(), 2);
        assert!(cs.lookup(&data(2).name).is_none());
        assert!(cs.lookup(&data(1).name).is_some());
        assert!(cs.lookup(&data(3).name).is_some());
    }
}
