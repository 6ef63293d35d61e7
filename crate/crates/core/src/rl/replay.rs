use std::collections::VecDeque;

use rand::seq::index;
use rand::Rng;

use super::features::FeatureVector;

/// One state transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Experience {
    pub state: FeatureVector,
    pub action: usize,
    pub reward: f64,
    pub next_state: FeatureVector,
    pub terminal: bool,
}

/// Bounded FIFO of transitions. Capacity 0 disables storage.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    entries: VecDeque<Experience>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            entries: VecDeque::with_capacity(capacity.min(1 << 16)),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_disabled(&self) -> bool {
        self.capacity == 0
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, exp: Experience) {
        if self.capacity == 0 {
            return;
        }
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(exp);
    }

    /// Draws `n` distinct transitions uniformly at random.
    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<&Experience> {
        let n = n.min(self.entries.len());
        index::sample(rng, self.entries.len(), n)
            .into_iter()
            .map(|i| &self.entries[i])
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Experience> {
        self.entries.iter()
    }
}
