use std::fmt;
use std::sync::Arc;

use crate::sim::SimTime;

pub const DEFAULT_INTEREST_BITS: u64 = 320;
/// 100 packets/s corresponds to 0.82 Mbit/s of data.
pub const DEFAULT_DATA_BITS: u64 = 8200;

/// Content name: a prefix path plus a sequence number. Orders by sequence
/// number first so table lookups rarely compare prefix strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    pub seq: u64,
    pub prefix: Arc<str>,
}

impl Name {
    pub fn new(prefix: impl Into<Arc<str>>, seq: u64) -> Self {
        Self {
            prefix: prefix.into(),
            seq,
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/seq={}", self.prefix, self.seq)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interest {
    pub name: Name,
    pub nonce: u64,
    pub issued_at: SimTime,
    pub size_bits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Data {
    pub name: Name,
    pub payload_bits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Packet {
    Interest(Interest),
    Data(Data),
}

impl Packet {
    pub fn size_bits(&self) -> u64 {
        match self {
            Packet::Interest(i) => i.size_bits,
            Packet::Data(d) => d.payload_bits,
        }
    }
}
