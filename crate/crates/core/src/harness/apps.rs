//! Consumer and producer applications.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::ndn::{Data, Interest, Name};
use crate::sim::{SimRng, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outstanding {
    pub first_issued_at: SimTime,
    pub last_tx_at: SimTime,
    pub tx_count: u32,
}

/// Delay sample: Data arrival time and delay since first issue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelaySample {
    pub at: SimTime,
    pub delay: SimTime,
}

/// Constant-rate consumer with timeout-driven retransmissions.
#[derive(Debug, Clone)]
pub struct Consumer {
    pub prefix: Arc<str>,
    pub rate: f64,
    pub interest_bits: u64,
    pub retx_timeout: SimTime,
    /// Offset of the first interest inside one inter-interest gap.
    pub phase: SimTime,
    pub next_seq: u64,
    pub outstanding: BTreeMap<u64, Outstanding>,
    pub samples: Vec<DelaySample>,
    /// (arrival, bits) of every satisfied interest.
    pub received: Vec<(SimTime, u64)>,
    pub sent_new: u64,
    pub sent_retx: u64,
    rng: SimRng,
}

impl Consumer {
    pub fn new(prefix: &str, rate: f64, interest_bits: u64, retx_timeout: SimTime, mut rng: SimRng) -> Self {
        let gap = (1e9 / rate).round() as u64;
        let phase = SimTime::from_nanos(rng.gen_range(0..gap.max(1)));
        Self {
            prefix: Arc::from(prefix),
            rate,
            interest_bits,
            retx_timeout,
            phase,
            next_seq: 0,
            outstanding: BTreeMap::new(),
            samples: Vec::new(),
            received: Vec::new(),
            sent_new: 0,
            sent_retx: 0,
            rng,
        }
    }

    /// Issue time of new interest `k`, computed without accumulating rounding error.
    pub fn tick_time(&self, k: u64) -> SimTime {
        self.phase + SimTime::from_nanos((k as f64 * 1e9 / self.rate).round() as u64)
    }

    fn interest(&mut self, seq: u64, now: SimTime) -> Interest {
        Interest {
            name: Name::new(self.prefix.clone(), seq),
            nonce: self.rng.gen(),
            issued_at: now,
            size_bits: self.interest_bits,
        }
    }

    /// Issues the next new interest.
    pub fn tick(&mut self, now: SimTime) -> Interest {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.outstanding.insert(
            seq,
            Outstanding {
                first_issued_at: now,
                last_tx_at: now,
                tx_count: 1,
            },
        );
        self.sent_new += 1;
        self.interest(seq, now)
    }

    /// Retransmits `seq` if it is still unanswered a full timeout after its last transmission.
    pub fn retx_check(&mut self, seq: u64, now: SimTime) -> Option<Interest> {
        let timeout = self.retx_timeout;
        let o = self.outstanding.get_mut(&seq)?;
        if o.last_tx_at + timeout > now {
            return None;
        }
        o.last_tx_at = now;
        o.tx_count += 1;
        self.sent_retx += 1;
        Some(self.interest(seq, now))
    }

    /// Returns the app delay if the Data answers an outstanding interest.
    pub fn on_data(&mut self, data: &Data, now: SimTime) -> Option<SimTime> {
        if *data.name.prefix != *self.prefix {
            return None;
        }
        let o = self.outstanding.remove(&data.name.seq)?;
        let delay = now - o.first_issued_at;
        self.samples.push(DelaySample { at: now, delay });
        self.received.push((now, data.payload_bits));
        Some(delay)
    }
}

#[derive(Debug, Clone)]
pub struct Producer {
    pub prefix: Arc<str>,
    pub payload_bits: u64,
    pub served: u64,
}

impl Producer {
    pub fn new(prefix: &str, payload_bits: u64) -> Self {
        Self {
            prefix: Arc::from(prefix),
            payload_bits,
            served: 0,
        }
    }

    pub fn serve(&mut self, interest: &Interest) -> Option<Data> {
        let p = &*interest.name.prefix;
        let matches = p == &*self.prefix || p.starts_with(&format!("{}/", self.prefix));
        if !matches {
            return None;
        }
        self.served += 1;
        Some(Data {
            name: interest.name.clone(),
            payload_bits: self.payload_bits,
        })
    }
}
