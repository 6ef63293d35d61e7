//! NDN node model: packets, faces, CS, PIT, FIB and the forwarding pipeline.

mod cs;
mod face;
mod fib;
mod node;
mod packet;
mod pit;

pub use cs::ContentStore;
pub use face::{Face, FaceId};
pub use fib::{Fib, FibEntry, NextHop};
pub use node::{DataOutcome, DropReason, Forwarder, ForwarderCounters, InterestOutcome};
pub use packet::{Data, Interest, Name, Packet, DEFAULT_DATA_BITS, DEFAULT_INTEREST_BITS};
pub use pit::{is_retransmission, InRecord, OutRecord, Pit, PitEntry, DEFAULT_PIT_LIFETIME};
