use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic, platform-independent generator used throughout the simulator.
pub type SimRng = ChaCha8Rng;

/// Stream tags keep substreams for different purposes apart even for equal ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Agent = 1,
    Consumer = 2,
    Episode = 3,
    Replicate = 4,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derives a seed for substream `(stream, id)` of the run seed.
pub fn derive_seed(seed: u64, stream: Stream, id: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream as u64)) ^ id)
}

pub fn substream(seed: u64, stream: Stream, id: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, stream, id))
}
