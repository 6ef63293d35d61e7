//! Retransmission features and per-epoch reward functions.

/// Fraction of the epoch's retransmissions whose original transmission used face `j`.
pub fn retx_ratio(retx_from_face: u64, retx_total: u64) -> f64 {
    if retx_from_face == 0 {
        return 0.0;
    }
    debug_assert!(retx_total >= retx_from_face);
    retx_from_face as f64 / retx_total as f64
}

/// Excess of retransmitted over new interests, clamped at zero.
pub fn retx_diff(retx_total: u64, new_total: u64) -> f64 {
    retx_total.saturating_sub(new_total) as f64
}

/// Delay-plus-drop-penalty reward in seconds:
/// `-(mean(rtts) + penalty_s * retransmitted)`, with the mean taken as 0 when no Data arrived.
pub fn reward_rw(rtt_samples_s: &[f64], retransmitted: u64, penalty_s: f64) -> f64 {
    let mean = if rtt_samples_s.is_empty() {
        0.0
    } else {
        rtt_samples_s.iter().sum::<f64>() / rtt_samples_s.len() as f64
    };
    -(mean + penalty_s * retransmitted as f64)
}

/// Which guard of the piecewise reward fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rw1Case {
    CongestedWithDelay,
    CongestedNoDelay,
    ClearWithDelay,
    ClearNoDelay,
}

pub fn rw1_case(avg_delay_ms: f64, retransmitted: u64, new: u64, r_thrs: u64) -> Rw1Case {
    let congested = retransmitted > new && retransmitted - new > r_thrs;
    match (congested, avg_delay_ms != 0.0) {
        (true, true) => Rw1Case::CongestedWithDelay,
        (true, false) => Rw1Case::CongestedNoDelay,
        (false, true) => Rw1Case::ClearWithDelay,
        (false, false) => Rw1Case::ClearNoDelay,
    }
}

/// Piecewise delay reward in milliseconds with a retransmission multiplier.
pub fn reward_rw1(
    avg_delay_ms: f64,
    retransmitted: u64,
    new: u64,
    retx_on_last_face: u64,
    cm: f64,
    r_thrs: u64,
) -> f64 {
    debug_assert!(avg_delay_ms >= 0.0);
    let penalty = retx_on_last_face as f64 * cm;
    match rw1_case(avg_delay_ms, retransmitted, new, r_thrs) {
        Rw1Case::CongestedWithDelay => -(avg_delay_ms + penalty),
        Rw1Case::CongestedNoDelay => -penalty,
        Rw1Case::ClearWithDelay => -avg_delay_ms,
        Rw1Case::ClearNoDelay => -10000.0,
    }
}
