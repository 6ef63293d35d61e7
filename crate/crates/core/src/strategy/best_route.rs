use crate::ndn::{FaceId, FibEntry, PitEntry};
use crate::sim::SimTime;

/// Best-route face selection.
///
/// New interests take the lowest-cost face. A retransmission prefers the
/// lowest-cost face without an unexpired out-record and otherwise falls back to
/// the face used most recently. The arrival face is never eligible.
pub fn br_choose(
    fib: &FibEntry,
    entry: Option<&PitEntry>,
    in_face: Option<FaceId>,
    is_retx: bool,
    now: SimTime,
) -> Option<FaceId> {
    let mut eligible = fib.faces().filter(|f| Some(*f) != in_face);
    if !is_retx {
        return eligible.next();
    }
    let Some(entry) = entry else {
        return eligible.next();
    };
    let candidates: Vec<FaceId> = eligible.collect();
    if let Some(unused) = candidates
        .iter()
        .copied()
        .find(|f| entry.live_out_record(*f, now).is_none())
    {
        return Some(unused);
    }
    candidates
        .iter()
        .filter_map(|f| entry.out_record(*f).map(|r| (r.sent_at, *f)))
        // latest send wins; on equal times the better-ranked face
        .min_by(|a, b| b.0.cmp(&a.0))
        .map(|(_, f)| f)
        .or_else(|| candidates.first().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndn::{Name, NextHop, DEFAULT_PIT_LIFETIME};

    fn fib() -> FibEntry {
        FibEntry::new(
            "/p",
            vec![
                NextHop { face: FaceId(1), cost_us: 10_000 },
                NextHop { face: FaceId(2), cost_us: 15_000 },
            ],
        )
    }

    fn entry() -> PitEntry {
        PitEntry::new(Name::new("/p", 1), SimTime::ZERO, DEFAULT_PIT_LIFETIME)
    }

    #[test]
    fn new_interest_takes_min_cost() {
        assert_eq!(br_choose(&fib(), None, Some(FaceId(0)), false, SimTime::ZERO), Some(FaceId(1)));
    }

    #[test]
    fn retransmission_prefers_unused_face() {
        let mut e = entry();
        e.insert_out_record(FaceId(1), SimTime::ZERO, DEFAULT_PIT_LIFETIME, true);
        let now = SimTime::from_secs(1);
        assert_eq!(br_choose(&fib(), Some(&e), Some(FaceId(0)), true, now), Some(FaceId(2)));
    }

    #[test]
    fn retransmission_with_all_used_takes_most_recent() {
        let mut e = entry();
        e.insert_out_record(FaceId(1), SimTime::ZERO, DEFAULT_PIT_LIFETIME, true);
        e.insert_out_record(FaceId(2), SimTime::from_millis(500), DEFAULT_PIT_LIFETIME, false);
        let now = SimTime::from_secs(1);
        assert_eq!(br_choose(&fib(), Some(&e), Some(FaceId(0)), true, now), Some(FaceId(2)));
    }

    #[test]
    fn arrival_face_is_excluded() {
        assert_eq!(br_choose(&fib(), None, Some(FaceId(1)), false, SimTime::ZERO), Some(FaceId(2)));
        let single = FibEntry::new("/p", vec![NextHop { face: FaceId(1), cost_us: 1 }]);
        assert_eq!(br_choose(&single, None, Some(FaceId(1)), false, SimTime::ZERO), None);
    }

    #[test]
    fn empty_fib_yields_none() {
        let empty = FibEntry::new("/p", vec![]);
        assert_eq!(br_choose(&empty, None, None, false, SimTime::ZERO), None);
    }
}
