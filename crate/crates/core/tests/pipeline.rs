mod common;

use common::*;
use idqf::ndn::{Data, DataOutcome, FaceId, Interest, InterestOutcome, Name};
use idqf::sim::SimTime;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn forwarder_matches_reference_pit((upstream, ops) in forwarder_case()) {
        prop_assert_eq!(check_forwarder_trace(&upstream, &ops), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn small_networks_conserve_packets(net in small_net()) {
        prop_assert_eq!(check_small_net(&net), Ok(()));
    }
}

#[test]
fn data_after_lifetime_is_unsolicited() {
    let topo = idqf::topology::parse_topology(
        "node 0 a\nnode 1 b\nlink 0 1 delay_us=1000 bw_bps=1000000 queue=10\nproducer 1 /p\nconsumer 0 /p\n",
    )
    .unwrap();
    let fibs = idqf::topology::compute_fib(&topo).unwrap();
    let mut r = idqf::ndn::Forwarder::new(
        0,
        idqf::topology::layout(&topo).faces[0].clone(),
        fibs[0].clone(),
        idqf::strategy::Strategy::BestRoute,
        0,
        LIFETIME,
    );
    let name = Name::new("/p", 5);
    let i = Interest { name: name.clone(), nonce: 1, issued_at: SimTime::ZERO, size_bits: 320 };
    let consumer_face = FaceId(1);
    assert!(matches!(
        r.on_interest(consumer_face, &i, SimTime::ZERO).unwrap(),
        InterestOutcome::Forwarded { face: FaceId(0), retransmission: false }
    ));
    assert!(!r.expire_entry(&name, SimTime::from_millis(1999)));
    assert!(r.expire_entry(&name, SimTime::from_secs(2)));
    let d = Data { name, payload_bits: 8200 };
    assert_eq!(r.on_data(FaceId(0), &d, SimTime::from_millis(2001)).unwrap(), DataOutcome::Unsolicited);
    assert_eq!(r.counters.pit_expired, 1);
}
