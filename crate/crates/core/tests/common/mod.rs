//! Oracles and scenario builders shared by the integration tests and the
//! acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeMap;

use idqf::harness::{
    run_scenario, sample_variance, EpisodeParams, MetricsReport, Prepared, ScenarioConfig,
    StrategyKind, World,
};
use idqf::ndn::{
    Data, DataOutcome, DropReason, Face, FaceId, Fib, FibEntry, Forwarder, Interest, InterestOutcome, Name,
    NextHop,
};
use idqf::rl::{act, epsilon_at, train_step, DqnHyper, Experience, Mlp, ReplayBuffer, Target};
use idqf::sim::{substream, Direction, SimTime, Stream};
use idqf::strategy::Strategy as Forwarding;
use idqf::topology::{compute_fib, parse_topology, TopologySpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;

pub const LIFETIME: SimTime = SimTime::from_secs(2);

// ---------------------------------------------------------------------------
// Forwarder against a reference PIT model

#[derive(Debug, Clone)]
pub enum Op {
    Interest { face: u32, seq: u64, dt_ms: u64 },
    Data { face: u32, seq: u64, dt_ms: u64 },
    Idle { dt_ms: u64 },
}

fn op_strategy() -> impl Strategy<Value = Op> {
    prop_oneof![
        4 => (0u32..4, 0u64..4, 0u64..900).prop_map(|(face, seq, dt_ms)| Op::Interest { face, seq, dt_ms }),
        2 => (0u32..4, 0u64..4, 0u64..900).prop_map(|(face, seq, dt_ms)| Op::Data { face, seq, dt_ms }),
        1 => (0u64..2500).prop_map(|dt_ms| Op::Idle { dt_ms }),
    ]
}

#[derive(Debug, Default, Clone)]
struct ModelEntry {
    ins: Vec<(u32, SimTime)>,
    outs: Vec<(u32, SimTime)>,
    expires: SimTime,
}

impl ModelEntry {
    fn pending(&self, now: SimTime) -> impl Iterator<Item = u32> + '_ {
        self.ins.iter().filter(move |(_, t)| *t + LIFETIME > now).map(|(f, _)| *f)
    }

    fn touch_in(&mut self, face: u32, now: SimTime) {
        self.ins.retain(|(f, _)| *f != face);
        self.ins.push((face, now));
        self.expires = self.expires.max(now + LIFETIME);
    }

    fn touch_out(&mut self, face: u32, now: SimTime) {
        self.outs.retain(|(f, _)| *f != face);
        self.outs.push((face, now + LIFETIME));
        self.expires = self.expires.max(now + LIFETIME);
    }
}

fn four_face_router(upstream: &[u32]) -> Forwarder {
    let faces = (0..4)
        .map(|i| Face {
            id: FaceId(i),
            peer: 10 + i as usize,
            peer_face: FaceId(0),
            link: i as usize,
            direction: Direction::Forward,
        })
        .collect();
    let mut fib = Fib::new();
    let hops = upstream
        .iter()
        .enumerate()
        .map(|(i, &f)| NextHop { face: FaceId(f), cost_us: 1000 * (i as u64 + 1) })
        .collect();
    fib.insert(FibEntry::new("/p", hops));
    Forwarder::new(0, faces, fib, Forwarding::BestRoute, 0, LIFETIME)
}

/// Replays `ops` on a best-route router and on the reference model, failing on
/// the first disagreement.
pub fn check_forwarder_trace(upstream: &[u32], ops: &[Op]) -> Result<(), String> {
    let mut r = four_face_router(upstream);
    let mut model: BTreeMap<u64, ModelEntry> = BTreeMap::new();
    let mut now = SimTime::ZERO;
    let mut satisfied = 0u64;
    let mut unsolicited = 0u64;
    for (step, op) in ops.iter().enumerate() {
        let dt = match op {
            Op::Interest { dt_ms, .. } | Op::Data { dt_ms, .. } | Op::Idle { dt_ms } => *dt_ms,
        };
        now = now + SimTime::from_millis(dt);
        r.expire_pit(now);
        model.retain(|_, e| e.expires > now);
        match *op {
            Op::Interest { face, seq, .. } => {
                let interest = Interest {
                    name: Name::new("/p", seq),
                    nonce: step as u64,
                    issued_at: now,
                    size_bits: 320,
                };
                let got = r.on_interest(FaceId(face), &interest, now).map_err(|e| e.0)?;
                let entry = model.get(&seq).cloned();
                let other = entry.as_ref().is_some_and(|e| e.pending(now).any(|f| f != face));
                let own = entry.as_ref().is_some_and(|e| e.pending(now).any(|f| f == face));
                if other && !own {
                    if got != InterestOutcome::Aggregated {
                        return Err(format!("step {step}: expected aggregation, got {got:?}"));
                    }
                    model.get_mut(&seq).unwrap().touch_in(face, now);
                    continue;
                }
                let retx = entry.as_ref().is_some_and(|e| e.outs.iter().any(|(_, exp)| *exp > now));
                let e = model.entry(seq).or_insert_with(|| ModelEntry { expires: now + LIFETIME, ..Default::default() });
                e.touch_in(face, now);
                let eligible: Vec<u32> = upstream.iter().copied().filter(|&f| f != face).collect();
                match got {
                    InterestOutcome::Forwarded { face: out, retransmission } => {
                        if retransmission != retx {
                            return Err(format!("step {step}: retransmission flag {retransmission}, model says {retx}"));
                        }
                        if !eligible.contains(&out.0) {
                            return Err(format!("step {step}: forwarded on ineligible face {}", out.0));
                        }
                        if !retx && out.0 != eligible[0] {
                            return Err(format!("step {step}: new interest not on best face"));
                        }
                        e.touch_out(out.0, now);
                    }
                    InterestOutcome::Dropped(DropReason::NoFace) if eligible.is_empty() => {
                        if e.outs.is_empty() {
                            model.remove(&seq);
                        }
                    }
                    other => return Err(format!("step {step}: unexpected {other:?}")),
                }
            }
            Op::Data { face, seq, .. } => {
                let data = Data { name: Name::new("/p", seq), payload_bits: 8200 };
                let got = r.on_data(FaceId(face), &data, now).map_err(|e| e.0)?;
                match (model.remove(&seq), got) {
                    (None, DataOutcome::Unsolicited) => unsolicited += 1,
                    (Some(e), DataOutcome::SatisfiedDownstream { faces, .. }) => {
                        let mut want: Vec<u32> = e.pending(now).filter(|&f| f != face).collect();
                        let mut have: Vec<u32> = faces.iter().map(|f| f.0).collect();
                        want.sort_unstable();
                        have.sort_unstable();
                        if want != have {
                            return Err(format!("step {step}: data sent to {have:?}, model says {want:?}"));
                        }
                        satisfied += 1;
                    }
                    (m, got) => return Err(format!("step {step}: model entry {m:?} but data outcome {got:?}")),
                }
            }
            Op::Idle { .. } => {}
        }
        if r.pit.len() != model.len() {
            return Err(format!("step {step}: PIT holds {} entries, model {}", r.pit.len(), model.len()));
        }
        for e in r.pit.iter() {
            if e.entry_expires_at > now + LIFETIME {
                return Err(format!("step {step}: entry outlives its last refresh by more than the lifetime"));
            }
        }
        let c = &r.counters;
        if c.interests_in != c.forwarded + c.aggregated + c.cache_hits + c.dropped {
            return Err(format!("step {step}: interest counters unbalanced {c:?}"));
        }
        if c.data_in != satisfied + unsolicited || c.unsolicited != unsolicited {
            return Err(format!("step {step}: data counters unbalanced {c:?}"));
        }
    }
    Ok(())
}

pub fn forwarder_case() -> impl Strategy<Value = (Vec<u32>, Vec<Op>)> {
    let upstream = prop_oneof![
        Just(vec![1u32]),
        Just(vec![1u32, 2]),
        Just(vec![2u32, 1, 3]),
        Just(vec![0u32, 1]),
    ];
    (upstream, prop::collection::vec(op_strategy(), 1..40))
}

// ---------------------------------------------------------------------------
// Whole-network flow balance on random small topologies

#[derive(Debug, Clone)]
pub struct SmallNet {
    pub text: String,
    pub rate: f64,
    pub seed: u64,
    pub agent: Option<usize>,
}

pub fn small_net() -> impl Strategy<Value = SmallNet> {
    (3usize..=5)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
            let extra = prop::collection::vec((0..n, 0..n), 0..4);
            let links = prop::collection::vec((1u64..20, 1u64..8, 3usize..40), n + 4);
            (Just(n), parents, extra, links, 0..n, 0..n, 20.0f64..400.0, any::<u64>(), any::<bool>())
        })
        .prop_map(|(n, parents, extra, links, prod, cons, rate, seed, with_agent)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            for (a, b) in extra {
                let (a, b) = (a.min(b), a.max(b));
                if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)) {
                    edges.push((a, b));
                }
            }
            let mut text = String::new();
            for v in 0..n {
                text += &format!("node {v} r{v}\n");
            }
            for (i, (a, b)) in edges.iter().enumerate() {
                let (d, bw, q) = links[i % links.len()];
                text += &format!("link {a} {b} delay_us={} bw_bps={} queue={q}\n", d * 1000, bw * 500_000);
            }
            text += &format!("producer {prod} /p\nconsumer {cons} /p\n");
            let degree = |v: usize| edges.iter().filter(|&&(a, b)| a == v || b == v).count();
            let agent = (0..n).find(|&v| with_agent && v != prod && degree(v) >= 2);
            SmallNet { text, rate, seed, agent }
        })
}

pub fn small_params(rate: f64, seed: u64, secs: u64) -> EpisodeParams {
    EpisodeParams {
        duration: SimTime::from_secs(secs),
        interest_rate: rate,
        interest_bits: 320,
        data_bits: 8200,
        retx_timeout: SimTime::from_secs(1),
        pit_lifetime: LIFETIME,
        cs_capacity: 0,
        seed,
        episode: 0,
    }
}

/// Runs one small network and checks the conservation laws of the pipeline.
pub fn check_small_net(net: &SmallNet) -> Result<(), String> {
    let topo = parse_topology(&net.text).map_err(|e| e.to_string())?;
    let fibs = compute_fib(&topo).map_err(|e| e.to_string())?;
    let agents = match net.agent {
        Some(v) => {
            let cfg = ScenarioConfig { agents: vec![v], seed: net.seed, ..Default::default() };
            Prepared::new(cfg, topo.clone()).map_err(|e| e.to_string())?.fresh_agents()
        }
        None => Vec::new(),
    };
    let secs = 3;
    let mut w = World::new(&topo, &fibs, agents, small_params(net.rate, net.seed, secs), &[]);
    w.run().map_err(|e| e.to_string())?;
    for r in &w.routers {
        let c = &r.counters;
        if c.interests_in != c.forwarded + c.aggregated + c.cache_hits + c.dropped {
            return Err(format!("router {}: interests unbalanced {c:?}", r.node));
        }
        if c.data_in < c.unsolicited {
            return Err(format!("router {}: more unsolicited than received", r.node));
        }
        for e in r.pit.iter() {
            if e.entry_expires_at > SimTime::from_secs(secs) + LIFETIME {
                return Err(format!("router {}: PIT entry outlives the episode by more than the lifetime", r.node));
            }
        }
    }
    let consumer = &w.consumers[0];
    let received = consumer.received.len() as u64;
    if received + consumer.outstanding.len() as u64 != consumer.sent_new {
        return Err(format!(
            "consumer: {} received + {} outstanding != {} issued",
            received,
            consumer.outstanding.len(),
            consumer.sent_new
        ));
    }
    if w.producers[0].served < received {
        return Err(format!("producer served {} but consumer got {received}", w.producers[0].served));
    }
    let floor = rtt_floor(&topo, 320, 8200);
    if let Some(s) = consumer.samples.iter().find(|s| s.delay.as_secs_f64() + 1e-9 < floor) {
        return Err(format!("app delay {:?} below the propagation floor {floor}", s.delay));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Independent path oracles

/// All-pairs shortest propagation delays (µs) by Floyd-Warshall.
pub fn all_pairs(topo: &TopologySpec) -> Vec<Vec<u64>> {
    let n = topo.node_count();
    let mut d = vec![vec![u64::MAX / 4; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for l in &topo.links {
        let w = l.spec.delay_us;
        d[l.a][l.b] = d[l.a][l.b].min(w);
        d[l.b][l.a] = d[l.b][l.a].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Router sequence of one shortest path, ties broken towards lower ids.
pub fn shortest_path(topo: &TopologySpec, from: usize, to: usize) -> Vec<usize> {
    let d = all_pairs(topo);
    let mut path = vec![from];
    let mut v = from;
    while v != to {
        let mut nbrs: Vec<(usize, u64)> = topo
            .links
            .iter()
            .filter_map(|l| {
                if l.a == v {
                    Some((l.b, l.spec.delay_us))
                } else if l.b == v {
                    Some((l.a, l.spec.delay_us))
                } else {
                    None
                }
            })
            .collect();
        nbrs.sort_unstable();
        v = nbrs
            .into_iter()
            .find(|&(u, w)| w + d[u][to] == d[v][to])
            .map(|(u, _)| u)
            .expect("path exists");
        path.push(v);
    }
    path
}

fn hop_rtt(delay_us: u64, bps: u64, ib: u64, db: u64) -> f64 {
    2.0 * delay_us as f64 * 1e-6 + (ib + db) as f64 / bps as f64
}

/// Uncongested round trip (seconds) from `router` to the first producer app:
/// on every hop, including the producer access link, propagation twice plus
/// serialization of one interest and one data packet.
pub fn analytic_router_rtt(topo: &TopologySpec, router: usize, ib: u64, db: u64) -> f64 {
    let p = &topo.producers[0];
    let path = shortest_path(topo, router, p.node);
    let core: f64 = path
        .windows(2)
        .map(|w| {
            let l = topo.link_between(w[0], w[1]).unwrap();
            hop_rtt(l.spec.delay_us, l.spec.bandwidth_bps, ib, db)
        })
        .sum();
    core + hop_rtt(p.access.delay_us, p.access.bandwidth_bps, ib, db)
}

/// Smallest possible app round trip over any path, propagation plus serialization.
pub fn rtt_floor(topo: &TopologySpec, ib: u64, db: u64) -> f64 {
    let n = topo.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for l in &topo.links {
        let w = hop_rtt(l.spec.delay_us, l.spec.bandwidth_bps, ib, db);
        d[l.a][l.b] = d[l.a][l.b].min(w);
        d[l.b][l.a] = d[l.b][l.a].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    let (c, p) = (&topo.consumers[0], &topo.producers[0]);
    d[c.node][p.node]
        + hop_rtt(c.access.delay_us, c.access.bandwidth_bps, ib, db)
        + hop_rtt(p.access.delay_us, p.access.bandwidth_bps, ib, db)
}

/// Uncongested app-level round trip of the first consumer, access link included.
pub fn analytic_rtt(topo: &TopologySpec, ib: u64, db: u64) -> f64 {
    let c = &topo.consumers[0];
    analytic_router_rtt(topo, c.node, ib, db) + hop_rtt(c.access.delay_us, c.access.bandwidth_bps, ib, db)
}

/// Every simple path from `from` to `to` by depth-first enumeration.
pub fn simple_path_costs(topo: &TopologySpec, from: usize, to: usize) -> Vec<u64> {
    fn go(topo: &TopologySpec, v: usize, to: usize, seen: &mut Vec<bool>, cost: u64, out: &mut Vec<u64>) {
        if v == to {
            out.push(cost);
            return;
        }
        for l in &topo.links {
            let u = if l.a == v {
                l.b
            } else if l.b == v {
                l.a
            } else {
                continue;
            };
            if !seen[u] {
                seen[u] = true;
                go(topo, u, to, seen, cost + l.spec.delay_us, out);
                seen[u] = false;
            }
        }
    }
    let mut seen = vec![false; topo.node_count()];
    seen[from] = true;
    let mut out = Vec::new();
    go(topo, from, to, &mut seen, 0, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Learning oracles

/// Largest relative error between backprop and central differences over
/// `nets` random 4-8-2 networks.
pub fn gradient_check(nets: usize, h: f64) -> f64 {
    let mut rng = substream(99, Stream::Agent, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..nets {
        let mut net = Mlp::glorot(4, 8, 2, &mut rng);
        for b in net.b1.iter_mut().chain(net.b2.iter_mut()) {
            *b = rng.gen_range(-0.5..0.5);
        }
        let inputs: Vec<Vec<f64>> = (0..6).map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let targets: Vec<Target<'_>> = inputs
            .iter()
            .map(|x| Target { input: x, action: rng.gen_range(0..2), value: rng.gen_range(-2.0..2.0) })
            .collect();
        let (_, g) = net.loss_and_gradients(&targets);
        let analytic = g.flat();
        let base = net.params();
        let mut numeric = vec![0.0; base.len()];
        for i in 0..base.len() {
            let mut p = base.clone();
            p[i] = base[i] + h;
            net.set_params(&p);
            let up = net.loss_and_gradients(&targets).0;
            p[i] = base[i] - h;
            net.set_params(&p);
            let down = net.loss_and_gradients(&targets).0;
            numeric[i] = (up - down) / (2.0 * h);
        }
        net.set_params(&base);
        let diff: f64 = analytic.iter().zip(&numeric).map(|(a, n)| (a - n).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt() + numeric.iter().map(|n| n * n).sum::<f64>().sqrt();
        worst = worst.max(if scale == 0.0 { 0.0 } else { diff / scale });
    }
    worst
}

/// Trains a fresh Q-network for `steps` decisions in a stationary two-face
/// environment where face 0 costs 50 ms and face 1 costs 1 s, then returns the
/// fraction of greedy decisions that pick face 0 over random states.
pub fn bandit_greedy_share(seed: u64, steps: usize) -> f64 {
    let hyper = DqnHyper { lr: 0.01, gamma: 0.9, decay_rate: 0.01, ..Default::default() };
    let mut rng = substream(seed, Stream::Agent, 0);
    let mut net = Mlp::glorot(4, 32, 2, &mut rng);
    let mut buffer = ReplayBuffer::new(hyper.replay_capacity);
    let observe = |rng: &mut idqf::sim::SimRng| -> Vec<f64> { (0..4).map(|_| rng.gen_range(0.0..0.1)).collect() };
    let mut state = observe(&mut rng);
    for step in 0..steps {
        let a = act(&net, &state, epsilon_at(step as u64, &hyper), &mut rng);
        let reward = if a == 0 { -0.05 } else { -1.0 } + rng.gen_range(-0.01..0.01);
        let next = observe(&mut rng);
        buffer.push(Experience { state, action: a, reward, next_state: next.clone(), terminal: false });
        train_step(&mut net, None, &buffer, &hyper, &mut rng).expect("finite training");
        state = next;
    }
    let trials = 1000;
    let hits = (0..trials).filter(|_| act(&net, &observe(&mut rng), 0.0, &mut rng) == 0).count();
    hits as f64 / trials as f64
}

// ---------------------------------------------------------------------------
// Scenario presets

pub fn best_route(rate: f64) -> ScenarioConfig {
    ScenarioConfig { interest_rate: rate, strategy: StrategyKind::BestRoute, ..Default::default() }
}

pub fn run_report(cfg: ScenarioConfig) -> MetricsReport {
    run_scenario(&Prepared::load(cfg).expect("valid scenario")).expect("scenario runs")
}

/// Training preset for the reward-variance comparisons.
pub fn variance_preset(seed: u64, agents: &[usize], replay_capacity: usize) -> ScenarioConfig {
    let mut c = ScenarioConfig { seed, agents: agents.to_vec(), ..Default::default() };
    c.idqf.delta_t_ms = 20;
    c.dqn.replay_capacity = replay_capacity;
    c
}

/// Sample variance of one agent's per-episode cumulative rewards.
pub fn reward_variance(cfg: ScenarioConfig, node: usize) -> f64 {
    let prep = Prepared::load(cfg).expect("valid scenario");
    let out = idqf::harness::run_training(&prep).expect("training runs");
    sample_variance(&out.rewards_of(node))
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Runs `cases` generated values through `check`, returning the first failure.
pub fn run_cases<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Result<(), String>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Scripted retransmission trace

/// Agent whose network always prefers its first-ranked face.
pub fn pinned_agent(node: usize, features: &[idqf::rl::Feature], delta_t_ms: u64) -> idqf::strategy::IdqfAgent {
    use idqf::rl::{AgentCheckpoint, FeatureSet};
    use idqf::strategy::{IdqfAgent, IdqfConfig};
    let config = IdqfConfig {
        delta_t: SimTime::from_millis(delta_t_ms),
        features: FeatureSet::from_features(features),
        ..Default::default()
    };
    let mut net = Mlp::zeros(config.input_dim(), 4, 2);
    net.b2 = vec![1.0, 0.0];
    let ckpt = AgentCheckpoint {
        node,
        features: features.to_vec(),
        top_k: 2,
        decisions: 0,
        hyper: DqnHyper::default(),
        net,
    };
    let mut agent = IdqfAgent::from_checkpoint(&ckpt, config, 1).expect("matching dims");
    agent.set_learning(false);
    agent
}

/// Outcome of the scripted four-retransmissions, one-new epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTrace {
    pub retransmitted: u64,
    pub new: u64,
    pub retx_by_origin: Vec<u64>,
    pub retx_ratio: Vec<f64>,
    pub retx_diff: f64,
    pub features: Vec<f64>,
}

/// Router with faces 0 (downstream), 1 and 2 (upstream, rank order). Three
/// interests were first sent on face 1 and one on face 2; all four come back
/// as retransmissions during an epoch in which the agent holds face 1, plus
/// one new interest.
pub fn figure_trace() -> FigureTrace {
    use idqf::rl::{retx_diff, retx_ratio, Feature};
    let faces = (0..3)
        .map(|i| Face { id: FaceId(i), peer: 10 + i as usize, peer_face: FaceId(0), link: i as usize, direction: Direction::Forward })
        .collect();
    let mut fib = Fib::new();
    fib.insert(FibEntry::new(
        "/p",
        vec![NextHop { face: FaceId(1), cost_us: 10_000 }, NextHop { face: FaceId(2), cost_us: 20_000 }],
    ));
    let mut agent = pinned_agent(0, &[Feature::RetxRatio, Feature::RetxDiff], 100);
    agent.begin_episode(vec![FaceId(1), FaceId(2)], SimTime::ZERO);
    let mut r = Forwarder::new(0, faces, fib, Forwarding::Idqf(Box::new(agent)), 0, LIFETIME);
    let t_orig = SimTime::from_millis(50);
    for (seq, up) in [(1, 1), (2, 1), (3, 1), (4, 2)] {
        let e = r.pit.get_or_insert(&Name::new("/p", seq), t_orig, LIFETIME);
        e.insert_in_record(FaceId(0), t_orig, LIFETIME);
        e.insert_out_record(FaceId(up), t_orig, LIFETIME, true);
    }
    let interest = |seq: u64, ms: u64| Interest {
        name: Name::new("/p", seq),
        nonce: seq,
        issued_at: SimTime::from_millis(ms),
        size_bits: 320,
    };
    // first arrival in the second epoch closes the first one
    for (i, seq) in [1u64, 2, 3, 4].into_iter().enumerate() {
        let t = 120 + 10 * i as u64;
        let out = r.on_interest(FaceId(0), &interest(seq, t), SimTime::from_millis(t)).unwrap();
        assert_eq!(out, InterestOutcome::Forwarded { face: FaceId(1), retransmission: true }, "seq {seq}");
    }
    let out = r.on_interest(FaceId(0), &interest(9, 170), SimTime::from_millis(170)).unwrap();
    assert_eq!(out, InterestOutcome::Forwarded { face: FaceId(1), retransmission: false });
    let agent = r.strategy.agent().unwrap();
    let s = agent.stats();
    FigureTrace {
        retransmitted: s.retransmitted,
        new: s.new,
        retx_by_origin: s.retx_by_origin.clone(),
        retx_ratio: s.retx_by_origin.iter().map(|&rj| retx_ratio(rj, s.retransmitted)).collect(),
        retx_diff: retx_diff(s.retransmitted, s.new),
        features: agent.observe(),
    }
}
