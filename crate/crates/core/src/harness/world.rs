//! One episode of the whole network: routers, links, applications and timers.

use crate::error::SimError;
use crate::ndn::{DataOutcome, FaceId, Fib, Forwarder, InterestOutcome, Name, Packet};
use crate::sim::{derive_seed, substream, Direction, LinkState, Scheduler, SimTime, Stream, Transmit};
use crate::strategy::{IdqfAgent, Strategy};
use crate::topology::{layout, Layout, TopologySpec};

use super::apps::{Consumer, Producer};

/// Per-episode knobs shared by training and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeParams {
    pub duration: SimTime,
    pub interest_rate: f64,
    pub interest_bits: u64,
    pub data_bits: u64,
    pub retx_timeout: SimTime,
    pub pit_lifetime: SimTime,
    pub cs_capacity: usize,
    /// Seed of this episode's traffic randomness.
    pub seed: u64,
    /// Episode index, for error reports.
    pub episode: usize,
}

#[derive(Debug, Clone)]
enum Event {
    Deliver { to: usize, face: FaceId, packet: Packet },
    ConsumerTick { consumer: usize, k: u64 },
    ConsumerRetx { consumer: usize, seq: u64 },
    PitExpire { node: usize, name: Name },
    EpochGuard { node: usize, epoch: u64 },
}

/// RTT sample at a router: Data arrival time and time since the matching upstream send.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RttSample {
    pub at: SimTime,
    pub rtt: SimTime,
}

pub struct World {
    params: EpisodeParams,
    sched: Scheduler<Event>,
    layout: Layout,
    links: Vec<LinkState>,
    pub routers: Vec<Forwarder>,
    pub consumers: Vec<Consumer>,
    pub producers: Vec<Producer>,
    rtt_watch: Vec<bool>,
    /// Per-router RTT log, filled only for watched routers.
    pub rtt_log: Vec<Vec<RttSample>>,
    agent_nodes: Vec<usize>,
    finished: bool,
}

impl World {
    /// Builds a fresh network. Agents are moved in and placed on their node;
    /// they receive the top-K faces of their FIB and start an episode at 0.
    pub fn new(
        topo: &TopologySpec,
        fibs: &[Fib],
        mut agents: Vec<IdqfAgent>,
        params: EpisodeParams,
        rtt_watch_nodes: &[usize],
    ) -> Self {
        let lay = layout(topo);
        let n = lay.routers;
        let links = lay.links.iter().map(|s| LinkState::new(*s)).collect();
        agents.sort_by_key(|a| a.node);
        let agent_nodes: Vec<usize> = agents.iter().map(|a| a.node).collect();
        let mut slots: Vec<Option<IdqfAgent>> = (0..n).map(|_| None).collect();
        for a in agents {
            let node = a.node;
            slots[node] = Some(a);
        }
        let prefix = &topo.producers[0].prefix;
        let routers = slots
            .into_iter()
            .enumerate()
            .map(|(v, slot)| {
                let mut fib = fibs[v].clone();
                let strategy = match slot {
                    Some(mut agent) => {
                        let k = agent.config().top_k_faces;
                        fib.truncate_all(k);
                        let faces: Vec<FaceId> = fib.lookup(prefix).expect("FIB has producer prefix").faces().collect();
                        agent.begin_episode(faces, SimTime::ZERO);
                        Strategy::Idqf(Box::new(agent))
                    }
                    None => Strategy::BestRoute,
                };
                Forwarder::new(v, lay.faces[v].clone(), fib, strategy, params.cs_capacity, params.pit_lifetime)
            })
            .collect();
        let consumers = topo
            .consumers
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Consumer::new(
                    &c.prefix,
                    params.interest_rate,
                    params.interest_bits,
                    params.retx_timeout,
                    substream(params.seed, Stream::Consumer, i as u64),
                )
            })
            .collect();
        let producers = topo
            .producers
            .iter()
            .map(|p| Producer::new(&p.prefix, params.data_bits))
            .collect();
        let mut rtt_watch = vec![false; n];
        for &v in rtt_watch_nodes {
            if v < n {
                rtt_watch[v] = true;
            }
        }
        let mut world = Self {
            params,
            sched: Scheduler::new(),
            layout: lay,
            links,
            routers,
            consumers,
            producers,
            rtt_watch,
            rtt_log: vec![Vec::new(); n],
            agent_nodes,
            finished: false,
        };
        for i in 0..world.consumers.len() {
            let t = world.consumers[i].tick_time(0);
            world.schedule(t, Event::ConsumerTick { consumer: i, k: 0 });
        }
        for v in world.agent_nodes.clone() {
            world.schedule_guard(v);
        }
        world
    }

    /// Seed of episode `episode` derived from a run seed.
    pub fn episode_seed(run_seed: u64, episode: usize) -> u64 {
        derive_seed(run_seed, Stream::Episode, episode as u64)
    }

    pub fn params(&self) -> &EpisodeParams {
        &self.params
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn links(&self) -> &[LinkState] {
        &self.links
    }

    pub fn now(&self) -> SimTime {
        self.sched.now()
    }

    pub fn events_processed(&self) -> u64 {
        self.sched.processed()
    }

    fn schedule(&mut self, at: SimTime, ev: Event) {
        // every caller schedules at or after the current time
        self.sched.schedule(at, ev).expect("event scheduled in the past");
    }

    fn schedule_guard(&mut self, node: usize) {
        if let Some((epoch, at)) = self.routers[node].strategy.agent_mut().and_then(|a| a.take_guard()) {
            self.schedule(at, Event::EpochGuard { node, epoch });
        }
    }

    fn divergence(&self, node: usize, e: crate::error::DivergenceError) -> SimError {
        SimError::Divergence {
            node,
            episode: self.params.episode,
            detail: e.0,
        }
    }

    /// Runs the episode to its end and closes every agent's last epoch.
    pub fn run(&mut self) -> Result<(), SimError> {
        self.run_until(self.params.duration)?;
        self.finish()
    }

    /// Processes events up to `t_end` (bounded by the episode duration).
    pub fn run_until(&mut self, t_end: SimTime) -> Result<(), SimError> {
        let t_end = t_end.min(self.params.duration);
        while let Some((now, ev)) = self.sched.pop_until(t_end) {
            self.dispatch(now, ev)?;
        }
        self.sched.advance_to(t_end);
        Ok(())
    }

    fn finish(&mut self) -> Result<(), SimError> {
        if self.finished {
            return Ok(());
        }
        self.finished = true;
        let now = self.params.duration;
        for v in self.agent_nodes.clone() {
            if let Some(agent) = self.routers[v].strategy.agent_mut() {
                agent.end_episode(now).map_err(|e| SimError::Divergence {
                    node: v,
                    episode: self.params.episode,
                    detail: e.0,
                })?;
            }
        }
        self.sched.clear();
        Ok(())
    }

    /// Takes the agents back out, ordered by node id.
    pub fn into_agents(mut self) -> Vec<IdqfAgent> {
        self.routers
            .iter_mut()
            .filter_map(|r| match std::mem::replace(&mut r.strategy, Strategy::BestRoute) {
                Strategy::Idqf(a) => Some(*a),
                Strategy::BestRoute => None,
            })
            .collect()
    }

    pub fn agent(&self, node: usize) -> Option<&IdqfAgent> {
        self.routers.get(node).and_then(|r| r.strategy.agent())
    }

    fn dispatch(&mut self, now: SimTime, ev: Event) -> Result<(), SimError> {
        match ev {
            Event::Deliver { to, face, packet } => self.deliver(to, face, packet, now),
            Event::ConsumerTick { consumer, k } => {
                let interest = self.consumers[consumer].tick(now);
                let seq = interest.name.seq;
                self.send_from_consumer(consumer, Packet::Interest(interest), now);
                self.schedule(now + self.params.retx_timeout, Event::ConsumerRetx { consumer, seq });
                let next = self.consumers[consumer].tick_time(k + 1);
                if next < self.params.duration {
                    self.schedule(next, Event::ConsumerTick { consumer, k: k + 1 });
                }
                Ok(())
            }
            Event::ConsumerRetx { consumer, seq } => {
                if let Some(interest) = self.consumers[consumer].retx_check(seq, now) {
                    self.send_from_consumer(consumer, Packet::Interest(interest), now);
                    self.schedule(now + self.params.retx_timeout, Event::ConsumerRetx { consumer, seq });
                }
                Ok(())
            }
            Event::PitExpire { node, name } => {
                self.routers[node].expire_entry(&name, now);
                Ok(())
            }
            Event::EpochGuard { node, epoch } => {
                if let Some(agent) = self.routers[node].strategy.agent_mut() {
                    agent.on_guard(epoch, now).map_err(|e| SimError::Divergence {
                        node,
                        episode: self.params.episode,
                        detail: e.0,
                    })?;
                }
                self.schedule_guard(node);
                Ok(())
            }
        }
    }

    fn deliver(&mut self, to: usize, face: FaceId, packet: Packet, now: SimTime) -> Result<(), SimError> {
        let n = self.layout.routers;
        if to < n {
            return self.deliver_to_router(to, face, packet, now);
        }
        let p = self.producers.len();
        if to < n + p {
            let i = to - n;
            if let Packet::Interest(interest) = packet {
                if let Some(data) = self.producers[i].serve(&interest) {
                    let (router, router_face, link) = self.layout.producer_ports[i];
                    self.transmit(link, Direction::Reverse, router, router_face, Packet::Data(data), now);
                }
            }
        } else if let Packet::Data(data) = packet {
            self.consumers[to - n - p].on_data(&data, now);
        }
        Ok(())
    }

    fn deliver_to_router(&mut self, node: usize, in_face: FaceId, packet: Packet, now: SimTime) -> Result<(), SimError> {
        match packet {
            Packet::Interest(interest) => {
                let outcome = self.routers[node]
                    .on_interest(in_face, &interest, now)
                    .map_err(|e| self.divergence(node, e))?;
                match outcome {
                    InterestOutcome::Forwarded { face, .. } => {
                        self.schedule_pit_expiry(node, &interest.name);
                        self.send_from_router(node, face, Packet::Interest(interest), now);
                    }
                    InterestOutcome::Aggregated => self.schedule_pit_expiry(node, &interest.name),
                    InterestOutcome::SatisfiedFromCache(data) => {
                        self.send_from_router(node, in_face, Packet::Data(data), now)
                    }
                    InterestOutcome::Dropped(_) => {}
                }
            }
            Packet::Data(data) => {
                let outcome = self.routers[node]
                    .on_data(in_face, &data, now)
                    .map_err(|e| self.divergence(node, e))?;
                if let DataOutcome::SatisfiedDownstream { faces, out } = outcome {
                    if self.rtt_watch[node] {
                        if let Some(out) = out {
                            self.rtt_log[node].push(RttSample {
                                at: now,
                                rtt: now - out.sent_at,
                            });
                        }
                    }
                    for f in faces {
                        self.send_from_router(node, f, Packet::Data(data.clone()), now);
                    }
                }
            }
        }
        if self.routers[node].strategy.agent().is_some() {
            self.schedule_guard(node);
        }
        Ok(())
    }

    fn schedule_pit_expiry(&mut self, node: usize, name: &Name) {
        if let Some(at) = self.routers[node].pit_expiry(name) {
            self.schedule(at, Event::PitExpire { node, name: name.clone() });
        }
    }

    fn send_from_router(&mut self, node: usize, face: FaceId, packet: Packet, now: SimTime) {
        let f = self.layout.faces[node][face.0 as usize];
        if f.peer < self.layout.routers {
            self.transmit(f.link, f.direction, f.peer, f.peer_face, packet, now);
        } else {
            self.transmit(f.link, f.direction, f.peer, FaceId(0), packet, now);
        }
    }

    fn send_from_consumer(&mut self, i: usize, packet: Packet, now: SimTime) {
        let (router, router_face, link) = self.layout.consumer_ports[i];
        self.transmit(link, Direction::Reverse, router, router_face, packet, now);
    }

    fn transmit(&mut self, link: usize, dir: Direction, to: usize, face: FaceId, packet: Packet, now: SimTime) {
        if let Transmit::Arrives(at) = self.links[link].transmit(dir, packet.size_bits(), now) {
            self.schedule(at, Event::Deliver { to, face, packet });
        }
    }

    /// Packets dropped by full queues so far, over every link.
    pub fn queue_drops(&self) -> u64 {
        self.links
            .iter()
            .map(|l| l.counters(Direction::Forward).dropped + l.counters(Direction::Reverse).dropped)
            .sum()
    }
}
