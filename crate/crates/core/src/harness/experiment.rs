//! Training, evaluation and strategy-comparison loops.

use rayon::prelude::*;

use crate::error::SimError;
use crate::ndn::Fib;
use crate::rl::Checkpoint;
use crate::sim::{derive_seed, Stream};
use crate::strategy::IdqfAgent;
use crate::topology::{compute_fib, TopologySpec};

use super::config::{ScenarioConfig, StrategyKind};
use super::metrics::{MetricsReport, RewardRow};
use super::world::{EpisodeParams, World};

/// A validated scenario with its topology and FIBs, ready to run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: ScenarioConfig,
    pub topology: TopologySpec,
    pub fibs: Vec<Fib>,
}

impl Prepared {
    pub fn new(config: ScenarioConfig, topology: TopologySpec) -> Result<Self, SimError> {
        config.validate(&topology)?;
        let fibs = compute_fib(&topology)?;
        Ok(Self {
            config,
            topology,
            fibs,
        })
    }

    pub fn load(config: ScenarioConfig) -> Result<Self, SimError> {
        let topo = config.load_topology()?;
        Self::new(config, topo)
    }

    pub fn episode_params(&self, seed: u64, episode: usize) -> EpisodeParams {
        let c = &self.config;
        EpisodeParams {
            duration: c.duration(),
            interest_rate: c.interest_rate,
            interest_bits: c.interest_bits,
            data_bits: c.data_payload_bits,
            retx_timeout: c.retx_timeout(),
            pit_lifetime: c.pit_lifetime(),
            cs_capacity: c.cs_capacity,
            seed,
            episode,
        }
    }

    /// Untrained agents for every agent node, seeded from the run seed.
    pub fn fresh_agents(&self) -> Vec<IdqfAgent> {
        let c = &self.config;
        c.agent_nodes()
            .iter()
            .map(|&v| IdqfAgent::new(v, c.idqf.to_config(), c.dqn.clone(), c.seed))
            .collect()
    }

    /// Agents restored from `ckpt`, one per configured agent node.
    pub fn agents_from_checkpoint(&self, ckpt: &Checkpoint) -> Result<Vec<IdqfAgent>, SimError> {
        let c = &self.config;
        c.agent_nodes()
            .iter()
            .map(|&v| {
                let a = ckpt
                    .agent(v)
                    .ok_or_else(|| SimError::Checkpoint(format!("no agent for node {v} in checkpoint")))?;
                IdqfAgent::from_checkpoint(a, c.idqf.to_config(), c.seed).map_err(SimError::Checkpoint)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub agents: Vec<IdqfAgent>,
    pub rewards: Vec<RewardRow>,
}

impl TrainingOutcome {
    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            agents: self.agents.iter().map(|a| a.to_checkpoint()).collect(),
        }
    }

    /// Cumulative reward per episode of the agent at `node`.
    pub fn rewards_of(&self, node: usize) -> Vec<f64> {
        self.rewards
            .iter()
            .filter(|r| r.agent == node)
            .map(|r| r.cumulative_reward)
            .collect()
    }
}

/// Trains fresh agents for the configured number of episodes. Every episode
/// starts from an empty network; agent networks, buffers and exploration
/// schedules carry over.
pub fn run_training(prep: &Prepared) -> Result<TrainingOutcome, SimError> {
    let c = &prep.config;
    if c.strategy != StrategyKind::Idqf {
        return Err(SimError::Config("training requires strategy = \"idqf\"".into()));
    }
    let mut agents = prep.fresh_agents();
    let mut rewards = Vec::new();
    for ep in 0..c.episodes {
        let mut world = World::new(
            &prep.topology,
            &prep.fibs,
            agents,
            prep.episode_params(World::episode_seed(c.seed, ep), ep),
            &c.agents,
        );
        world.run()?;
        agents = world.into_agents();
        for a in &agents {
            rewards.push(RewardRow {
                agent: a.node,
                episode: ep,
                cumulative_reward: *a.episode_rewards().last().expect("episode logged"),
            });
        }
    }
    Ok(TrainingOutcome { agents, rewards })
}

/// Seed of evaluation replicate `r`.
pub fn replicate_seed(run_seed: u64, r: usize) -> u64 {
    derive_seed(run_seed, Stream::Replicate, r as u64)
}

/// Greedy evaluation with frozen agents over the configured replicates.
/// Replicates run in parallel and are merged in seed order.
pub fn run_evaluation(prep: &Prepared, agents: &[IdqfAgent]) -> Result<MetricsReport, SimError> {
    let c = &prep.config;
    let reports: Vec<Result<MetricsReport, SimError>> = (0..c.replicates)
        .into_par_iter()
        .map(|r| {
            let seed = replicate_seed(c.seed, r);
            evaluate_once(prep, agents, seed, r)
        })
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(MetricsReport::merge(&reports))
}

/// One greedy evaluation episode with traffic seed `seed`.
pub fn evaluate_once(prep: &Prepared, agents: &[IdqfAgent], seed: u64, episode: usize) -> Result<MetricsReport, SimError> {
    let mut frozen: Vec<IdqfAgent> = agents.to_vec();
    for a in &mut frozen {
        a.set_learning(false);
    }
    let mut world = World::new(
        &prep.topology,
        &prep.fibs,
        frozen,
        prep.episode_params(seed, episode),
        &prep.config.agents,
    );
    world.run()?;
    Ok(MetricsReport::from_world(&world, prep.config.warmup(), seed))
}

/// `run` subcommand: trains (for idqf) and evaluates one scenario.
/// The report's reward rows are the training log.
pub fn run_scenario(prep: &Prepared) -> Result<MetricsReport, SimError> {
    match prep.config.strategy {
        StrategyKind::BestRoute => run_evaluation(prep, &[]),
        StrategyKind::Idqf => {
            let trained = run_training(prep)?;
            let mut report = run_evaluation(prep, &trained.agents)?;
            report.rewards = trained.rewards;
            Ok(report)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub rate: f64,
    pub strategy: StrategyKind,
    pub seed_index: usize,
    pub throughput_mbps: f64,
    pub avg_app_delay_ms: f64,
}

/// Best-route versus trained agents at each rate. For every (rate, seed) the
/// agents are trained at that rate with that seed and then evaluated greedily
/// on the same traffic seed as best-route.
pub fn compare(base: &ScenarioConfig, topo: &TopologySpec, rates: &[f64], seeds: usize) -> Result<Vec<CompareRow>, SimError> {
    let tasks: Vec<(f64, usize)> = rates
        .iter()
        .flat_map(|&r| (0..seeds).map(move |s| (r, s)))
        .collect();
    let results: Vec<Result<[CompareRow; 2], SimError>> = tasks
        .par_iter()
        .map(|&(rate, s)| {
            let seed = replicate_seed(base.seed, s);
            let idqf_cfg = ScenarioConfig {
                interest_rate: rate,
                seed,
                strategy: StrategyKind::Idqf,
                ..base.clone()
            };
            let br_cfg = ScenarioConfig {
                strategy: StrategyKind::BestRoute,
                ..idqf_cfg.clone()
            };
            let idqf = Prepared::new(idqf_cfg, topo.clone())?;
            let br = Prepared::new(br_cfg, topo.clone())?;
            let trained = run_training(&idqf)?;
            let a = evaluate_once(&idqf, &trained.agents, seed, 0)?;
            let b = evaluate_once(&br, &[], seed, 0)?;
            let row = |strategy, m: &MetricsReport| CompareRow {
                rate,
                strategy,
                seed_index: s,
                throughput_mbps: m.total_throughput_mbps,
                avg_app_delay_ms: m.avg_app_delay_ms,
            };
            Ok([row(StrategyKind::BestRoute, &b), row(StrategyKind::Idqf, &a)])
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Mean throughput per strategy at `rate` from [`compare`] rows.
pub fn mean_throughput(rows: &[CompareRow], rate: f64, strategy: StrategyKind) -> f64 {
    let xs: Vec<f64> = rows
        .iter()
        .filter(|r| r.rate == rate && r.strategy == strategy)
        .map(|r| r.throughput_mbps)
        .collect();
    xs.iter().sum::<f64>() / xs.len().max(1) as f64
}
