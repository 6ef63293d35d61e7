use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use idqf::harness::{
    compare, export_csv, mean_throughput, run_evaluation, run_scenario, run_training, write_rewards_csv, CsvPaths,
    Prepared, ScenarioConfig, StrategyKind,
};
use idqf::rl::Checkpoint;
use idqf::strategy::RetxMode;
use idqf::SimError;

#[derive(Parser)]
#[command(name = "idqf", version, about = "NDN forwarding simulator with per-router DQN agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario (training first for idqf) and write the metric CSVs.
    Run(Common),
    /// Train agents; writes checkpoint.txt and rewards.csv.
    Train(Common),
    /// Evaluate trained agents at one or more rates.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Comma-separated interest rates; defaults to the scenario rate.
        #[arg(long, value_delimiter = ',')]
        rates: Vec<f64>,
    },
    /// Best-route versus idqf over a rate sweep.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = [100.0, 150.0, 200.0, 250.0, 300.0])]
        rates: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario TOML file; built-in defaults when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Topology file, overriding the scenario's.
    #[arg(long)]
    topology: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    rate: Option<f64>,
    /// best_route or idqf
    #[arg(long, value_parser = parse_strategy)]
    strategy: Option<StrategyKind>,
    /// br_way or agent_way
    #[arg(long, value_parser = parse_retx_mode)]
    retx_mode: Option<RetxMode>,
    #[arg(long)]
    replay_capacity: Option<usize>,
    #[arg(long)]
    delta_t_ms: Option<u64>,
}

fn parse_strategy(s: &str) -> Result<StrategyKind, String> {
    match s {
        "best_route" | "br" => Ok(StrategyKind::BestRoute),
        "idqf" => Ok(StrategyKind::Idqf),
        _ => Err(format!("unknown strategy `{s}` (expected best_route or idqf)")),
    }
}

fn parse_retx_mode(s: &str) -> Result<RetxMode, String> {
    match s {
        "br_way" => Ok(RetxMode::BrWay),
        "agent_way" => Ok(RetxMode::AgentWay),
        _ => Err(format!("unknown retransmission mode `{s}` (expected br_way or agent_way)")),
    }
}

impl Common {
    fn config(&self) -> Result<ScenarioConfig, SimError> {
        let mut c = match &self.scenario {
            Some(p) => ScenarioConfig::load(p)?,
            None => ScenarioConfig::default(),
        };
        if let Some(t) = &self.topology {
            c.topology = t.to_string_lossy().into_owned();
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(e) = self.episodes {
            c.episodes = e;
        }
        if let Some(r) = self.rate {
            c.interest_rate = r;
        }
        if let Some(s) = self.strategy {
            c.strategy = s;
        }
        if let Some(m) = self.retx_mode {
            c.idqf.retx_mode = m;
        }
        if let Some(r) = self.replay_capacity {
            c.dqn.replay_capacity = r;
        }
        if let Some(d) = self.delta_t_ms {
            c.idqf.delta_t_ms = d;
        }
        Ok(c)
    }
}

fn create_dir(dir: &Path) -> Result<(), SimError> {
    fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))
}

fn execute(cli: Cli) -> Result<(), SimError> {
    match cli.command {
        Command::Run(common) => {
            let prep = Prepared::load(common.config()?)?;
            let report = run_scenario(&prep)?;
            export_csv(&report, &CsvPaths::in_dir(&common.out_dir))?;
            println!(
                "throughput {:.4} Mbps, app delay {:.3} ms",
                report.total_throughput_mbps, report.avg_app_delay_ms
            );
        }
        Command::Train(common) => {
            let prep = Prepared::load(common.config()?)?;
            let trained = run_training(&prep)?;
            create_dir(&common.out_dir)?;
            trained.checkpoint().save(&common.out_dir.join("checkpoint.txt"))?;
            write_rewards_csv(&common.out_dir.join("rewards.csv"), &trained.rewards)?;
            println!("trained {} agents for {} episodes", trained.agents.len(), prep.config.episodes);
        }
        Command::Evaluate {
            common,
            checkpoint,
            rates,
        } => {
            let base = common.config()?;
            let ckpt = Checkpoint::load(&checkpoint)?;
            let rates = if rates.is_empty() { vec![base.interest_rate] } else { rates };
            let mut summary = String::from("rate,throughput_mbps,avg_app_delay_ms\n");
            for rate in rates {
                let prep = Prepared::load(ScenarioConfig {
                    interest_rate: rate,
                    ..base.clone()
                })?;
                let agents = prep.agents_from_checkpoint(&ckpt)?;
                let report = run_evaluation(&prep, &agents)?;
                export_csv(&report, &CsvPaths::in_dir(&common.out_dir.join(format!("rate_{rate}"))))?;
                summary.push_str(&format!(
                    "{rate},{},{}\n",
                    report.total_throughput_mbps, report.avg_app_delay_ms
                ));
            }
            create_dir(&common.out_dir)?;
            let path = common.out_dir.join("evaluation.csv");
            fs::write(&path, summary).map_err(|e| SimError::io(&path, e))?;
        }
        Command::Compare { common, rates, seeds } => {
            let base = common.config()?;
            let topo = base.load_topology()?;
            let rows = compare(&base, &topo, &rates, seeds)?;
            let mut text = String::from("rate,strategy,seed,throughput_mbps,avg_app_delay_ms\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.rate,
                    r.strategy.as_str(),
                    r.seed_index,
                    r.throughput_mbps,
                    r.avg_app_delay_ms
                ));
            }
            create_dir(&common.out_dir)?;
            let path = common.out_dir.join("compare.csv");
            fs::write(&path, text).map_err(|e| SimError::io(&path, e))?;
            for &rate in &rates {
                let br = mean_throughput(&rows, rate, StrategyKind::BestRoute);
                let dq = mean_throughput(&rows, rate, StrategyKind::Idqf);
                println!("rate {rate}: best_route {br:.4} Mbps, idqf {dq:.4} Mbps");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                SimError::Config(_)
                | SimError::Topology(_)
                | SimError::Checkpoint(_)
                | SimError::InvalidLink(_) => 2,
                SimError::Divergence { .. } => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
