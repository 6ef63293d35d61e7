//! Per-run metrics and CSV export.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::SimError;
use crate::sim::SimTime;

use super::world::World;

#[derive(Debug, Clone, PartialEq)]
pub struct RewardRow {
    pub agent: usize,
    pub episode: usize,
    pub cumulative_reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateSummary {
    pub seed: u64,
    pub throughput_mbps: f64,
    pub avg_app_delay_ms: f64,
}

/// Consumer-side metrics of one or more evaluation runs.
///
/// Totals cover only data received at or after the warmup cutoff. The app
/// delay averages satisfied interests only; interests never answered do not
/// contribute a sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsReport {
    pub duration_s: f64,
    pub warmup_s: f64,
    /// (second, Mbps) for every whole second of the run.
    pub throughput: Vec<(u64, f64)>,
    /// (second, mean app delay in ms) for each second with at least one sample.
    pub delay: Vec<(u64, f64)>,
    pub throughput_mean_mbps: f64,
    pub throughput_std_mbps: f64,
    pub delay_mean_ms: f64,
    pub delay_std_ms: f64,
    pub total_throughput_mbps: f64,
    pub avg_app_delay_ms: f64,
    pub rewards: Vec<RewardRow>,
    /// Router RTT samples (ms) after warmup, per watched node.
    pub rtt_ms: BTreeMap<usize, Vec<f64>>,
    /// Fraction of forwarded interests per top-K face, per agent.
    pub face_shares: BTreeMap<usize, Vec<f64>>,
    pub interests_issued: u64,
    pub consumer_retransmissions: u64,
    pub router_retransmissions: u64,
    pub data_received: u64,
    pub queue_drops: u64,
    pub replicates: Vec<ReplicateSummary>,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Unbiased sample variance; 0 for fewer than two values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    (mean(xs), sample_variance(xs).sqrt())
}

impl MetricsReport {
    /// Collects the metrics of a finished episode.
    pub fn from_world(world: &World, warmup: SimTime, seed: u64) -> Self {
        let duration = world.params().duration;
        let secs = duration.as_nanos().div_ceil(1_000_000_000);
        let mut bits = vec![0u64; secs as usize];
        let mut delay_sum = vec![0.0f64; secs as usize];
        let mut delay_n = vec![0u64; secs as usize];
        let mut total_bits = 0u64;
        let mut delays_after = Vec::new();
        let mut data_received = 0;
        for c in &world.consumers {
            for &(at, b) in &c.received {
                let s = ((at.as_nanos() / 1_000_000_000) as usize).min(bits.len().saturating_sub(1));
                bits[s] += b;
                if at >= warmup {
                    total_bits += b;
                }
            }
            for d in &c.samples {
                let s = ((d.at.as_nanos() / 1_000_000_000) as usize).min(bits.len().saturating_sub(1));
                delay_sum[s] += d.delay.as_millis_f64();
                delay_n[s] += 1;
                if d.at >= warmup {
                    delays_after.push(d.delay.as_millis_f64());
                }
            }
            data_received += c.received.len() as u64;
        }
        let throughput: Vec<(u64, f64)> = bits.iter().enumerate().map(|(s, &b)| (s as u64, b as f64 / 1e6)).collect();
        let delay: Vec<(u64, f64)> = (0..secs as usize)
            .filter(|&s| delay_n[s] > 0)
            .map(|s| (s as u64, delay_sum[s] / delay_n[s] as f64))
            .collect();
        let warm_s = warmup.as_nanos().div_ceil(1_000_000_000);
        let tp_after: Vec<f64> = throughput.iter().filter(|(s, _)| *s >= warm_s).map(|(_, v)| *v).collect();
        let d_after: Vec<f64> = delay.iter().filter(|(s, _)| *s >= warm_s).map(|(_, v)| *v).collect();
        let (throughput_mean_mbps, throughput_std_mbps) = mean_std(&tp_after);
        let (delay_mean_ms, delay_std_ms) = mean_std(&d_after);
        let window = (duration - warmup).as_secs_f64();
        let total_throughput_mbps = total_bits as f64 / window / 1e6;
        let avg_app_delay_ms = mean_std(&delays_after).0;

        let mut rtt_ms = BTreeMap::new();
        for (v, log) in world.rtt_log.iter().enumerate() {
            if !log.is_empty() || world.routers[v].strategy.agent().is_some() {
                rtt_ms.insert(
                    v,
                    log.iter().filter(|s| s.at >= warmup).map(|s| s.rtt.as_millis_f64()).collect(),
                );
            }
        }
        let mut face_shares = BTreeMap::new();
        let mut rewards = Vec::new();
        let mut router_retx = 0;
        for r in &world.routers {
            router_retx += r.counters.retransmissions;
            if let Some(a) = r.strategy.agent() {
                let usage = a.episode_usage();
                let total: u64 = usage.iter().sum();
                let shares = usage
                    .iter()
                    .map(|&u| if total == 0 { 0.0 } else { u as f64 / total as f64 })
                    .collect();
                face_shares.insert(r.node, shares);
                if let Some(&last) = a.episode_rewards().last() {
                    rewards.push(RewardRow {
                        agent: r.node,
                        episode: world.params().episode,
                        cumulative_reward: last,
                    });
                }
            }
        }
        Self {
            duration_s: duration.as_secs_f64(),
            warmup_s: warmup.as_secs_f64(),
            throughput,
            delay,
            throughput_mean_mbps,
            throughput_std_mbps,
            delay_mean_ms,
            delay_std_ms,
            total_throughput_mbps,
            avg_app_delay_ms,
            rewards,
            rtt_ms,
            face_shares,
            interests_issued: world.consumers.iter().map(|c| c.sent_new).sum(),
            consumer_retransmissions: world.consumers.iter().map(|c| c.sent_retx).sum(),
            router_retransmissions: router_retx,
            data_received,
            queue_drops: world.queue_drops(),
            replicates: vec![ReplicateSummary {
                seed,
                throughput_mbps: total_throughput_mbps,
                avg_app_delay_ms,
            }],
        }
    }

    /// Combines replicate reports in the given order: series and totals are
    /// averaged, samples and counts are pooled.
    pub fn merge(reports: &[MetricsReport]) -> MetricsReport {
        let Some(first) = reports.first() else {
            return MetricsReport::default();
        };
        let n = reports.len() as f64;
        let avg = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
        let len = reports.iter().map(|r| r.throughput.len()).max().unwrap_or(0);
        let throughput = (0..len)
            .map(|s| {
                let v: f64 = reports.iter().filter_map(|r| r.throughput.get(s)).map(|x| x.1).sum();
                (s as u64, v / n)
            })
            .collect();
        let mut delay_acc: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
        for r in reports {
            for &(s, v) in &r.delay {
                let e = delay_acc.entry(s).or_default();
                e.0 += v;
                e.1 += 1;
            }
        }
        let mut rtt_ms: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        let mut shares: BTreeMap<usize, Vec<Vec<f64>>> = BTreeMap::new();
        for r in reports {
            for (k, v) in &r.rtt_ms {
                rtt_ms.entry(*k).or_default().extend_from_slice(v);
            }
            for (k, v) in &r.face_shares {
                shares.entry(*k).or_default().push(v.clone());
            }
        }
        let face_shares = shares
            .into_iter()
            .map(|(k, vs)| {
                let m = vs.len() as f64;
                let width = vs.iter().map(|v| v.len()).max().unwrap_or(0);
                let mean = (0..width).map(|j| vs.iter().filter_map(|v| v.get(j)).sum::<f64>() / m).collect();
                (k, mean)
            })
            .collect();
        let sum = |f: fn(&MetricsReport) -> u64| reports.iter().map(f).sum::<u64>();
        MetricsReport {
            duration_s: first.duration_s,
            warmup_s: first.warmup_s,
            throughput,
            delay: delay_acc.into_iter().map(|(s, (v, c))| (s, v / c as f64)).collect(),
            throughput_mean_mbps: avg(|r| r.throughput_mean_mbps),
            throughput_std_mbps: avg(|r| r.throughput_std_mbps),
            delay_mean_ms: avg(|r| r.delay_mean_ms),
            delay_std_ms: avg(|r| r.delay_std_ms),
            total_throughput_mbps: avg(|r| r.total_throughput_mbps),
            avg_app_delay_ms: avg(|r| r.avg_app_delay_ms),
            rewards: reports.iter().flat_map(|r| r.rewards.iter().cloned()).collect(),
            rtt_ms,
            face_shares,
            interests_issued: sum(|r| r.interests_issued),
            consumer_retransmissions: sum(|r| r.consumer_retransmissions),
            router_retransmissions: sum(|r| r.router_retransmissions),
            data_received: sum(|r| r.data_received),
            queue_drops: sum(|r| r.queue_drops),
            replicates: reports.iter().flat_map(|r| r.replicates.iter().cloned()).collect(),
        }
    }

    /// Empirical CDF rows `(rtt_ms, cumulative_fraction)` for one node.
    pub fn delay_cdf(&self, node: usize) -> Vec<(f64, f64)> {
        let Some(samples) = self.rtt_ms.get(&node) else {
            return Vec::new();
        };
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        sorted
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, (i + 1) as f64 / n))
            .collect()
    }
}

/// Paths of the four exported metric files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvPaths {
    pub throughput: PathBuf,
    pub delay: PathBuf,
    pub rewards: PathBuf,
    pub delay_cdf: PathBuf,
}

impl CsvPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            throughput: dir.join("throughput.csv"),
            delay: dir.join("delay.csv"),
            rewards: dir.join("rewards.csv"),
            delay_cdf: dir.join("delay_cdf.csv"),
        }
    }
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>, SimError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| SimError::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), SimError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let csv_err = |source| SimError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = writer(path)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| SimError::io(path, e))
}

pub fn write_rewards_csv(path: &Path, rewards: &[RewardRow]) -> Result<(), SimError> {
    write_rows(
        path,
        &["agent", "episode", "cumulative_reward"],
        rewards
            .iter()
            .map(|r| [r.agent.to_string(), r.episode.to_string(), r.cumulative_reward.to_string()]),
    )
}

pub fn export_csv(report: &MetricsReport, paths: &CsvPaths) -> Result<(), SimError> {
    write_rows(
        &paths.throughput,
        &["t", "mbps"],
        report.throughput.iter().map(|(t, v)| [t.to_string(), v.to_string()]),
    )?;
    write_rows(
        &paths.delay,
        &["t", "ms"],
        report.delay.iter().map(|(t, v)| [t.to_string(), v.to_string()]),
    )?;
    write_rewards_csv(&paths.rewards, &report.rewards)?;
    let mut cdf_rows = Vec::new();
    for &node in report.rtt_ms.keys() {
        for (v, f) in report.delay_cdf(node) {
            cdf_rows.push([node.to_string(), v.to_string(), f.to_string()]);
        }
    }
    write_rows(&paths.delay_cdf, &["agent", "rtt_ms", "cumulative_fraction"], cdf_rows)
}
