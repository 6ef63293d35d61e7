use std::path::PathBuf;

use thiserror::Error;

use crate::sim::SimTime;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("cannot schedule an event at {fire_at} when the clock reads {now}")]
    ScheduleInPast { now: SimTime, fire_at: SimTime },

    #[error("invalid link: {0}")]
    InvalidLink(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("topology error: {0}")]
    Topology(#[from] TopologyError),

    #[error("training diverged for agent at node {node} in episode {episode}: {detail}")]
    Divergence {
        node: usize,
        episode: usize,
        detail: String,
    },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl SimError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid topology: {0}")]
    Invalid(String),

    #[error("producer prefix {prefix} at node {producer} is unreachable from nodes {unreachable:?}")]
    Unreachable {
        prefix: String,
        producer: usize,
        unreachable: Vec<usize>,
    },
}

/// Non-finite loss or parameters during a gradient step.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct DivergenceError(pub String);
