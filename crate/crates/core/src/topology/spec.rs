//! Topology description and its line-oriented text format.
//!
//! ```text
//! # comment
//! node <id> <label>
//! link <a> <b> delay_us=<int> bw_bps=<int> queue=<int>
//! producer <node> <prefix> [delay_us=<int>] [bw_bps=<int>] [queue=<int>]
//! consumer <node> <prefix> [delay_us=<int>] [bw_bps=<int>] [queue=<int>]
//! ```
//!
//! Lines may appear in any order. Node ids must be exactly `0..n`. Producer and
//! consumer lines attach an application to a router through its own access
//! link; omitted access parameters default to [`DEFAULT_ACCESS`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::TopologyError;
use crate::sim::LinkSpec;

pub const DEFAULT_ACCESS: LinkSpec = LinkSpec {
    delay_us: 1_000,
    bandwidth_bps: 5_000_000,
    queue_capacity: 100,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub id: usize,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkDef {
    pub a: usize,
    pub b: usize,
    pub spec: LinkSpec,
}

/// Application attached to router `node` through an access link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoint {
    pub node: usize,
    pub prefix: String,
    pub access: LinkSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TopologySpec {
    /// Sorted by id, ids are `0..nodes.len()`.
    pub nodes: Vec<NodeSpec>,
    pub links: Vec<LinkDef>,
    pub producers: Vec<Endpoint>,
    pub consumers: Vec<Endpoint>,
}

impl TopologySpec {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.nodes[id].label
    }

    pub fn node_by_label(&self, label: &str) -> Option<usize> {
        self.nodes.iter().find(|n| n.label == label).map(|n| n.id)
    }

    pub fn link_between(&self, a: usize, b: usize) -> Option<&LinkDef> {
        self.links
            .iter()
            .find(|l| (l.a == a && l.b == b) || (l.a == b && l.b == a))
    }

    /// `(neighbor, link index)` pairs of `node` in link order.
    pub fn neighbors(&self, node: usize) -> Vec<(usize, usize)> {
        self.links
            .iter()
            .enumerate()
            .filter_map(|(i, l)| {
                if l.a == node {
                    Some((l.b, i))
                } else if l.b == node {
                    Some((l.a, i))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (u, _) in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn validate(&self) -> Result<(), TopologyError> {
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return Err(TopologyError::Invalid(format!("node ids must be 0..{n}, found {}", node.id)));
            }
        }
        let mut pairs = BTreeSet::new();
        for l in &self.links {
            if l.a >= n || l.b >= n {
                return Err(TopologyError::Invalid(format!("link {}-{} references an unknown node", l.a, l.b)));
            }
            if l.a == l.b {
                return Err(TopologyError::Invalid(format!("self-loop at node {}", l.a)));
            }
            if !pairs.insert((l.a.min(l.b), l.a.max(l.b))) {
                return Err(TopologyError::Invalid(format!("duplicate link {}-{}", l.a, l.b)));
            }
            l.spec.validate().map_err(|e| TopologyError::Invalid(format!("link {}-{}: {e}", l.a, l.b)))?;
        }
        for e in self.producers.iter().chain(&self.consumers) {
            if e.node >= n {
                return Err(TopologyError::Invalid(format!("endpoint {} at unknown node {}", e.prefix, e.node)));
            }
            e.access
                .validate()
                .map_err(|err| TopologyError::Invalid(format!("access link of {}: {err}", e.prefix)))?;
        }
        let mut prefixes = BTreeSet::new();
        for p in &self.producers {
            if !prefixes.insert(p.prefix.as_str()) {
                return Err(TopologyError::Invalid(format!("prefix {} produced twice", p.prefix)));
            }
        }
        for c in &self.consumers {
            if !prefixes.contains(c.prefix.as_str()) {
                return Err(TopologyError::Invalid(format!("consumer requests {} which no producer serves", c.prefix)));
            }
        }
        Ok(())
    }

    /// Canonical text form; `parse_topology(&spec.to_text())` returns `spec`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let _ = writeln!(out, "node {} {}", n.id, n.label);
        }
        for l in &self.links {
            let _ = writeln!(out, "link {} {} {}", l.a, l.b, link_params(&l.spec));
        }
        for (kind, list) in [("producer", &self.producers), ("consumer", &self.consumers)] {
            for e in list {
                let _ = writeln!(out, "{kind} {} {} {}", e.node, e.prefix, link_params(&e.access));
            }
        }
        out
    }
}

fn link_params(s: &LinkSpec) -> String {
    format!("delay_us={} bw_bps={} queue={}", s.delay_us, s.bandwidth_bps, s.queue_capacity)
}

fn perr(line: usize, msg: impl Into<String>) -> TopologyError {
    TopologyError::Parse { line, msg: msg.into() }
}

fn parse_params(line: usize, tokens: &[&str], defaults: Option<LinkSpec>) -> Result<LinkSpec, TopologyError> {
    let mut values: BTreeMap<&str, u64> = BTreeMap::new();
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected key=value, found `{tok}`")))?;
        if !matches!(key, "delay_us" | "bw_bps" | "queue") {
            return Err(perr(line, format!("unknown parameter `{key}`")));
        }
        let v: u64 = value
            .parse()
            .map_err(|_| perr(line, format!("`{key}` must be a non-negative integer, found `{value}`")))?;
        if v == 0 {
            return Err(perr(line, format!("`{key}` must be positive")));
        }
        if values.insert(key, v).is_some() {
            return Err(perr(line, format!("`{key}` given twice")));
        }
    }
    let get = |key: &str, fallback: Option<u64>| {
        values
            .get(key)
            .copied()
            .or(fallback)
            .ok_or_else(|| perr(line, format!("missing `{key}`")))
    };
    Ok(LinkSpec {
        delay_us: get("delay_us", defaults.map(|d| d.delay_us))?,
        bandwidth_bps: get("bw_bps", defaults.map(|d| d.bandwidth_bps))?,
        queue_capacity: get("queue", defaults.map(|d| d.queue_capacity as u64))? as usize,
    })
}

pub fn parse_topology(text: &str) -> Result<TopologySpec, TopologyError> {
    let mut nodes: BTreeMap<usize, (String, usize)> = BTreeMap::new();
    let mut links = Vec::new();
    let mut producers = Vec::new();
    let mut consumers = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let id = |tok: Option<&&str>, what: &str| -> Result<usize, TopologyError> {
            let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
            tok.parse().map_err(|_| perr(line, format!("{what} must be an integer, found `{tok}`")))
        };
        match tokens[0] {
            "node" => {
                let nid = id(tokens.get(1), "node id")?;
                let label = tokens.get(2).ok_or_else(|| perr(line, "missing node label"))?;
                if tokens.len() > 3 {
                    return Err(perr(line, "trailing tokens after node label"));
                }
                if nodes.insert(nid, (label.to_string(), line)).is_some() {
                    return Err(perr(line, format!("duplicate node id {nid}")));
                }
            }
            "link" => {
                let a = id(tokens.get(1), "link endpoint")?;
                let b = id(tokens.get(2), "link endpoint")?;
                let spec = parse_params(line, &tokens[3.min(tokens.len())..], None)?;
                links.push((line, LinkDef { a, b, spec }));
            }
            kind @ ("producer" | "consumer") => {
                let node = id(tokens.get(1), "node id")?;
                let prefix = tokens.get(2).ok_or_else(|| perr(line, "missing prefix"))?;
                if !prefix.starts_with('/') {
                    return Err(perr(line, format!("prefix must start with `/`, found `{prefix}`")));
                }
                let access = parse_params(line, &tokens[3.min(tokens.len())..], Some(DEFAULT_ACCESS))?;
                let e = Endpoint {
                    node,
                    prefix: prefix.to_string(),
                    access,
                };
                if kind == "producer" {
                    producers.push((line, e));
                } else {
                    consumers.push((line, e));
                }
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    let n = nodes.len();
    if let Some((&bad, &(_, line))) = nodes.iter().find(|(&k, _)| k >= n) {
        return Err(perr(line, format!("node ids must be 0..{n}, found {bad}")));
    }
    let mut pairs = BTreeSet::new();
    for (line, l) in &links {
        for end in [l.a, l.b] {
            if !nodes.contains_key(&end) {
                return Err(perr(*line, format!("link references unknown node {end}")));
            }
        }
        if l.a == l.b {
            return Err(perr(*line, format!("self-loop at node {}", l.a)));
        }
        if !pairs.insert((l.a.min(l.b), l.a.max(l.b))) {
            return Err(perr(*line, format!("duplicate link {}-{}", l.a, l.b)));
        }
    }
    for (line, e) in producers.iter().chain(&consumers) {
        if !nodes.contains_key(&e.node) {
            return Err(perr(*line, format!("endpoint at unknown node {}", e.node)));
        }
    }
    let spec = TopologySpec {
        nodes: nodes
            .into_iter()
            .map(|(id, (label, _))| NodeSpec { id, label })
            .collect(),
        links: links.into_iter().map(|(_, l)| l).collect(),
        producers: producers.into_iter().map(|(_, e)| e).collect(),
        consumers: consumers.into_iter().map(|(_, e)| e).collect(),
    };
    spec.validate()?;
    Ok(spec)
}
