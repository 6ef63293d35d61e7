//! Topologies: text format, generators, face layout and FIB population.

mod generators;
mod routing;
mod spec;

pub use generators::{build_grid, build_tree};
pub use routing::{compute_fib, delays_to, layout, min_cut_bps, Layout};
pub use spec::{parse_topology, Endpoint, LinkDef, NodeSpec, TopologySpec, DEFAULT_ACCESS};

/// Text of the shipped Sprint-like topology.
pub const SPRINT_TOPO: &str = include_str!("../../assets/sprint.topo");

/// Router the consumer attaches to.
pub const SPRINT_CONSUMER_ROUTER: usize = 2;
/// Consumer-side router hosting the primary agent.
pub const SPRINT_PRIMARY_AGENT: usize = 3;
/// Second agent whose best path shares a core link with the primary agent's.
pub const SPRINT_SECOND_AGENT: usize = 9;
/// Agent placement used for full-network comparisons.
pub const SPRINT_AGENTS: [usize; 4] = [3, 4, 6, 9];

pub fn sprint() -> TopologySpec {
    parse_topology(SPRINT_TOPO).expect("shipped topology parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sprint_shape() {
        let s = sprint();
        assert_eq!(s.nodes.len(), 11);
        assert_eq!(s.links.len(), 18);
        assert!(s.is_connected());
        assert_eq!(s.consumers[0].node, SPRINT_CONSUMER_ROUTER);
    }
}
