//! Synthetic topologies with uniform link parameters.

use super::{LinkDef, NodeSpec, TopologySpec};
use crate::sim::{LinkSpec, DEFAULT_QUEUE_CAPACITY};

fn uniform(delay_us: u64, bw_bps: u64) -> LinkSpec {
    LinkSpec {
        delay_us,
        bandwidth_bps: bw_bps,
        queue_capacity: DEFAULT_QUEUE_CAPACITY,
    }
}

/// `rows × cols` lattice; node `r * cols + c`, labelled `g<r>_<c>`.
pub fn build_grid(rows: usize, cols: usize, delay_us: u64, bw_bps: u64) -> TopologySpec {
    assert!(rows >= 1 && cols >= 1, "grid dimensions must be at least 1");
    let spec = uniform(delay_us, bw_bps);
    let nodes = (0..rows * cols)
        .map(|id| NodeSpec {
            id,
            label: format!("g{}_{}", id / cols, id % cols),
        })
        .collect();
    let mut links = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                links.push(LinkDef { a: v, b: v + 1, spec });
            }
            if r + 1 < rows {
                links.push(LinkDef { a: v, b: v + cols, spec });
            }
        }
    }
    TopologySpec {
        nodes,
        links,
        ..Default::default()
    }
}

/// Complete `fanout`-ary tree with `depth` levels below the root, breadth-first ids.
pub fn build_tree(depth: usize, fanout: usize, delay_us: u64, bw_bps: u64) -> TopologySpec {
    assert!(fanout >= 1, "fanout must be at least 1");
    let spec = uniform(delay_us, bw_bps);
    let mut nodes = vec![NodeSpec {
        id: 0,
        label: "t0".into(),
    }];
    let mut links = Vec::new();
    let mut level = vec![0];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &parent in &level {
            for _ in 0..fanout {
                let id = nodes.len();
                nodes.push(NodeSpec {
                    id,
                    label: format!("t{id}"),
                });
                links.push(LinkDef { a: parent, b: id, spec });
                next.push(id);
            }
        }
        level = next;
    }
    TopologySpec {
        nodes,
        links,
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let g = build_grid(2, 2, 1000, 1_000_000);
        assert_eq!((g.nodes.len(), g.links.len()), (4, 4));
        let g = build_grid(3, 4, 1000, 1_000_000);
        assert_eq!((g.nodes.len(), g.links.len()), (12, 17));
        assert!(g.is_connected());
        let single = build_grid(1, 1, 1000, 1);
        assert_eq!((single.nodes.len(), single.links.len()), (1, 0));
    }

    #[test]
    fn tree_counts() {
        let t = build_tree(2, 2, 1000, 1_000_000);
        assert_eq!((t.nodes.len(), t.links.len()), (7, 6));
        assert!(t.is_connected());
        t.validate().unwrap();
    }
}
