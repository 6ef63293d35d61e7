//! Face numbering, shortest-delay FIB population and min-cut capacity.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::TopologySpec;
use crate::error::TopologyError;
use crate::ndn::{Face, FaceId, Fib, FibEntry, NextHop};
use crate::sim::{Direction, LinkSpec};

/// Physical wiring of a topology: every link (router links first, then
/// producer and consumer access links) and every router's faces.
///
/// Router `v` numbers its faces in link order, then its attached applications.
/// Endpoint ids are `0..routers` for routers, then producers, then consumers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub routers: usize,
    pub links: Vec<LinkSpec>,
    pub faces: Vec<Vec<Face>>,
    /// (router, face at router, access link) per producer.
    pub producer_ports: Vec<(usize, FaceId, usize)>,
    pub consumer_ports: Vec<(usize, FaceId, usize)>,
}

impl Layout {
    pub fn producer_endpoint(&self, i: usize) -> usize {
        self.routers + i
    }

    pub fn consumer_endpoint(&self, i: usize) -> usize {
        self.routers + self.producer_ports.len() + i
    }

    /// Face of router `node` that leads to neighbor router `peer`.
    pub fn face_towards(&self, node: usize, peer: usize) -> Option<FaceId> {
        self.faces[node]
            .iter()
            .find(|f| f.peer == peer && peer < self.routers)
            .map(|f| f.id)
    }
}

pub fn layout(spec: &TopologySpec) -> Layout {
    let n = spec.node_count();
    let mut faces: Vec<Vec<Face>> = vec![Vec::new(); n];
    let mut links: Vec<LinkSpec> = spec.links.iter().map(|l| l.spec).collect();
    let mut face_of_link = vec![(FaceId(0), FaceId(0)); spec.links.len()];
    for (i, l) in spec.links.iter().enumerate() {
        face_of_link[i].0 = FaceId(faces[l.a].len() as u32);
        faces[l.a].push(Face {
            id: face_of_link[i].0,
            peer: l.b,
            peer_face: FaceId(0),
            link: i,
            direction: Direction::Forward,
        });
        face_of_link[i].1 = FaceId(faces[l.b].len() as u32);
        faces[l.b].push(Face {
            id: face_of_link[i].1,
            peer: l.a,
            peer_face: FaceId(0),
            link: i,
            direction: Direction::Reverse,
        });
    }
    for (i, l) in spec.links.iter().enumerate() {
        let (fa, fb) = face_of_link[i];
        faces[l.a][fa.0 as usize].peer_face = fb;
        faces[l.b][fb.0 as usize].peer_face = fa;
    }
    let mut attach = |node: usize, endpoint: usize, access: LinkSpec, faces: &mut Vec<Vec<Face>>| {
        let link = links.len();
        links.push(access);
        let id = FaceId(faces[node].len() as u32);
        faces[node].push(Face {
            id,
            peer: endpoint,
            peer_face: FaceId(0),
            link,
            direction: Direction::Forward,
        });
        (node, id, link)
    };
    let producers = spec.producers.len();
    let producer_ports = spec
        .producers
        .iter()
        .enumerate()
        .map(|(i, p)| attach(p.node, n + i, p.access, &mut faces))
        .collect();
    let consumer_ports = spec
        .consumers
        .iter()
        .enumerate()
        .map(|(i, c)| attach(c.node, n + producers + i, c.access, &mut faces))
        .collect();
    Layout {
        routers: n,
        links,
        faces,
        producer_ports,
        consumer_ports,
    }
}

/// Shortest one-way propagation delay (µs) from every router to the producer
/// application attached at `producer`, via its access link of `access_us`.
pub fn delays_to(spec: &TopologySpec, producer: usize, access_us: u64) -> Vec<Option<u64>> {
    let n = spec.node_count();
    let mut dist: Vec<Option<u64>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[producer] = Some(access_us);
    heap.push(Reverse((access_us, producer)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v].is_some_and(|best| d > best) {
            continue;
        }
        for (u, li) in spec.neighbors(v) {
            let nd = d + spec.links[li].spec.delay_us;
            if dist[u].is_none_or(|cur| nd < cur) {
                dist[u] = Some(nd);
                heap.push(Reverse((nd, u)));
            }
        }
    }
    dist
}

/// Per-router FIBs listing every neighbor face for every producer prefix,
/// ranked by neighbor distance plus link delay.
pub fn compute_fib(spec: &TopologySpec) -> Result<Vec<Fib>, TopologyError> {
    let lay = layout(spec);
    let n = spec.node_count();
    let mut fibs = vec![Fib::new(); n];
    for (pi, p) in spec.producers.iter().enumerate() {
        let dist = delays_to(spec, p.node, p.access.delay_us);
        let unreachable: Vec<usize> = (0..n).filter(|&v| dist[v].is_none()).collect();
        if !unreachable.is_empty() {
            return Err(TopologyError::Unreachable {
                prefix: p.prefix.clone(),
                producer: p.node,
                unreachable,
            });
        }
        for v in 0..n {
            let mut hops = Vec::new();
            for face in &lay.faces[v] {
                if face.peer < n {
                    let d = dist[face.peer].expect("connected");
                    hops.push(NextHop {
                        face: face.id,
                        cost_us: d + spec.links[face.link].spec.delay_us,
                    });
                } else if face.peer == lay.producer_endpoint(pi) {
                    hops.push(NextHop {
                        face: face.id,
                        cost_us: p.access.delay_us,
                    });
                }
            }
            fibs[v].insert(FibEntry::new(p.prefix.as_str(), hops));
        }
    }
    Ok(fibs)
}

/// Maximum flow (bps) from the producer application at router `src` to the
/// consumer application at router `dst`, both access links included.
pub fn min_cut_bps(spec: &TopologySpec, src: usize, src_access_bps: u64, dst: usize, dst_access_bps: u64) -> u64 {
    let n = spec.node_count();
    // vertices: routers, then super source n, super sink n + 1
    let size = n + 2;
    let mut cap = vec![vec![0u64; size]; size];
    for l in &spec.links {
        cap[l.a][l.b] += l.spec.bandwidth_bps;
        cap[l.b][l.a] += l.spec.bandwidth_bps;
    }
    let (s, t) = (n, n + 1);
    cap[s][src] += src_access_bps;
    cap[dst][t] += dst_access_bps;
    let mut flow = 0;
    loop {
        let mut parent = vec![usize::MAX; size];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for u in 0..size {
                if parent[u] == usize::MAX && cap[v][u] > 0 {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if parent[t] == usize::MAX {
            return flow;
        }
        let mut bottleneck = u64::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(cap[parent[v]][v]);
            v = parent[v];
        }
        let mut v = t;
        while v != s {
            let p = parent[v];
            cap[p][v] -= bottleneck;
            cap[v][p] += bottleneck;
            v = p;
        }
        flow += bottleneck;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{parse_topology, Endpoint, LinkDef, NodeSpec, DEFAULT_ACCESS};

    fn line3() -> TopologySpec {
        parse_topology(
            "node 0 far\nnode 1 mid\nnode 2 prod\n\
             link 0 1 delay_us=10000 bw_bps=1000000 queue=10\n\
             link 1 2 delay_us=20000 bw_bps=1000000 queue=10\n\
             producer 2 /p delay_us=1\n",
        )
        .unwrap()
    }

    #[test]
    fn line_costs_accumulate() {
        let fibs = compute_fib(&line3()).unwrap();
        let e = fibs[0].lookup("/p").unwrap();
        assert_eq!(e.next_hops.len(), 1);
        assert_eq!(e.next_hops[0].cost_us, 30_001);
        // the middle node also lists the face back towards the far node
        let mid = fibs[1].lookup("/p").unwrap();
        assert_eq!(mid.next_hops[0].cost_us, 20_001);
        assert_eq!(mid.next_hops[1].cost_us, 40_001);
        // producer router reaches the app directly
        let prod = fibs[2].lookup("/p").unwrap();
        assert_eq!(prod.next_hops[0].cost_us, 1);
    }

    #[test]
    fn equal_costs_prefer_lower_face() {
        let s = parse_topology(
            "node 0 a\nnode 1 b\nnode 2 c\nnode 3 p\n\
             link 0 1 delay_us=5 bw_bps=1 queue=1\n\
             link 0 2 delay_us=5 bw_bps=1 queue=1\n\
             link 1 3 delay_us=5 bw_bps=1 queue=1\n\
             link 2 3 delay_us=5 bw_bps=1 queue=1\n\
             producer 3 /p\n",
        )
        .unwrap();
        let fibs = compute_fib(&s).unwrap();
        let e = fibs[0].lookup("/p").unwrap();
        assert_eq!(e.next_hops[0].cost_us, e.next_hops[1].cost_us);
        assert_eq!(e.next_hops[0].face, FaceId(0));
    }

    #[test]
    fn unreachable_producer_names_partition() {
        let s = TopologySpec {
            nodes: (0..3).map(|id| NodeSpec { id, label: format!("n{id}") }).collect(),
            links: vec![LinkDef {
                a: 0,
                b: 1,
                spec: DEFAULT_ACCESS,
            }],
            producers: vec![Endpoint {
                node: 0,
                prefix: "/p".into(),
                access: DEFAULT_ACCESS,
            }],
            consumers: vec![],
        };
        assert_eq!(
            compute_fib(&s).unwrap_err(),
            TopologyError::Unreachable {
                prefix: "/p".into(),
                producer: 0,
                unreachable: vec![2]
            }
        );
    }

    #[test]
    fn layout_pairs_faces() {
        let s = line3();
        let lay = layout(&s);
        assert_eq!(lay.faces[1].len(), 2);
        for (v, faces) in lay.faces.iter().enumerate() {
            for f in faces.iter().filter(|f| f.peer < lay.routers) {
                let back = &lay.faces[f.peer][f.peer_face.0 as usize];
                assert_eq!(back.peer, v);
                assert_eq!(back.link, f.link);
                assert_ne!(back.direction, f.direction);
            }
        }
        assert_eq!(lay.producer_ports, vec![(2, FaceId(1), 2)]);
        assert_eq!(lay.face_towards(0, 1), Some(FaceId(0)));
    }

    #[test]
    fn min_cut_of_diamond() {
        let s = parse_topology(
            "node 0 c\nnode 1 x\nnode 2 y\nnode 3 p\n\
             link 0 1 delay_us=1 bw_bps=3 queue=1\n\
             link 0 2 delay_us=1 bw_bps=2 queue=1\n\
             link 1 3 delay_us=1 bw_bps=1 queue=1\n\
             link 2 3 delay_us=1 bw_bps=5 queue=1\n",
        )
        .unwrap();
        assert_eq!(min_cut_bps(&s, 3, 100, 0, 100), 3);
        assert_eq!(min_cut_bps(&s, 3, 100, 0, 2), 2);
    }
}
