// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Deterministic graph constructors used for the test corpus and examples.

use rand::{Rng, SeedableRng};

use crate::graph::{Graph, NodeId};
use crate::Rng64;

fn build(n: usize, edges: Vec<(NodeId, NodeId)>) -> Graph {
    Graph::from_edges(n, edges).expect("generated ids are in range")
}

pub fn complete(n: usize) -> Graph {
    let n32 = n as NodeId;
    build(
        n,
        (0..n32)
            .flat_map(|u| (u + 1..n32).map(move |v| (u, v)))
            .collect(),
    )
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n as NodeId).map(|v| (v - 1, v)).collect())
}

pub fn cycle(n: usize) -> Graph {
    let n32 = n as NodeId;
    build(n, (0..n32).map(|v| (v, (v + 1) % n32)).collect())
}

/// Star with node 0 as the center.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves as NodeId).map(|v| (0, v)).collect())
}

/// The four-node diamond: nodes 1..4 with edges 12 13 14 23 34.
pub fn diamond() -> Graph {
    Graph::from_labeled_edges([(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)]).expect("non-empty")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
    build(10, outer.chain(spokes).chain(inner).collect())
}

/// G(n, p) with independent edge coins.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = Rng64::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// Preferential attachment: starts from a clique on `m + 1` nodes, then each
/// new node links to `m` distinct existing nodes drawn proportionally to
/// degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m >= 1 && n > m, "need n > m >= 1");
    let mut rng = Rng64::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut endpoints: Vec<NodeId> = Vec::new();
    for u in 0..=m as NodeId {
        for v in u + 1..=m as NodeId {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for new in (m + 1) as NodeId..n as NodeId {
        let mut chosen: Vec<NodeId> = Vec::with_capacity(m);
        while chosen.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for t in chosen {
            edges.push((new, t));
            endpoints.extend([new, t]);
        }
    }
    build(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(path(4).edge_count(), 3);
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(star(3).degree(0), 3);
        assert_eq!(diamond().edge_count(), 5);
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn random_generators_are_seeded() {
        assert_eq!(erdos_renyi(50, 0.1, 3), erdos_renyi(50, 0.1, 3));
        let ba = barabasi_albert(100, 3, 9);
        assert_eq!(ba.edge_count(), 6 + 96 * 3);
        assert!(ba.is_connected());
    }
}
