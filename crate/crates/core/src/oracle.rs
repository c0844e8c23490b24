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

//! Exact ground truth for small graphs: induced-subgraph enumeration,
//! explicit relationship graphs, corresponding-state search and stationary
//! laws. Nothing here is used on the estimation path.

use std::collections::HashMap;
use std::io::Write;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, pair_bit};
use crate::error::{Error, Result};
use crate::estimate::csv_error;
use crate::graph::{Graph, NodeId};
use crate::walk::{SubgraphState, WalkMode, MAX_D};

/// Largest graph accepted by [`subset_enumerate`].
pub const SUBSET_ORACLE_LIMIT: usize = 12;

/// Default cap on the number of states of an explicit relationship graph.
pub const RELATIONSHIP_STATE_LIMIT: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCounts {
    pub k: usize,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl ExactCounts {
    pub fn concentration(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| {
                if self.total == 0 {
                    0.0
                } else {
                    c as f64 / self.total as f64
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            k: usize,
            counts: &'a [u64],
            total: u64,
            concentration: Vec<f64>,
        }
        Ok(serde_json::to_string_pretty(&Out {
            k: self.k,
            counts: &self.counts,
            total: self.total,
            concentration: self.concentration(),
        })?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["class", "count", "concentration"])
            .map_err(csv_error)?;
        for (i, (c, x)) in self.counts.iter().zip(self.concentration()).enumerate() {
            w.write_record([(i + 1).to_string(), c.to_string(), format!("{x:e}")])
                .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Esu<'g, F> {
    g: &'g Graph,
    size: usize,
    root: NodeId,
    // members of the subgraph and their neighbors carry a positive mark
    marks: Vec<u32>,
    sub: Vec<NodeId>,
    f: F,
}

impl<F: FnMut(&[NodeId])> Esu<'_, F> {
    fn mark(&mut self, w: NodeId, delta: i32) {
        let g = self.g;
        self.marks[w as usize] = self.marks[w as usize].wrapping_add_signed(delta);
        for &u in g.neighbors(w) {
            self.marks[u as usize] = self.marks[u as usize].wrapping_add_signed(delta);
        }
    }

    fn extend(&mut self, mut ext: Vec<NodeId>) {
        if self.sub.len() + 1 == self.size {
            for &w in &ext {
                self.sub.push(w);
                (self.f)(&self.sub);
                self.sub.pop();
            }
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            next.extend(
                self.g
                    .neighbors(w)
                    .iter()
                    .copied()
                    .filter(|&u| u > self.root && self.marks[u as usize] == 0),
            );
            self.sub.push(w);
            self.mark(w, 1);
            self.extend(next);
            self.mark(w, -1);
            self.sub.pop();
        }
    }
}

/// Calls `f` once for every connected induced subgraph with `size` nodes
/// (exclusive-neighborhood extension from each root).
pub fn for_each_connected_subset<F: FnMut(&[NodeId])>(g: &Graph, size: usize, f: F) {
    if size == 0 {
        return;
    }
    let mut esu = Esu {
        g,
        size,
        root: 0,
        marks: vec![0; g.node_count()],
        sub: Vec::with_capacity(size),
        f,
    };
    for v in 0..g.node_count() as NodeId {
        esu.root = v;
        esu.sub.push(v);
        if size == 1 {
            (esu.f)(&esu.sub);
        } else {
            esu.mark(v, 1);
            let ext = g.neighbors(v).iter().copied().filter(|&u| u > v).collect();
            esu.extend(ext);
            esu.mark(v, -1);
        }
        esu.sub.pop();
    }
}

fn labeled_mask(g: &Graph, nodes: &[NodeId]) -> u16 {
    let mut mask = 0;
    for j in 1..nodes.len() {
        for i in 0..j {
            if g.adjacent(nodes[i], nodes[j]) {
                mask |= pair_bit(i, j);
            }
        }
    }
    mask
}

/// Exact per-class counts of connected induced `k`-node subgraphs.
pub fn exact_enumerate(g: &Graph, k: usize) -> Result<ExactCounts> {
    let cat = catalog::catalog(k)?;
    let mut counts = vec![0u64; cat.len()];
    for_each_connected_subset(g, k, |nodes| {
        let class = cat
            .classify_mask(labeled_mask(g, nodes))
            .expect("connected subset");
        counts[class - 1] += 1;
    });
    let total = counts.iter().sum();
    Ok(ExactCounts { k, counts, total })
}

/// Second oracle: filters all `C(n, k)` node subsets. Limited to
/// [`SUBSET_ORACLE_LIMIT`] nodes.
pub fn subset_enumerate(g: &Graph, k: usize) -> Result<ExactCounts> {
    let cat = catalog::catalog(k)?;
    if g.node_count() > SUBSET_ORACLE_LIMIT {
        return Err(Error::TooLarge {
            limit: SUBSET_ORACLE_LIMIT,
        });
    }
    let mut counts = vec![0u64; cat.len()];
    for nodes in (0..g.node_count() as NodeId).combinations(k) {
        let edges: Vec<(NodeId, NodeId)> = nodes
            .iter()
            .tuple_combinations()
            .filter(|(a, b)| g.adjacent(**a, **b))
            .map(|(a, b)| (*a, *b))
            .collect();
        if let catalog::Classification::Class(i) = catalog::classify(k, &nodes, &edges)? {
            counts[i - 1] += 1;
        }
    }
    let total = counts.iter().sum();
    Ok(ExactCounts { k, counts, total })
}

/// Explicit relationship graph: one vertex per connected `d`-node
/// subgraph, joined when two of them share `d - 1` nodes.
pub struct RelationshipGraph {
    pub d: usize,
    pub states: Vec<SubgraphState>,
    pub graph: Graph,
    index: HashMap<SubgraphState, usize>,
}

impl RelationshipGraph {
    pub fn index_of(&self, state: &SubgraphState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn degree(&self, state: &SubgraphState) -> Option<usize> {
        self.index_of(state).map(|i| self.graph.degree(i as NodeId))
    }

    pub fn neighbors(&self, state: &SubgraphState) -> Option<Vec<SubgraphState>> {
        let i = self.index_of(state)?;
        Some(
            self.graph
                .neighbors(i as NodeId)
                .iter()
                .map(|&j| self.states[j as usize])
                .collect(),
        )
    }

    /// Every window of `l = |nodes| - d + 1` consecutive states that spans
    /// exactly `nodes`, found by depth-first search over paths of this
    /// graph.
    pub fn corresponding_states(&self, nodes: &[NodeId]) -> Vec<Vec<SubgraphState>> {
        let mut target = nodes.to_vec();
        target.sort_unstable();
        target.dedup();
        let l = target.len() + 1 - self.d;
        let inside = |s: &SubgraphState| s.nodes().iter().all(|v| target.binary_search(v).is_ok());
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::with_capacity(l);
        for start in 0..self.states.len() {
            if inside(&self.states[start]) {
                path.push(start);
                self.extend_paths(&mut path, l, &target, &inside, &mut out);
                path.pop();
            }
        }
        out
    }

    fn extend_paths(
        &self,
        path: &mut Vec<usize>,
        l: usize,
        target: &[NodeId],
        inside: &dyn Fn(&SubgraphState) -> bool,
        out: &mut Vec<Vec<SubgraphState>>,
    ) {
        if path.len() == l {
            let mut union: Vec<NodeId> = path
                .iter()
                .flat_map(|&i| self.states[i].nodes().iter().copied())
                .collect();
            union.sort_unstable();
            union.dedup();
            if union == target {
                out.push(path.iter().map(|&i| self.states[i]).collect());
            }
            return;
        }
        let last = *path.last().unwrap();
        for &next in self.graph.neighbors(last as NodeId) {
            let next = next as usize;
            if inside(&self.states[next]) {
                path.push(next);
                self.extend_paths(path, l, target, inside, out);
                path.pop();
            }
        }
    }

    /// Scaled stationary weight of a window from the explicit degrees.
    pub fn pi_tilde(&self, window: &[SubgraphState], mode: WalkMode) -> f64 {
        let deg = |s: &SubgraphState| {
            mode.effective_degree(self.degree(s).expect("known state") as u64) as f64
        };
        match window.len() {
            0 => panic!("empty window"),
            1 => deg(&window[0]),
            2 => 1.0,
            l => window[1..l - 1].iter().map(|s| 1.0 / deg(s)).product(),
        }
    }
}

/// Builds the relationship graph of `g` for `1 <= d <= 4`, failing once
/// more than `state_limit` states are found.
pub fn build_relationship_graph_limited(
    g: &Graph,
    d: usize,
    state_limit: usize,
) -> Result<RelationshipGraph> {
    if d == 0 || d > MAX_D {
        return Err(Error::InvalidDimension { k: MAX_D + 1, d });
    }
    let mut states = Vec::new();
    let mut overflow = false;
    for_each_connected_subset(g, d, |nodes| {
        if states.len() >= state_limit {
            overflow = true;
        } else {
            states.push(SubgraphState::new(nodes));
        }
    });
    if overflow {
        return Err(Error::TooLarge { limit: state_limit });
    }
    states.sort_unstable();
    let index: HashMap<SubgraphState, usize> =
        states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut edges = Vec::new();
    if d == 1 {
        edges.extend(g.edges());
    } else {
        // states sharing a (d-1)-subset are pairwise adjacent
        let mut buckets: HashMap<Vec<NodeId>, Vec<usize>> = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            for skip in 0..d {
                let key: Vec<NodeId> = s
                    .nodes()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, v)| *v)
                    .collect();
                buckets.entry(key).or_default().push(i);
            }
        }
        let mut keys: Vec<_> = buckets.into_iter().collect();
        keys.sort_unstable();
        for (_, members) in keys {
            for (a, b) in members.iter().tuple_combinations() {
                edges.push((*a as NodeId, *b as NodeId));
            }
        }
    }
    let graph = Graph::from_edges(states.len(), edges)?;
    Ok(RelationshipGraph {
        d,
        states,
        graph,
        index,
    })
}

pub fn build_relationship_graph(g: &Graph, d: usize) -> Result<RelationshipGraph> {
    build_relationship_graph_limited(g, d, RELATIONSHIP_STATE_LIMIT)
}

/// All windows spanning `subgraph_nodes`, via the explicit relationship
/// graph of `g`.
pub fn brute_corresponding_states(
    g: &Graph,
    subgraph_nodes: &[NodeId],
    d: usize,
) -> Result<Vec<Vec<SubgraphState>>> {
    let rel = build_relationship_graph(g, d)?;
    Ok(rel.corresponding_states(subgraph_nodes))
}

/// Degree-proportional law `d_v / 2|E|` of a simple walk.
pub fn exact_stationary(rel: &Graph) -> Vec<f64> {
    let total = 2.0 * rel.edge_count() as f64;
    (0..rel.node_count() as NodeId)
        .map(|v| rel.degree(v) as f64 / total)
        .collect()
}
