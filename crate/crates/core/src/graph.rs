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

//! Immutable undirected simple graph in compressed sparse row form.
//!
//! Nodes carry dense `0..n` ids; the label each node had in the source edge
//! list is kept for reporting. Every adjacency list is strictly ascending,
//! so edge tests are binary searches and neighbor merges are linear.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Vec<i64>,
}

impl Graph {
    /// Builds a graph from labeled endpoint pairs. Self-loops are dropped,
    /// duplicate and reversed edges are merged, and nodes are renumbered in
    /// ascending label order.
    pub fn from_labeled_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let edges: Vec<(i64, i64)> = edges.into_iter().filter(|(u, v)| u != v).collect();
        let mut labels: Vec<i64> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let id =
            |label: i64| labels.binary_search(&label).expect("label collected above") as NodeId;
        let dense = edges.iter().map(|&(u, v)| (id(u), id(v)));
        Ok(Self::from_dense(labels.len(), dense, labels.clone()))
    }

    /// Builds a graph over dense ids `0..node_count`, labeling each node with
    /// its own id. Isolated nodes are kept.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let edges: Vec<(NodeId, NodeId)> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u as usize >= node_count || v as usize >= node_count)
        {
            return Err(Error::NodeOutOfRange {
                node: u.max(v) as u64,
                count: node_count,
            });
        }
        let labels = (0..node_count as i64).collect();
        Ok(Self::from_dense(node_count, edges, labels))
    }

    fn from_dense<I>(node_count: usize, edges: I, labels: Vec<i64>) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut lists: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Graph {
            offsets,
            targets,
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn label(&self, v: NodeId) -> i64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Dense id of the node with the given source label.
    pub fn node_of_label(&self, label: i64) -> Option<NodeId> {
        if self.labels.windows(2).all(|w| w[0] < w[1]) {
            self.labels.binary_search(&label).ok().map(|i| i as NodeId)
        } else {
            self.labels
                .iter()
                .position(|&l| l == label)
                .map(|i| i as NodeId)
        }
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: v as u64,
                count: self.node_count(),
            })
        }
    }

    /// Edge test with range checking.
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.adjacent(u, v))
    }

    /// Edge test searching the shorter of the two adjacency lists.
    #[inline]
    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count() as NodeId)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Number of edges of the edge-relationship graph: every edge `uv` is
    /// adjacent to the `d_u + d_v - 2` edges sharing one of its endpoints.
    pub fn r2_size(&self) -> u64 {
        let twice: u64 = self
            .edges()
            .map(|(u, v)| (self.degree(u) + self.degree(v) - 2) as u64)
            .sum();
        twice / 2
    }

    /// Component id of every node, numbered in order of discovery.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s as NodeId);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w as usize] == usize::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().1 == 1
    }

    /// Induced subgraph on the given nodes, relabeled densely in the order
    /// given and keeping the source labels.
    pub fn induced(&self, nodes: &[NodeId]) -> Graph {
        let mut position = vec![NodeId::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            position[v as usize] = i as NodeId;
        }
        let edges = nodes.iter().flat_map(|&u| {
            let position = &position;
            self.neighbors(u).iter().filter_map(move |&w| {
                let pw = position[w as usize];
                (pw != NodeId::MAX).then(|| (position[u as usize], pw))
            })
        });
        let labels = nodes.iter().map(|&v| self.label(v)).collect();
        let edges: Vec<_> = edges.collect();
        Graph::from_dense(nodes.len(), edges, labels)
    }

    /// Induced subgraph on the largest connected component. Ties go to the
    /// component holding the smallest source label.
    pub fn largest_connected_component(&self) -> Result<Graph> {
        if self.node_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let (comp, count) = self.components();
        let mut size = vec![0usize; count];
        let mut min_label = vec![i64::MAX; count];
        for (v, &c) in comp.iter().enumerate() {
            size[c] += 1;
            min_label[c] = min_label[c].min(self.labels[v]);
        }
        let best = (0..count)
            .max_by(|&a, &b| size[a].cmp(&size[b]).then(min_label[b].cmp(&min_label[a])))
            .expect("at least one component");
        let mut nodes: Vec<NodeId> = (0..self.node_count() as NodeId)
            .filter(|&v| comp[v as usize] == best)
            .collect();
        nodes.sort_by_key(|&v| self.label(v));
        Ok(self.induced(&nodes))
    }

    /// Writes one `u v` line per edge using source labels.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.label(u), self.label(v))?;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated edge list. Lines starting with `#` and
/// blank lines are skipped; every other line must hold exactly two integers.
/// Direction is ignored.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<Graph> {
    let mut edges = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next = |what: &str| -> Result<i64> {
            let token = tokens.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("missing {what} endpoint"),
            })?;
            token.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("'{token}' is not an integer"),
            })
        };
        let u = next("first")?;
        let v = next("second")?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected exactly two tokens".into(),
            });
        }
        edges.push((u, v));
    }
    Graph::from_labeled_edges(edges)
}

pub fn load_edge_list_path(path: impl AsRef<std::path::Path>) -> Result<Graph> {
    let file = std::fs::File::open(path)?;
    load_edge_list(std::io::BufReader::new(file))
}
