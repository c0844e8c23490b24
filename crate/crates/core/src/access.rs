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

//! Neighbor access for walkers.
//!
//! Walkers never index the graph directly; they go through
//! [`NeighborAccess`]. [`NeighborOracle`] models a crawler that can only ask
//! for the friend list of a node it already knows, and counts every request.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Source of adjacency lists. Lists are strictly ascending.
pub trait NeighborAccess {
    fn node_count(&self) -> usize;

    fn neighbors(&self, v: NodeId) -> &[NodeId];

    fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }
}

impl NeighborAccess for Graph {
    fn node_count(&self) -> usize {
        Graph::node_count(self)
    }

    #[inline]
    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        Graph::neighbors(self, v)
    }

    #[inline]
    fn degree(&self, v: NodeId) -> usize {
        Graph::degree(self, v)
    }
}

impl<A: NeighborAccess + ?Sized> NeighborAccess for &A {
    fn node_count(&self) -> usize {
        (**self).node_count()
    }

    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        (**self).neighbors(v)
    }

    fn degree(&self, v: NodeId) -> usize {
        (**self).degree(v)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AccessStats {
    pub calls: u64,
    pub touched: u64,
    pub cached_hits: u64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OracleOptions {
    /// Serve repeat requests from a local memo. Hits are counted in
    /// `cached_hits` instead of `calls`.
    pub memoize: bool,
    /// Sleep injected on every uncached request.
    pub latency: Duration,
}

/// Restricted-access view of a graph with atomic call accounting.
pub struct NeighborOracle<'g> {
    graph: &'g Graph,
    options: OracleOptions,
    calls: AtomicU64,
    cached_hits: AtomicU64,
    touched_count: AtomicU64,
    touched: Vec<AtomicU64>,
}

impl<'g> NeighborOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self::with_options(graph, OracleOptions::default())
    }

    pub fn with_options(graph: &'g Graph, options: OracleOptions) -> Self {
        let words = graph.node_count().div_ceil(64);
        NeighborOracle {
            graph,
            options,
            calls: AtomicU64::new(0),
            cached_hits: AtomicU64::new(0),
            touched_count: AtomicU64::new(0),
            touched: (0..words).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Returns the sorted neighbor list of `v`, recording the request.
    pub fn fetch_neighbors(&self, v: NodeId) -> Result<&'g [NodeId]> {
        if v as usize >= self.graph.node_count() {
            return Err(Error::NodeOutOfRange {
                node: v as u64,
                count: self.graph.node_count(),
            });
        }
        Ok(self.fetch(v))
    }

    #[inline]
    fn fetch(&self, v: NodeId) -> &'g [NodeId] {
        let bit = 1u64 << (v % 64);
        let before = self.touched[(v / 64) as usize].fetch_or(bit, Ordering::Relaxed);
        let seen = before & bit != 0;
        if !seen {
            self.touched_count.fetch_add(1, Ordering::Relaxed);
        }
        if seen && self.options.memoize {
            self.cached_hits.fetch_add(1, Ordering::Relaxed);
        } else {
            self.calls.fetch_add(1, Ordering::Relaxed);
            if !self.options.latency.is_zero() {
                std::thread::sleep(self.options.latency);
            }
        }
        self.graph.neighbors(v)
    }

    pub fn stats(&self) -> AccessStats {
        AccessStats {
            calls: self.calls.load(Ordering::Relaxed),
            touched: self.touched_count.load(Ordering::Relaxed),
            cached_hits: self.cached_hits.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.calls.store(0, Ordering::Relaxed);
        self.cached_hits.store(0, Ordering::Relaxed);
        self.touched_count.store(0, Ordering::Relaxed);
        for word in &self.touched {
            word.store(0, Ordering::Relaxed);
        }
    }
}

impl NeighborAccess for NeighborOracle<'_> {
    fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    #[inline]
    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        self.fetch(v)
    }
}

/// Per-walker request counter layered over any access.
pub struct CountingAccess<A> {
    inner: A,
    calls: std::cell::Cell<u64>,
}

impl<A: NeighborAccess> CountingAccess<A> {
    pub fn new(inner: A) -> Self {
        CountingAccess {
            inner,
            calls: std::cell::Cell::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }
}

impl<A: NeighborAccess> NeighborAccess for CountingAccess<A> {
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[inline]
    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        self.calls.set(self.calls.get() + 1);
        self.inner.neighbors(v)
    }
}
