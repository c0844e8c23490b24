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

//! Random walks on the `d`-node subgraph relationship graph, generated on
//! the fly from adjacency lists.
//!
//! A state is a connected `d`-subset of nodes; two states are adjacent when
//! they share `d - 1` nodes (for `d = 1`, when the nodes are joined by an
//! edge). A [`WalkWindow`] holds the last `l = k - d + 1` states together
//! with the subgraph induced on their union, which is updated incrementally:
//! every step brings at most one new node, costing at most `k - 1` edge
//! searches in its adjacency list.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::access::NeighborAccess;
use crate::catalog::{pair_bit, subset_connected, MAX_K};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::Rng64;

pub const MAX_D: usize = MAX_K - 1;

/// Sorted set of `d` node ids.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SubgraphState {
    nodes: [NodeId; MAX_D],
    len: u8,
}

impl SubgraphState {
    pub fn new(nodes: &[NodeId]) -> Self {
        assert!(
            !nodes.is_empty() && nodes.len() <= MAX_D,
            "state size must lie in 1..={MAX_D}"
        );
        let mut buf = [0; MAX_D];
        buf[..nodes.len()].copy_from_slice(nodes);
        buf[..nodes.len()].sort_unstable();
        assert!(
            buf[..nodes.len()].windows(2).all(|w| w[0] < w[1]),
            "state nodes must be distinct"
        );
        SubgraphState {
            nodes: buf,
            len: nodes.len() as u8,
        }
    }

    pub fn single(v: NodeId) -> Self {
        Self::new(&[v])
    }

    pub fn pair(u: NodeId, v: NodeId) -> Self {
        Self::new(&[u, v])
    }

    #[inline]
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes[..self.len as usize]
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.len as usize
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes().contains(&v)
    }

    fn replace(&self, out: NodeId, incoming: NodeId) -> Self {
        let mut buf = [0; MAX_D];
        let mut n = 0;
        for &v in self.nodes() {
            if v != out {
                buf[n] = v;
                n += 1;
            }
        }
        buf[n] = incoming;
        Self::new(&buf[..=n])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum WalkMode {
    #[default]
    #[serde(rename = "srw")]
    Simple,
    #[serde(rename = "nb")]
    NonBacktracking,
}

impl WalkMode {
    /// Degree used in stationary weights: the non-backtracking walk uses
    /// `max(d - 1, 1)`.
    #[inline]
    pub fn effective_degree(self, degree: u64) -> u64 {
        match self {
            WalkMode::Simple => degree,
            WalkMode::NonBacktracking => degree.saturating_sub(1).max(1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WalkMode::Simple => "srw",
            WalkMode::NonBacktracking => "nb",
        }
    }
}

impl std::str::FromStr for WalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "srw" | "simple" => Ok(WalkMode::Simple),
            "nb" | "nbsrw" | "non-backtracking" => Ok(WalkMode::NonBacktracking),
            other => Err(Error::Config(format!("unknown walk mode '{other}'"))),
        }
    }
}

/// Whether two states are adjacent in the relationship graph.
pub fn states_adjacent<A: NeighborAccess>(
    access: &A,
    a: &SubgraphState,
    b: &SubgraphState,
) -> bool {
    if a.d() != b.d() || a == b {
        return false;
    }
    if a.d() == 1 {
        return access
            .neighbors(a.nodes()[0])
            .binary_search(&b.nodes()[0])
            .is_ok();
    }
    let shared = a.nodes().iter().filter(|v| b.contains(**v)).count();
    shared == a.d() - 1
}

/// Whether the nodes of `state` induce a connected subgraph.
pub fn state_connected<A: NeighborAccess>(access: &A, state: &SubgraphState) -> bool {
    let nodes = state.nodes();
    let mut rows = [0u8; MAX_K];
    for (i, &u) in nodes.iter().enumerate() {
        let list = access.neighbors(u);
        for (j, &v) in nodes.iter().enumerate() {
            if i != j && list.binary_search(&v).is_ok() {
                rows[i] |= 1 << j;
            }
        }
    }
    subset_connected(&rows, ((1u16 << nodes.len()) - 1) as u8)
}

/// Every neighbor of `state` in the relationship graph, appended to `out`.
///
/// For `d >= 2` each node `v_i` is dropped in turn; the sorted adjacency
/// lists of the remaining nodes are merged and every candidate that keeps
/// the set connected yields one neighbor. The dropped node and the added
/// node identify the neighbor, so no candidate is produced twice.
pub fn enumerate_neighbors<A: NeighborAccess>(
    access: &A,
    state: &SubgraphState,
    out: &mut Vec<SubgraphState>,
) {
    let nodes = state.nodes();
    let d = nodes.len();
    if d == 1 {
        out.extend(
            access
                .neighbors(nodes[0])
                .iter()
                .map(|&w| SubgraphState::single(w)),
        );
        return;
    }
    if d == 3 {
        return enumerate_triple(access, state, out);
    }
    let lists: Vec<&[NodeId]> = nodes.iter().map(|&v| access.neighbors(v)).collect();
    let mut rows = [0u8; MAX_K];
    for i in 0..d {
        for j in 0..d {
            if i != j && lists[i].binary_search(&nodes[j]).is_ok() {
                rows[i] |= 1 << j;
            }
        }
    }
    let all = ((1u16 << d) - 1) as u8;
    let mut cursors = [0usize; MAX_D];
    for drop in 0..d {
        let rest = all & !(1 << drop);
        // position `drop` is reused for the incoming node
        let mut trial = rows;
        for r in trial.iter_mut() {
            *r &= !(1 << drop);
        }
        cursors[..d].fill(0);
        loop {
            let mut head = NodeId::MAX;
            for j in (0..d).filter(|&j| j != drop) {
                if let Some(&c) = lists[j].get(cursors[j]) {
                    head = head.min(c);
                }
            }
            if head == NodeId::MAX {
                break;
            }
            let mut touching = 0u8;
            for j in (0..d).filter(|&j| j != drop) {
                if lists[j].get(cursors[j]) == Some(&head) {
                    touching |= 1 << j;
                    cursors[j] += 1;
                }
            }
            if state.contains(head) {
                continue;
            }
            trial[drop] = touching;
            let mut t = trial;
            for j in 0..d {
                if touching & (1 << j) != 0 {
                    t[j] |= 1 << drop;
                }
            }
            if rest == 0 || subset_connected(&t, all) {
                out.push(state.replace(nodes[drop], head));
            }
        }
    }
}

// Three-node case: with rest nodes `a`, `b` and candidate `c`, the new set
// is connected when `c` touches both, or touches one and `a ~ b`.
fn enumerate_triple<A: NeighborAccess>(
    access: &A,
    state: &SubgraphState,
    out: &mut Vec<SubgraphState>,
) {
    let nodes = state.nodes();
    let lists = [
        access.neighbors(nodes[0]),
        access.neighbors(nodes[1]),
        access.neighbors(nodes[2]),
    ];
    let adj = |i: usize, j: usize| lists[i].binary_search(&nodes[j]).is_ok();
    for (drop, a, b) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        let ab = adj(a, b);
        let (la, lb) = (lists[a], lists[b]);
        let (mut i, mut j) = (0, 0);
        let mut emit = |c: NodeId, both: bool| {
            if (both || ab) && !state.contains(c) {
                out.push(state.replace(nodes[drop], c));
            }
        };
        while i < la.len() && j < lb.len() {
            match la[i].cmp(&lb[j]) {
                std::cmp::Ordering::Less => {
                    emit(la[i], false);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    emit(lb[j], false);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    emit(la[i], true);
                    i += 1;
                    j += 1;
                }
            }
        }
        for &c in &la[i..] {
            emit(c, false);
        }
        for &c in &lb[j..] {
            emit(c, false);
        }
    }
}

/// Degree of `state` in the relationship graph.
pub fn state_degree<A: NeighborAccess>(access: &A, state: &SubgraphState) -> u64 {
    match state.nodes() {
        [v] => access.degree(*v) as u64,
        [u, v] => (access.degree(*u) + access.degree(*v) - 2) as u64,
        _ => {
            let mut buf = Vec::new();
            enumerate_neighbors(access, state, &mut buf);
            buf.len() as u64
        }
    }
}

/// Uniformly random neighbor of `state` in the relationship graph.
///
/// For `d = 2` an endpoint is picked with probability proportional to its
/// degree and then a uniform neighbor of it; drawing the other endpoint
/// restarts the whole draw, which makes the result exactly uniform over the
/// `d_u + d_v - 2` neighbors. Larger `d` enumerates all neighbors.
pub fn random_neighbor<A: NeighborAccess, R: Rng + ?Sized>(
    access: &A,
    state: &SubgraphState,
    rng: &mut R,
) -> Result<SubgraphState> {
    match state.nodes() {
        [v] => {
            let list = access.neighbors(*v);
            if list.is_empty() {
                return Err(Error::IsolatedState);
            }
            Ok(SubgraphState::single(list[rng.random_range(0..list.len())]))
        }
        [u, v] => {
            let (lu, lv) = (access.neighbors(*u), access.neighbors(*v));
            if lu.len() + lv.len() <= 2 {
                return Err(Error::IsolatedState);
            }
            loop {
                let r = rng.random_range(0..lu.len() + lv.len());
                let (keep, other, w) = if r < lu.len() {
                    (*u, *v, lu[r])
                } else {
                    (*v, *u, lv[r - lu.len()])
                };
                if w != other {
                    return Ok(SubgraphState::pair(keep, w));
                }
            }
        }
        _ => {
            let mut buf = Vec::new();
            enumerate_neighbors(access, state, &mut buf);
            if buf.is_empty() {
                return Err(Error::IsolatedState);
            }
            Ok(buf[rng.random_range(0..buf.len())])
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateEntry {
    pub state: SubgraphState,
    /// Degree in the relationship graph.
    pub degree: u64,
}

/// The last `l` states of a walk and the subgraph induced on their nodes.
#[derive(Clone, Debug)]
pub struct WalkWindow {
    k: usize,
    d: usize,
    states: VecDeque<StateEntry>,
    prev: Option<StateEntry>,
    slot_node: [NodeId; MAX_K],
    slot_mult: [u8; MAX_K],
    slot_degree: [u32; MAX_K],
    slot_rows: [u8; MAX_K],
    occupied: u8,
    searches: u64,
}

impl WalkWindow {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        check_dimensions(k, d)?;
        Ok(WalkWindow {
            k,
            d,
            states: VecDeque::with_capacity(k - d + 2),
            prev: None,
            slot_node: [0; MAX_K],
            slot_mult: [0; MAX_K],
            slot_degree: [0; MAX_K],
            slot_rows: [0; MAX_K],
            occupied: 0,
            searches: 0,
        })
    }

    /// Builds a window from an explicit visit sequence. With more than `l`
    /// states the earliest ones slide out as they would during a walk.
    pub fn from_states<A: NeighborAccess>(
        access: &A,
        k: usize,
        d: usize,
        states: &[SubgraphState],
    ) -> Result<Self> {
        let mut window = WalkWindow::new(k, d)?;
        for (i, s) in states.iter().enumerate() {
            if s.d() != d || !state_connected(access, s) {
                return Err(Error::InvalidInput(format!(
                    "state {:?} is not a connected {d}-node subgraph",
                    s.nodes()
                )));
            }
            if i > 0 && !states_adjacent(access, &states[i - 1], s) {
                return Err(Error::InvalidInput(format!(
                    "states {:?} and {:?} are not adjacent",
                    states[i - 1].nodes(),
                    s.nodes()
                )));
            }
            window.push(access, *s);
        }
        Ok(window)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of states a full window holds.
    pub fn l(&self) -> usize {
        self.k - self.d + 1
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = &StateEntry> {
        self.states.iter()
    }

    pub fn last(&self) -> Option<&StateEntry> {
        self.states.back()
    }

    /// State visited immediately before the current one.
    pub fn before_last(&self) -> Option<&StateEntry> {
        match self.states.len() {
            0 => None,
            1 => self.prev.as_ref(),
            n => self.states.get(n - 2),
        }
    }

    /// State that slid out of the window most recently.
    pub fn prev_state(&self) -> Option<&StateEntry> {
        self.prev.as_ref()
    }

    pub fn is_full(&self) -> bool {
        self.states.len() == self.l()
    }

    pub fn union_size(&self) -> usize {
        self.occupied.count_ones() as usize
    }

    /// A full window touching exactly `k` distinct nodes.
    #[inline]
    pub fn is_valid(&self) -> bool {
        self.is_full() && self.union_size() == self.k
    }

    pub fn union_nodes(&self) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = self.slots().map(|s| self.slot_node[s]).collect();
        nodes.sort_unstable();
        nodes
    }

    pub fn induced_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut edges = Vec::new();
        for i in self.slots() {
            for j in self.slots() {
                if self.slot_rows[i] & (1 << j) != 0 && self.slot_node[i] < self.slot_node[j] {
                    edges.push((self.slot_node[i], self.slot_node[j]));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(move |&s| self.occupied & (1 << s) != 0)
    }

    /// Node held in each position `0..k`. Meaningful for valid windows.
    pub fn slot_nodes(&self) -> &[NodeId] {
        &self.slot_node[..self.k]
    }

    /// Degree in `G` of the node held in each position.
    pub fn slot_degrees(&self) -> &[u32] {
        &self.slot_degree[..self.k]
    }

    /// Pair mask of the induced subgraph over positions `0..k`.
    #[inline]
    pub fn labeled_mask(&self) -> u16 {
        let mut mask = 0;
        for j in 1..self.k {
            let row = self.slot_rows[j];
            for i in 0..j {
                if row & (1 << i) != 0 {
                    mask |= pair_bit(i, j);
                }
            }
        }
        mask
    }

    /// Position holding `v`, if `v` is in the union.
    pub fn slot_of(&self, v: NodeId) -> Option<usize> {
        self.slots().find(|&s| self.slot_node[s] == v)
    }

    /// Total adjacency searches spent maintaining the induced edges.
    pub fn searches(&self) -> u64 {
        self.searches
    }

    fn add_node<A: NeighborAccess>(&mut self, access: &A, v: NodeId) {
        for s in 0..self.k {
            if self.occupied & (1 << s) != 0 && self.slot_node[s] == v {
                self.slot_mult[s] += 1;
                return;
            }
        }
        let free = (!self.occupied).trailing_zeros() as usize;
        assert!(free < self.k, "window union exceeds k nodes");
        let list = access.neighbors(v);
        let mut row = 0u8;
        for s in 0..self.k {
            if self.occupied & (1 << s) != 0 {
                self.searches += 1;
                if list.binary_search(&self.slot_node[s]).is_ok() {
                    row |= 1 << s;
                    self.slot_rows[s] |= 1 << free;
                }
            }
        }
        self.slot_node[free] = v;
        self.slot_mult[free] = 1;
        self.slot_degree[free] = list.len() as u32;
        self.slot_rows[free] = row;
        self.occupied |= 1 << free;
    }

    fn remove_node(&mut self, v: NodeId) {
        let s = self.slot_of(v).expect("node present in window");
        self.slot_mult[s] -= 1;
        if self.slot_mult[s] == 0 {
            self.occupied &= !(1 << s);
            self.slot_rows[s] = 0;
            for r in self.slot_rows.iter_mut() {
                *r &= !(1 << s);
            }
        }
    }

    /// Appends a state, sliding the oldest out of a full window. The degree
    /// is derived from node degrees for `d <= 2` and by enumeration
    /// otherwise.
    pub fn push<A: NeighborAccess>(&mut self, access: &A, state: SubgraphState) {
        self.push_inner(access, state, None);
    }

    pub(crate) fn push_with_degree<A: NeighborAccess>(
        &mut self,
        access: &A,
        state: SubgraphState,
        degree: u64,
    ) {
        self.push_inner(access, state, Some(degree));
    }

    fn push_inner<A: NeighborAccess>(
        &mut self,
        access: &A,
        state: SubgraphState,
        degree: Option<u64>,
    ) {
        debug_assert_eq!(state.d(), self.d);
        if self.is_full() {
            let old = self.states.pop_front().expect("full window");
            for &v in old.state.nodes() {
                self.remove_node(v);
            }
            self.prev = Some(old);
        }
        for &v in state.nodes() {
            self.add_node(access, v);
        }
        let degree = degree.unwrap_or_else(|| match state.nodes() {
            [v] => self.slot_degree[self.slot_of(*v).unwrap()] as u64,
            [u, v] => {
                let du = self.slot_degree[self.slot_of(*u).unwrap()] as u64;
                let dv = self.slot_degree[self.slot_of(*v).unwrap()] as u64;
                du + dv - 2
            }
            _ => state_degree(access, &state),
        });
        self.states.push_back(StateEntry { state, degree });
    }

    /// Stationary probability of the window scaled by twice the edge count
    /// of the relationship graph: `d_{X_l}` for `l = 1`, 1 for `l = 2`, and
    /// the product of `1/d_{X_j}` over interior states otherwise.
    #[inline]
    pub fn pi_tilde(&self, mode: WalkMode) -> f64 {
        assert!(self.is_full(), "stationary weight needs a full window");
        let deg = |e: &StateEntry| mode.effective_degree(e.degree) as f64;
        match self.l() {
            1 => deg(self.states.back().unwrap()),
            2 => 1.0,
            l => self
                .states
                .iter()
                .skip(1)
                .take(l - 2)
                .fold(1.0, |acc, e| acc / deg(e)),
        }
    }
}

/// Free-function form of [`WalkWindow::pi_tilde`].
pub fn pi_tilde(window: &WalkWindow, mode: WalkMode) -> f64 {
    window.pi_tilde(mode)
}

pub(crate) fn check_dimensions(k: usize, d: usize) -> Result<()> {
    if !(3..=MAX_K).contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    if d == 0 || d >= k {
        return Err(Error::InvalidDimension { k, d });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub k: usize,
    pub d: usize,
    pub mode: WalkMode,
    pub seed: u64,
    pub start: Option<NodeId>,
    /// Steps discarded after the window first fills.
    pub burn_in: u64,
}

/// A single random walk over one graph. Not shareable between threads;
/// run one walker per chain.
pub struct Walker<'a, A: NeighborAccess> {
    access: &'a A,
    mode: WalkMode,
    rng: Rng64,
    window: WalkWindow,
    // neighbors of the current state, kept for d >= 3
    candidates: Vec<SubgraphState>,
}

impl<'a, A: NeighborAccess> Walker<'a, A> {
    /// Grows a random connected `d`-subset from the start node (uniform if
    /// none given), then walks until the window holds `l` states and
    /// finally discards `burn_in` further steps.
    pub fn start(access: &'a A, config: WalkConfig) -> Result<Self> {
        let WalkConfig { k, d, .. } = config;
        check_dimensions(k, d)?;
        let n = access.node_count();
        if n < k {
            return Err(Error::GraphTooSmall { nodes: n, k });
        }
        let mut rng = Rng64::seed_from_u64(config.seed);
        let start = match config.start {
            Some(v) if (v as usize) < n => v,
            Some(v) => {
                return Err(Error::NodeOutOfRange {
                    node: v as u64,
                    count: n,
                })
            }
            None => rng.random_range(0..n as NodeId),
        };
        let mut members = vec![start];
        while members.len() < d {
            let mut frontier: Vec<NodeId> = members
                .iter()
                .flat_map(|&v| access.neighbors(v).iter().copied())
                .filter(|w| !members.contains(w))
                .collect();
            frontier.sort_unstable();
            frontier.dedup();
            if frontier.is_empty() {
                return Err(Error::GraphTooSmall {
                    nodes: members.len(),
                    k,
                });
            }
            members.push(frontier[rng.random_range(0..frontier.len())]);
        }
        let mut walker = Walker {
            access,
            mode: config.mode,
            rng,
            window: WalkWindow::new(k, d)?,
            candidates: Vec::new(),
        };
        walker.enter(SubgraphState::new(&members));
        while !walker.window.is_full() {
            walker.step()?;
        }
        for _ in 0..config.burn_in {
            walker.step()?;
        }
        Ok(walker)
    }

    /// Continues a walk from an existing window.
    pub fn from_window(access: &'a A, window: WalkWindow, mode: WalkMode, seed: u64) -> Self {
        let mut walker = Walker {
            access,
            mode,
            rng: Rng64::seed_from_u64(seed),
            window,
            candidates: Vec::new(),
        };
        walker.refresh_candidates();
        walker
    }

    fn refresh_candidates(&mut self) {
        self.candidates.clear();
        if self.window.d >= 3 {
            if let Some(last) = self.window.last() {
                let state = last.state;
                enumerate_neighbors(self.access, &state, &mut self.candidates);
            }
        }
    }

    fn enter(&mut self, state: SubgraphState) {
        if self.window.d >= 3 {
            self.candidates.clear();
            enumerate_neighbors(self.access, &state, &mut self.candidates);
            let degree = self.candidates.len() as u64;
            self.window.push_with_degree(self.access, state, degree);
        } else {
            self.window.push(self.access, state);
        }
    }

    pub fn window(&self) -> &WalkWindow {
        &self.window
    }

    pub fn into_window(self) -> WalkWindow {
        self.window
    }

    pub fn mode(&self) -> WalkMode {
        self.mode
    }

    pub fn access(&self) -> &'a A {
        self.access
    }

    fn uniform_neighbor(&mut self, current: &StateEntry) -> Result<SubgraphState> {
        if self.window.d >= 3 {
            if self.candidates.is_empty() {
                return Err(Error::IsolatedState);
            }
            let i = self.rng.random_range(0..self.candidates.len());
            Ok(self.candidates[i])
        } else {
            random_neighbor(self.access, &current.state, &mut self.rng)
        }
    }

    fn choose_next(&mut self) -> Result<SubgraphState> {
        let current = *self.window.last().expect("walker holds a state");
        let back = self.window.before_last().map(|e| e.state);
        match (self.mode, back) {
            (WalkMode::NonBacktracking, Some(back)) => {
                if current.degree == 1 {
                    return Ok(back);
                }
                if self.window.d >= 3 {
                    // uniform over the candidates other than `back`
                    let n = self.candidates.len();
                    let skip = self.candidates.iter().position(|s| *s == back);
                    let upper = if skip.is_some() { n - 1 } else { n };
                    if upper == 0 {
                        return Err(Error::IsolatedState);
                    }
                    let mut i = self.rng.random_range(0..upper);
                    if let Some(p) = skip {
                        if i >= p {
                            i += 1;
                        }
                    }
                    return Ok(self.candidates[i]);
                }
                loop {
                    let next = self.uniform_neighbor(&current)?;
                    if next != back {
                        return Ok(next);
                    }
                }
            }
            _ => self.uniform_neighbor(&current),
        }
    }

    /// Moves to a neighbor of the current state chosen by the walk rule.
    pub fn step(&mut self) -> Result<()> {
        let next = self.choose_next()?;
        self.enter(next);
        Ok(())
    }

    /// Moves to a given state, which must be adjacent to the current one.
    pub fn step_to(&mut self, next: SubgraphState) -> Result<()> {
        let current = self.window.last().expect("walker holds a state").state;
        if !states_adjacent(self.access, &current, &next) {
            return Err(Error::InvalidInput(format!(
                "state {:?} is not adjacent to {:?}",
                next.nodes(),
                current.nodes()
            )));
        }
        self.enter(next);
        Ok(())
    }
}
