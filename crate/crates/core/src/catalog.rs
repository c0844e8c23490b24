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

//! Inventory of connected 3-, 4- and 5-node graphlets.
//!
//! Small graphs on `k <= 5` positions are stored as a pair bitmask: the pair
//! `i < j` owns bit `j(j-1)/2 + i`. Subsets of positions are `u8` bitmasks.
//! Classes are numbered from 1 in the conventional order used by the
//! published coefficient tables, which is pinned in [`CLASS_EDGES`].

use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{Error, Result};

pub const MAX_K: usize = 5;

/// Representative edge lists, one per class, in table order.
const K3_EDGES: &[&[(u8, u8)]] = &[&[(0, 1), (1, 2)], &[(0, 1), (1, 2), (0, 2)]];

const K4_EDGES: &[&[(u8, u8)]] = &[
    &[(0, 1), (1, 2), (2, 3)],
    &[(0, 1), (0, 2), (0, 3)],
    &[(0, 1), (1, 2), (2, 3), (0, 3)],
    &[(0, 1), (1, 2), (0, 2), (2, 3)],
    &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
    &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
];

const K5_EDGES: &[&[(u8, u8)]] = &[
    &[(0, 1), (0, 2), (1, 3), (2, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 4)],
    &[(0, 1), (0, 2), (0, 3), (0, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 4)],
    &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2)],
    &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4)],
    &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3)],
    &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (3, 4)],
    &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
    &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 3)],
    &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)],
    &[
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
    ],
    &[
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 2),
        (1, 3),
        (2, 4),
        (3, 4),
    ],
    &[
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
    ],
    &[
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (3, 4),
    ],
];

pub const CLASS_EDGES: [&[&[(u8, u8)]]; 3] = [K3_EDGES, K4_EDGES, K5_EDGES];

#[inline]
pub const fn pair_bit(i: usize, j: usize) -> u16 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1 << (j * (j - 1) / 2 + i)
}

pub const fn pair_count(k: usize) -> usize {
    k * (k - 1) / 2
}

pub fn mask_from_edges(edges: &[(u8, u8)]) -> u16 {
    edges
        .iter()
        .fold(0, |m, &(a, b)| m | pair_bit(a as usize, b as usize))
}

/// Neighbor bitmask of each position.
pub fn adjacency_rows(mask: u16, k: usize) -> [u8; MAX_K] {
    let mut rows = [0u8; MAX_K];
    for j in 1..k {
        for i in 0..j {
            if mask & pair_bit(i, j) != 0 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
    }
    rows
}

/// Whether `subset` induces a connected graph. The empty set is not.
pub fn subset_connected(rows: &[u8; MAX_K], subset: u8) -> bool {
    if subset == 0 {
        return false;
    }
    let mut seen = subset & subset.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = rows[v] & subset & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == subset
}

pub fn mask_connected(mask: u16, k: usize) -> bool {
    subset_connected(&adjacency_rows(mask, k), ((1u16 << k) - 1) as u8)
}

pub fn degree_signature(mask: u16, k: usize) -> Vec<u8> {
    let rows = adjacency_rows(mask, k);
    let mut sig: Vec<u8> = rows[..k].iter().map(|r| r.count_ones() as u8).collect();
    sig.sort_unstable();
    sig
}

/// Relabels position `i` to `perm[i]`.
pub fn permute_mask(mask: u16, k: usize, perm: &[usize]) -> u16 {
    let mut out = 0;
    for j in 1..k {
        for i in 0..j {
            if mask & pair_bit(i, j) != 0 {
                out |= pair_bit(perm[i], perm[j]);
            }
        }
    }
    out
}

/// Smallest pair mask over all relabelings.
pub fn canonical_code(mask: u16, k: usize) -> u16 {
    (0..k)
        .permutations(k)
        .map(|p| permute_mask(mask, k, &p))
        .min()
        .unwrap_or(mask)
}

/// Two `d`-subsets are adjacent states when they share `d - 1` positions;
/// single positions are adjacent when joined by an edge.
#[inline]
pub fn states_adjacent(rows: &[u8; MAX_K], a: u8, b: u8, d: usize) -> bool {
    if d == 1 {
        rows[a.trailing_zeros() as usize] & b != 0
    } else {
        (a & b).count_ones() as usize == d - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphletClass {
    pub k: usize,
    /// 1-based position in table order.
    pub index: usize,
    pub edges: Vec<(u8, u8)>,
    pub mask: u16,
    pub degree_signature: Vec<u8>,
    pub canonical_code: u16,
}

impl GraphletClass {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Class(usize),
    Disconnected,
}

pub struct Catalog {
    k: usize,
    classes: Vec<GraphletClass>,
    // labeled pair mask -> class index, 0 for disconnected
    lookup: Vec<u8>,
}

fn check_k(k: usize) -> Result<()> {
    if (3..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedK(k))
    }
}

impl Catalog {
    fn build(k: usize) -> Catalog {
        let classes: Vec<GraphletClass> = CLASS_EDGES[k - 3]
            .iter()
            .enumerate()
            .map(|(i, edges)| {
                let mask = mask_from_edges(edges);
                GraphletClass {
                    k,
                    index: i + 1,
                    edges: edges.to_vec(),
                    mask,
                    degree_signature: degree_signature(mask, k),
                    canonical_code: canonical_code(mask, k),
                }
            })
            .collect();
        let lookup = (0..1u32 << pair_count(k))
            .map(|mask| {
                let mask = mask as u16;
                if !mask_connected(mask, k) {
                    return 0;
                }
                let code = canonical_code(mask, k);
                classes
                    .iter()
                    .find(|c| c.canonical_code == code)
                    .map(|c| c.index as u8)
                    .expect("every connected graph has a class")
            })
            .collect();
        Catalog { k, classes, lookup }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn classes(&self) -> &[GraphletClass] {
        &self.classes
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class with the given 1-based index.
    pub fn class(&self, index: usize) -> &GraphletClass {
        &self.classes[index - 1]
    }

    /// Table lookup on a labeled pair mask over positions `0..k`.
    #[inline]
    pub fn classify_mask(&self, mask: u16) -> Option<usize> {
        match self.lookup[mask as usize] {
            0 => None,
            i => Some(i as usize),
        }
    }

    /// Classifies a labeled pair mask by degree signature, comparing
    /// canonical codes only when several classes share the signature.
    pub fn classify_by_signature(&self, mask: u16) -> Classification {
        if !mask_connected(mask, self.k) {
            return Classification::Disconnected;
        }
        let sig = degree_signature(mask, self.k);
        let mut candidates = self.classes.iter().filter(|c| c.degree_signature == sig);
        let first = candidates.next().expect("connected graph has a class");
        let rest: Vec<&GraphletClass> = candidates.collect();
        if rest.is_empty() {
            return Classification::Class(first.index);
        }
        let code = canonical_code(mask, self.k);
        std::iter::once(first)
            .chain(rest)
            .find(|c| c.canonical_code == code)
            .map(|c| Classification::Class(c.index))
            .expect("canonical code matches one candidate")
    }

    /// Groups of class indices sharing a degree signature.
    pub fn signature_collisions(&self) -> Vec<Vec<usize>> {
        self.classes
            .iter()
            .map(|c| &c.degree_signature)
            .unique()
            .map(|sig| {
                self.classes
                    .iter()
                    .filter(|c| &c.degree_signature == sig)
                    .map(|c| c.index)
                    .collect::<Vec<_>>()
            })
            .filter(|group| group.len() > 1)
            .collect()
    }
}

static CATALOGS: [OnceLock<Catalog>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];

pub fn catalog(k: usize) -> Result<&'static Catalog> {
    check_k(k)?;
    Ok(CATALOGS[k - 3].get_or_init(|| Catalog::build(k)))
}

pub fn enumerate_classes(k: usize) -> Result<&'static [GraphletClass]> {
    Ok(catalog(k)?.classes())
}

/// Classifies the subgraph induced on `nodes` given its edge set. Edges
/// with an endpoint outside `nodes` are ignored.
pub fn classify<N: PartialEq + Copy>(
    k: usize,
    nodes: &[N],
    edges: &[(N, N)],
) -> Result<Classification> {
    let cat = catalog(k)?;
    if nodes.len() != k {
        return Err(Error::InvalidInput(format!(
            "expected {k} nodes, got {}",
            nodes.len()
        )));
    }
    let pos = |v: N| nodes.iter().position(|&x| x == v);
    let mask = edges
        .iter()
        .fold(0u16, |m, &(a, b)| match (pos(a), pos(b)) {
            (Some(i), Some(j)) if i != j => m | pair_bit(i, j),
            _ => m,
        });
    Ok(cat.classify_by_signature(mask))
}

/// All `d`-subsets of positions `0..k` inducing a connected subgraph.
pub fn connected_d_subgraphs(mask: u16, k: usize, d: usize) -> Vec<u8> {
    let rows = adjacency_rows(mask, k);
    (0..1u16 << k)
        .map(|s| s as u8)
        .filter(|s| s.count_ones() as usize == d && subset_connected(&rows, *s))
        .collect()
}

/// Counts ordered tuples of `l = k - d + 1` distinct connected `d`-subsets
/// covering all `k` positions with consecutive members adjacent: every
/// combination of `l` subsets covering the positions, in every order.
pub fn alpha_of_mask(mask: u16, k: usize, d: usize) -> u64 {
    assert!(d >= 1 && d <= k, "d must lie in 1..=k");
    let l = k - d + 1;
    let full = ((1u16 << k) - 1) as u8;
    let rows = adjacency_rows(mask, k);
    let subsets = connected_d_subgraphs(mask, k, d);
    let mut alpha = 0;
    for combo in subsets.iter().copied().combinations(l) {
        if combo.iter().fold(0, |u, s| u | s) != full {
            continue;
        }
        for order in combo.iter().copied().permutations(l) {
            if order
                .windows(2)
                .all(|w| states_adjacent(&rows, w[0], w[1], d))
            {
                alpha += 1;
            }
        }
    }
    alpha
}

/// The ordered tuples counted by [`alpha_of_mask`], each a list of
/// `l` position subsets.
pub fn corresponding_tuples(mask: u16, k: usize, d: usize) -> Vec<Vec<u8>> {
    assert!(d >= 1 && d <= k, "d must lie in 1..=k");
    let l = k - d + 1;
    let full = ((1u16 << k) - 1) as u8;
    let rows = adjacency_rows(mask, k);
    let subsets = connected_d_subgraphs(mask, k, d);
    let mut out = Vec::new();
    for combo in subsets.iter().copied().combinations(l) {
        if combo.iter().fold(0, |u, s| u | s) != full {
            continue;
        }
        out.extend(combo.iter().copied().permutations(l).filter(|order| {
            order
                .windows(2)
                .all(|w| states_adjacent(&rows, w[0], w[1], d))
        }));
    }
    out
}

pub fn compute_alpha(class: &GraphletClass, d: usize) -> u64 {
    alpha_of_mask(class.mask, class.k, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaTable {
    pub k: usize,
    pub d: usize,
    pub alpha: Vec<u64>,
}

impl AlphaTable {
    /// 1-based class indices with a zero coefficient.
    pub fn not_estimable(&self) -> Vec<usize> {
        (1..=self.alpha.len())
            .filter(|&i| self.alpha[i - 1] == 0)
            .collect()
    }

    pub fn halves(&self) -> Vec<f64> {
        self.alpha.iter().map(|&a| a as f64 / 2.0).collect()
    }
}

static ALPHAS: [OnceLock<Vec<Vec<u64>>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// Coefficients for every class at walk dimension `d`, `1 <= d <= k`.
/// `d = k` is the degenerate single-state window with coefficient 1.
pub fn alpha_table(k: usize, d: usize) -> Result<AlphaTable> {
    let cat = catalog(k)?;
    if d == 0 || d > k {
        return Err(Error::InvalidDimension { k, d });
    }
    let rows = ALPHAS[k - 3].get_or_init(|| {
        (1..=k)
            .map(|d| cat.classes().iter().map(|c| compute_alpha(c, d)).collect())
            .collect()
    });
    Ok(AlphaTable {
        k,
        d,
        alpha: rows[d - 1].clone(),
    })
}
