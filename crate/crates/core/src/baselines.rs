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

//! Competing samplers: wedge sampling and 3-path sampling with full graph
//! access, and wedge sampling along a Metropolis-Hastings walk that only
//! uses neighbor queries.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::access::{CountingAccess, NeighborAccess};
use crate::catalog;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Number of 3-paths contained in each 4-node class.
pub const PATH3_BETA: [u64; 6] = [1, 0, 4, 2, 6, 12];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineMethod {
    #[serde(rename = "wedge")]
    Wedge,
    #[serde(rename = "path3")]
    Path3,
    #[serde(rename = "mhrw-wedge")]
    MhrwWedge,
}

impl BaselineMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineMethod::Wedge => "wedge",
            BaselineMethod::Path3 => "path3",
            BaselineMethod::MhrwWedge => "mhrw-wedge",
        }
    }

    /// Graphlet size the method estimates.
    pub fn k(self) -> usize {
        match self {
            BaselineMethod::Path3 => 4,
            _ => 3,
        }
    }

    /// Whether the method reads the whole graph instead of querying
    /// neighbors.
    pub fn full_access(self) -> bool {
        !matches!(self, BaselineMethod::MhrwWedge)
    }
}

impl std::str::FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wedge" => Ok(BaselineMethod::Wedge),
            "path3" => Ok(BaselineMethod::Path3),
            "mhrw-wedge" | "mhrw" => Ok(BaselineMethod::MhrwWedge),
            other => Err(Error::Config(format!("unknown baseline '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub method: BaselineMethod,
    pub k: usize,
    pub samples: u64,
    /// Samples that contributed (3-path draws with a repeated node are
    /// dropped).
    pub kept: u64,
    pub counts: Option<Vec<Option<f64>>>,
    pub concentration: Vec<Option<f64>>,
    pub not_estimable: Vec<usize>,
    /// Neighbor queries made while sampling; `None` for full-access methods.
    pub api_calls: Option<u64>,
    /// Queries spent finding a start node.
    pub setup_calls: Option<u64>,
    pub preprocess_secs: f64,
    pub sample_secs: f64,
}

impl BaselineReport {
    pub fn concentration_values(&self) -> Vec<f64> {
        self.concentration
            .iter()
            .map(|c| c.unwrap_or(0.0))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn normalize(values: &[Option<f64>]) -> Vec<Option<f64>> {
    let total: f64 = values.iter().flatten().sum();
    values
        .iter()
        .map(|v| v.and_then(|x| (total > 0.0).then(|| x / total)))
        .collect()
}

fn pick_other<R: Rng + ?Sized>(list: &[NodeId], exclude_pos: usize, rng: &mut R) -> NodeId {
    let mut i = rng.random_range(0..list.len() - 1);
    if i >= exclude_pos {
        i += 1;
    }
    list[i]
}

fn pick_pair<R: Rng + ?Sized>(list: &[NodeId], rng: &mut R) -> (NodeId, NodeId) {
    let a = rng.random_range(0..list.len());
    (list[a], pick_other(list, a, rng))
}

/// Total wedge count `sum_v C(d_v, 2)`.
pub fn wedge_total(g: &Graph) -> u64 {
    (0..g.node_count() as NodeId)
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// Picks `v` with probability proportional to `C(d_v, 2)` and a uniform
/// pair of its neighbors; the closed fraction `kappa` gives triangle count
/// `kappa W / 3` and open-wedge count `(1 - kappa) W`.
pub fn wedge_sampling<R: Rng + ?Sized>(g: &Graph, n: u64, rng: &mut R) -> Result<BaselineReport> {
    let t0 = Instant::now();
    let mut prefix = Vec::with_capacity(g.node_count());
    let mut total = 0u64;
    for v in 0..g.node_count() as NodeId {
        let d = g.degree(v) as u64;
        total += d * d.saturating_sub(1) / 2;
        prefix.push(total);
    }
    if total == 0 {
        return Err(Error::InvalidInput("graph has no wedges".into()));
    }
    let preprocess_secs = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let mut closed = 0u64;
    for _ in 0..n {
        let r = rng.random_range(0..total);
        let v = prefix.partition_point(|&p| p <= r) as NodeId;
        let (a, b) = pick_pair(g.neighbors(v), rng);
        if g.adjacent(a, b) {
            closed += 1;
        }
    }
    let sample_secs = t1.elapsed().as_secs_f64();
    let kappa = closed as f64 / n.max(1) as f64;
    let w = total as f64;
    let counts = vec![Some((1.0 - kappa) * w), Some(kappa * w / 3.0)];
    Ok(BaselineReport {
        method: BaselineMethod::Wedge,
        k: 3,
        samples: n,
        kept: n,
        concentration: normalize(&counts),
        counts: Some(counts),
        not_estimable: Vec::new(),
        api_calls: None,
        setup_calls: None,
        preprocess_secs,
        sample_secs,
    })
}

/// Draws 3-paths `u'-u-v-v'`: the middle edge with probability
/// proportional to `tau_e = (d_u - 1)(d_v - 1)`, then uniform outer
/// neighbors.
pub struct Path3Sampler<'g> {
    graph: &'g Graph,
    edges: Vec<(NodeId, NodeId)>,
    prefix: Vec<u64>,
    total: u64,
}

impl<'g> Path3Sampler<'g> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        let edges: Vec<(NodeId, NodeId)> = graph.edges().collect();
        let mut prefix = Vec::with_capacity(edges.len());
        let mut total = 0u64;
        for &(u, v) in &edges {
            total += (graph.degree(u) as u64 - 1) * (graph.degree(v) as u64 - 1);
            prefix.push(total);
        }
        if total == 0 {
            return Err(Error::InvalidInput("graph has no 3-paths".into()));
        }
        Ok(Path3Sampler {
            graph,
            edges,
            prefix,
            total,
        })
    }

    /// `S = sum_e tau_e`.
    pub fn total_weight(&self) -> u64 {
        self.total
    }

    /// One draw; `None` when both outer nodes coincide.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<[NodeId; 4]> {
        let r = rng.random_range(0..self.total);
        let (u, v) = self.edges[self.prefix.partition_point(|&p| p <= r)];
        let (nu, nv) = (self.graph.neighbors(u), self.graph.neighbors(v));
        let u2 = pick_other(nu, nu.binary_search(&v).unwrap(), rng);
        let v2 = pick_other(nv, nv.binary_search(&u).unwrap(), rng);
        (u2 != v2).then_some([u2, u, v, v2])
    }
}

/// 3-path sampling: each kept draw of class `i` adds `S / beta_i`, and
/// counts are the sums divided by `n`.
pub fn path3_sampling<R: Rng + ?Sized>(g: &Graph, n: u64, rng: &mut R) -> Result<BaselineReport> {
    let t0 = Instant::now();
    let cat = catalog::catalog(4)?;
    let sampler = Path3Sampler::new(g)?;
    let s = sampler.total_weight() as f64;
    let preprocess_secs = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let mut acc = [0.0f64; 6];
    let mut kept = 0u64;
    for _ in 0..n {
        let Some(nodes) = sampler.draw(rng) else {
            continue;
        };
        kept += 1;
        let mut mask = 0u16;
        for j in 1..4 {
            for i in 0..j {
                if g.adjacent(nodes[i], nodes[j]) {
                    mask |= catalog::pair_bit(i, j);
                }
            }
        }
        let class = cat.classify_mask(mask).expect("a 3-path is connected");
        acc[class - 1] += s / PATH3_BETA[class - 1] as f64;
    }
    let sample_secs = t1.elapsed().as_secs_f64();
    let counts: Vec<Option<f64>> = (0..6)
        .map(|i| (PATH3_BETA[i] > 0).then(|| acc[i] / n.max(1) as f64))
        .collect();
    Ok(BaselineReport {
        method: BaselineMethod::Path3,
        k: 4,
        samples: n,
        kept,
        concentration: normalize(&counts),
        counts: Some(counts),
        not_estimable: vec![2],
        api_calls: None,
        setup_calls: None,
        preprocess_secs,
        sample_secs,
    })
}

/// Acceptance rule of the Metropolis-Hastings walk used for wedge
/// sampling. Proposals are uniform neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AcceptanceRule {
    /// `min(1, (d_w - 1) / (d_v - 1))`, which leaves `C(d_v, 2)` invariant.
    #[default]
    DegreeMinusOne,
    /// `min(1, d_w (d_w - 1) / (d_v (d_v - 1)))`.
    WedgeCountRatio,
}

impl AcceptanceRule {
    pub fn probability(self, dv: usize, dw: usize) -> f64 {
        let (dv, dw) = (dv as f64, dw as f64);
        let ratio = match self {
            AcceptanceRule::DegreeMinusOne => (dw - 1.0) / (dv - 1.0),
            AcceptanceRule::WedgeCountRatio => dw * (dw - 1.0) / (dv * (dv - 1.0)),
        };
        ratio.min(1.0)
    }
}

impl std::str::FromStr for AcceptanceRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree-minus-one" => Ok(AcceptanceRule::DegreeMinusOne),
            "wedge-count-ratio" => Ok(AcceptanceRule::WedgeCountRatio),
            other => Err(Error::Config(format!("unknown acceptance rule '{other}'"))),
        }
    }
}

/// Wedge sampling along a Metropolis-Hastings walk. Each step makes three
/// neighbor queries: the current node, one wedge end (closure test) and
/// the proposal (its degree).
pub struct MhrwWedgeSampler<'a, A: NeighborAccess, R: Rng> {
    access: CountingAccess<&'a A>,
    rng: R,
    rule: AcceptanceRule,
    current: NodeId,
    open: u64,
    closed: u64,
    setup_calls: u64,
}

impl<'a, A: NeighborAccess, R: Rng> MhrwWedgeSampler<'a, A, R> {
    /// Starts at `start`, or at uniform nodes until one has degree >= 2.
    pub fn new(
        access: &'a A,
        mut rng: R,
        rule: AcceptanceRule,
        start: Option<NodeId>,
    ) -> Result<Self> {
        let counted = CountingAccess::new(access);
        let n = counted.node_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let current = match start {
            Some(v) if v as usize >= n => {
                return Err(Error::NodeOutOfRange {
                    node: v as u64,
                    count: n,
                });
            }
            Some(v) => {
                if counted.degree(v) < 2 {
                    return Err(Error::InvalidInput(format!(
                        "start node {v} has degree < 2"
                    )));
                }
                v
            }
            None => {
                let mut tries = 0usize;
                loop {
                    let v = rng.random_range(0..n as NodeId);
                    if counted.degree(v) >= 2 {
                        break v;
                    }
                    tries += 1;
                    if tries > 64 * n {
                        return Err(Error::InvalidInput("no node of degree >= 2 found".into()));
                    }
                }
            }
        };
        let setup_calls = counted.calls();
        Ok(MhrwWedgeSampler {
            access: counted,
            rng,
            rule,
            current,
            open: 0,
            closed: 0,
            setup_calls,
        })
    }

    pub fn current(&self) -> NodeId {
        self.current
    }

    /// Samples a wedge at the current node and moves. Returns the node the
    /// wedge was centered at.
    pub fn step(&mut self) -> NodeId {
        let v = self.current;
        let list = self.access.neighbors(v);
        let (a, b) = pick_pair(list, &mut self.rng);
        if self.access.neighbors(a).binary_search(&b).is_ok() {
            self.closed += 1;
        } else {
            self.open += 1;
        }
        let w = list[self.rng.random_range(0..list.len())];
        let dw = self.access.neighbors(w).len();
        let p: f64 = self.rng.random();
        if dw >= 2 && p <= self.rule.probability(list.len(), dw) {
            self.current = w;
        }
        v
    }

    /// Open and closed wedge tallies.
    pub fn tallies(&self) -> (u64, u64) {
        (self.open, self.closed)
    }

    /// Queries made by `step` so far.
    pub fn api_calls(&self) -> u64 {
        self.access.calls() - self.setup_calls
    }

    pub fn setup_calls(&self) -> u64 {
        self.setup_calls
    }

    /// `(3 open / (3 open + closed), closed / (3 open + closed))`.
    pub fn concentration(&self) -> Option<[f64; 2]> {
        let denom = 3.0 * self.open as f64 + self.closed as f64;
        (denom > 0.0).then(|| [3.0 * self.open as f64 / denom, self.closed as f64 / denom])
    }
}

pub fn mhrw_wedge_sampling<A: NeighborAccess, R: Rng>(
    access: &A,
    n: u64,
    rng: R,
    rule: AcceptanceRule,
) -> Result<BaselineReport> {
    let t0 = Instant::now();
    let mut sampler = MhrwWedgeSampler::new(access, rng, rule, None)?;
    let preprocess_secs = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    for _ in 0..n {
        sampler.step();
    }
    let sample_secs = t1.elapsed().as_secs_f64();
    let concentration = match sampler.concentration() {
        Some([a, b]) => vec![Some(a), Some(b)],
        None => vec![None, None],
    };
    Ok(BaselineReport {
        method: BaselineMethod::MhrwWedge,
        k: 3,
        samples: n,
        kept: n,
        counts: None,
        concentration,
        not_estimable: Vec::new(),
        api_calls: Some(sampler.api_calls()),
        setup_calls: Some(sampler.setup_calls()),
        preprocess_secs,
        sample_secs,
    })
}

/// Runs `method` for `n` samples with a generator seeded from `seed`.
/// The walk-based method uses `rule`; the others ignore it.
pub fn run_baseline(
    g: &Graph,
    method: BaselineMethod,
    n: u64,
    seed: u64,
    rule: AcceptanceRule,
) -> Result<BaselineReport> {
    let mut rng = <crate::Rng64 as rand::SeedableRng>::seed_from_u64(seed);
    match method {
        BaselineMethod::Wedge => wedge_sampling(g, n, &mut rng),
        BaselineMethod::Path3 => path3_sampling(g, n, &mut rng),
        BaselineMethod::MhrwWedge => mhrw_wedge_sampling(g, n, rng, rule),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::load_edge_list;
    use crate::oracle::exact_enumerate;
    use crate::Rng64;
    use rand::SeedableRng;

    fn fig1() -> Graph {
        load_edge_list("1 2\n1 3\n1 4\n2 3\n3 4".as_bytes()).unwrap()
    }

    fn rng(seed: u64) -> Rng64 {
        Rng64::seed_from_u64(seed)
    }

    #[test]
    fn wedge_trivial_graphs() {
        let r = wedge_sampling(&generate::complete(3), 100, &mut rng(1)).unwrap();
        assert_eq!(r.counts.unwrap(), vec![Some(0.0), Some(1.0)]);
        let r = wedge_sampling(&generate::star(4), 100, &mut rng(1)).unwrap();
        assert_eq!(r.counts.unwrap(), vec![Some(6.0), Some(0.0)]);
        assert_eq!(wedge_total(&fig1()), 8);
        assert!(wedge_sampling(&generate::path(2), 10, &mut rng(1)).is_err());
    }

    #[test]
    fn wedge_converges_on_fig1() {
        let r = wedge_sampling(&fig1(), 400_000, &mut rng(5)).unwrap();
        let counts = r.counts.unwrap();
        assert!((counts[1].unwrap() - 2.0).abs() < 0.03);
        assert!((counts[0].unwrap() - 2.0).abs() < 0.06);
    }

    /// Expected value of the 3-path estimator, by summing over every
    /// (edge, u', v') draw with its probability.
    fn path3_expectation(g: &Graph) -> Vec<f64> {
        let s: f64 = g
            .edges()
            .map(|(u, v)| ((g.degree(u) - 1) * (g.degree(v) - 1)) as f64)
            .sum();
        let mut e = vec![0.0; 6];
        for (u, v) in g.edges() {
            for &a in g.neighbors(u).iter().filter(|&&a| a != v) {
                for &b in g.neighbors(v).iter().filter(|&&b| b != u) {
                    if a == b {
                        continue;
                    }
                    let nodes = [a, u, v, b];
                    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
                    let class = match catalog::classify(4, &nodes, &edges).unwrap() {
                        catalog::Classification::Class(c) => c,
                        _ => unreachable!(),
                    };
                    // draw probability 1/s; weight s / beta
                    e[class - 1] += 1.0 / PATH3_BETA[class - 1] as f64;
                }
            }
        }
        assert!(s > 0.0);
        e
    }

    #[test]
    fn path3_expectation_is_exact() {
        let graphs = [
            generate::complete(4),
            generate::diamond(),
            fig1(),
            generate::petersen(),
            generate::erdos_renyi(14, 0.3, 2),
            generate::barabasi_albert(15, 2, 3),
        ];
        for g in &graphs {
            let truth = exact_enumerate(g, 4).unwrap();
            let e = path3_expectation(g);
            for i in 0..6 {
                if i == 1 {
                    assert_eq!(e[i], 0.0);
                    continue;
                }
                assert!(
                    (e[i] - truth.counts[i] as f64).abs() < 1e-9,
                    "class {}",
                    i + 1
                );
            }
        }
    }

    #[test]
    fn path3_on_a_path() {
        let r = path3_sampling(&generate::path(4), 50, &mut rng(2)).unwrap();
        assert_eq!(r.counts.as_ref().unwrap()[0], Some(1.0));
        assert_eq!(r.kept, 50);
        assert!(path3_sampling(&generate::star(5), 10, &mut rng(2)).is_err());
    }

    #[test]
    fn path3_uniform_on_p5() {
        // P5 holds the two 3-paths 0-1-2-3 and 1-2-3-4, equally weighted
        let g = generate::path(5);
        let sampler = Path3Sampler::new(&g).unwrap();
        assert_eq!(sampler.total_weight(), 2);
        let mut r = rng(7);
        let n = 20_000u64;
        let mut first = 0u64;
        for _ in 0..n {
            let mut p = sampler.draw(&mut r).unwrap();
            p.sort_unstable();
            match p {
                [0, 1, 2, 3] => first += 1,
                [1, 2, 3, 4] => {}
                other => panic!("unexpected path {other:?}"),
            }
        }
        let expected = n as f64 / 2.0;
        let chi2 = 2.0 * (first as f64 - expected).powi(2) / expected;
        assert!(chi2 < 10.83, "{chi2}");
        let report = path3_sampling(&g, 100, &mut r).unwrap();
        assert_eq!(report.counts.unwrap()[0], Some(2.0));
    }

    #[test]
    fn path3_k4_mean() {
        let r = path3_sampling(&generate::complete(4), 200_000, &mut rng(4)).unwrap();
        let c = r.counts.unwrap();
        assert!((c[5].unwrap() - 1.0).abs() < 0.01);
        assert_eq!(r.concentration[5], Some(1.0));
        assert_eq!(r.concentration[1], None);
    }

    #[test]
    fn mhrw_trivial_graphs() {
        let r = mhrw_wedge_sampling(
            &generate::complete(3),
            100,
            rng(1),
            AcceptanceRule::default(),
        )
        .unwrap();
        assert_eq!(r.concentration, vec![Some(0.0), Some(1.0)]);
        let r = mhrw_wedge_sampling(&generate::star(4), 100, rng(1), AcceptanceRule::default())
            .unwrap();
        assert_eq!(r.concentration, vec![Some(1.0), Some(0.0)]);
    }

    #[test]
    fn mhrw_uses_three_calls_per_step() {
        let g = generate::barabasi_albert(100, 3, 1);
        for n in [1, 10, 1000] {
            let r = mhrw_wedge_sampling(&g, n, rng(n), AcceptanceRule::default()).unwrap();
            assert_eq!(r.api_calls, Some(3 * n));
        }
    }

    fn transition_preserves(g: &Graph, rule: AcceptanceRule) -> bool {
        let n = g.node_count();
        let target: Vec<f64> = (0..n as NodeId)
            .map(|v| {
                let d = g.degree(v) as f64;
                if d >= 2.0 {
                    d * (d - 1.0) / 2.0
                } else {
                    0.0
                }
            })
            .collect();
        let mut next = vec![0.0; n];
        for v in (0..n as NodeId).filter(|&v| g.degree(v) >= 2) {
            let dv = g.degree(v);
            let mut stay = 1.0;
            for &w in g.neighbors(v) {
                let dw = g.degree(w);
                let p = if dw >= 2 {
                    rule.probability(dv, dw) / dv as f64
                } else {
                    0.0
                };
                next[w as usize] += target[v as usize] * p;
                stay -= p;
            }
            next[v as usize] += target[v as usize] * stay;
        }
        next.iter().zip(&target).all(|(a, b)| (a - b).abs() < 1e-9)
    }

    #[test]
    fn acceptance_rules_and_target_law() {
        for g in [
            fig1(),
            generate::barabasi_albert(20, 2, 8),
            generate::erdos_renyi(20, 0.3, 1),
        ] {
            assert!(transition_preserves(&g, AcceptanceRule::DegreeMinusOne));
        }
        assert!(!transition_preserves(
            &generate::barabasi_albert(20, 2, 8),
            AcceptanceRule::WedgeCountRatio
        ));
    }

    #[test]
    fn mhrw_visits_follow_wedge_counts_on_fig1() {
        let g = fig1();
        let mut s =
            MhrwWedgeSampler::new(&g, rng(3), AcceptanceRule::DegreeMinusOne, None).unwrap();
        let mut visits = [0u64; 4];
        let n = 1_000_000;
        for _ in 0..n {
            visits[s.step() as usize] += 1;
        }
        let target = [3.0 / 8.0, 1.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0];
        let l1: f64 = visits
            .iter()
            .zip(target)
            .map(|(&c, t)| (c as f64 / n as f64 - t).abs())
            .sum();
        assert!(l1 < 0.02, "{l1}");
    }

    #[test]
    fn mhrw_start_checks() {
        let g = generate::star(3);
        assert!(MhrwWedgeSampler::new(&g, rng(1), AcceptanceRule::default(), Some(1)).is_err());
        assert!(MhrwWedgeSampler::new(&g, rng(1), AcceptanceRule::default(), Some(9)).is_err());
        assert!(MhrwWedgeSampler::new(&g, rng(1), AcceptanceRule::default(), Some(0)).is_ok());
    }
}
