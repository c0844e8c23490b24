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

//! Concentration and count estimators over walk windows.
//!
//! Every valid window of class `i` adds `1 / (alpha_i * pi_tilde)` (base)
//! or `1 / p_tilde` (corresponding state sampling, CSS) to accumulator `i`,
//! where `pi_tilde` is the window's stationary probability scaled by
//! `2 |R(d)|` and `p_tilde` the sum of `pi_tilde` over every window that
//! spans the same subgraph. Concentrations normalize the accumulators, so
//! the unknown scale cancels; counts need `|R(d)|`.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::access::{CountingAccess, NeighborAccess};
use crate::catalog::{
    self, alpha_table, corresponding_tuples, mask_connected, pair_count, AlphaTable, MAX_K,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::walk::{
    check_dimensions, state_degree, SubgraphState, WalkConfig, WalkMode, WalkWindow, Walker,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Base,
    Css,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Base => "base",
            Method::Css => "css",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Method::Base),
            "css" => Ok(Method::Css),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub k: usize,
    pub d: usize,
    /// Walk steps after the window first fills; each step yields one window.
    pub steps: u64,
    pub method: Method,
    pub walk: WalkMode,
    pub seed: u64,
    pub burn_in: u64,
    pub start: Option<NodeId>,
}

impl EstimatorConfig {
    pub fn new(k: usize, d: usize, steps: u64) -> Self {
        EstimatorConfig {
            k,
            d,
            steps,
            method: Method::Base,
            walk: WalkMode::Simple,
            seed: 0,
            burn_in: 0,
            start: None,
        }
    }

    pub fn method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn walk(mut self, walk: WalkMode) -> Self {
        self.walk = walk;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn l(&self) -> usize {
        self.k - self.d + 1
    }

    pub fn validate(&self) -> Result<()> {
        check_dimensions(self.k, self.d)?;
        if self.steps == 0 {
            return Err(Error::Config("steps must be positive".into()));
        }
        if alpha_table(self.k, self.d)?.alpha.iter().all(|&a| a == 0) {
            return Err(Error::NotEstimable {
                k: self.k,
                d: self.d,
            });
        }
        Ok(())
    }

    fn walk_config(&self) -> WalkConfig {
        WalkConfig {
            k: self.k,
            d: self.d,
            mode: self.walk,
            seed: self.seed,
            start: self.start,
            burn_in: self.burn_in,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub graph: Option<String>,
    pub k: usize,
    pub d: usize,
    pub method: Method,
    pub walk: WalkMode,
    pub steps: u64,
    pub seed: u64,
    pub burn_in: u64,
    pub valid_windows: u64,
    /// Neighbor-list requests issued by this chain, including start-up.
    pub api_calls: u64,
    /// Weighted sums per class, with unit-scaled stationary weights.
    pub accumulators: Vec<f64>,
    /// `null` for classes that cannot be estimated and for every class of a
    /// degenerate run.
    pub concentration: Vec<Option<f64>>,
    pub counts: Option<Vec<Option<f64>>>,
    /// 1-based indices of classes with a zero coefficient.
    pub not_estimable: Vec<usize>,
    /// No valid window was seen.
    pub degenerate: bool,
    pub notes: Vec<String>,
}

impl EstimateReport {
    /// Concentrations with missing entries as zero.
    pub fn concentration_values(&self) -> Vec<f64> {
        self.concentration
            .iter()
            .map(|c| c.unwrap_or(0.0))
            .collect()
    }

    pub fn with_counts(mut self, r_d: u64) -> Result<Self> {
        self.counts = Some(estimate_counts(&self, r_d)?);
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per class.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let alpha = alpha_table(self.k, self.d)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "class",
            "alpha",
            "accumulator",
            "concentration",
            "count",
            "estimable",
        ])
        .map_err(csv_error)?;
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for i in 0..self.accumulators.len() {
            let count = self.counts.as_ref().and_then(|c| c[i]);
            w.write_record([
                (i + 1).to_string(),
                alpha.alpha[i].to_string(),
                format!("{:e}", self.accumulators[i]),
                fmt(self.concentration[i]),
                fmt(count),
                (!self.not_estimable.contains(&(i + 1))).to_string(),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidInput(format!("csv: {other:?}")),
    }
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

const MAX_INTERIOR: usize = MAX_K - 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct CssTerm {
    multiplicity: u32,
    interior: [u8; MAX_INTERIOR],
    len: u8,
}

/// Corresponding-state tuples of every labeled `k`-position subgraph,
/// grouped by the multiset of interior states, whose degrees are all the
/// stationary weight depends on.
pub struct CssTemplates {
    k: usize,
    d: usize,
    terms: Vec<Vec<CssTerm>>,
}

impl CssTemplates {
    fn build(k: usize, d: usize) -> Self {
        let l = k - d + 1;
        let terms = (0..1u32 << pair_count(k))
            .map(|mask| {
                let mask = mask as u16;
                if !mask_connected(mask, k) {
                    return Vec::new();
                }
                let mut grouped: BTreeMap<Vec<u8>, u32> = BTreeMap::new();
                for tuple in corresponding_tuples(mask, k, d) {
                    let mut interior = if l > 2 {
                        tuple[1..l - 1].to_vec()
                    } else {
                        Vec::new()
                    };
                    interior.sort_unstable();
                    *grouped.entry(interior).or_default() += 1;
                }
                grouped
                    .into_iter()
                    .map(|(interior, multiplicity)| {
                        let mut buf = [0; MAX_INTERIOR];
                        buf[..interior.len()].copy_from_slice(&interior);
                        CssTerm {
                            multiplicity,
                            interior: buf,
                            len: interior.len() as u8,
                        }
                    })
                    .collect()
            })
            .collect();
        CssTemplates { k, d, terms }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of grouped terms for a labeled mask.
    pub fn term_count(&self, mask: u16) -> usize {
        self.terms[mask as usize].len()
    }

    /// `p_tilde` for a labeled mask given the raw relationship-graph degree
    /// of any position subset.
    pub fn probability_with<F: FnMut(u8) -> u64>(
        &self,
        mask: u16,
        mode: WalkMode,
        mut degree: F,
    ) -> f64 {
        let mut cache = [0u64; 1 << MAX_K];
        let mut total = 0.0;
        for term in &self.terms[mask as usize] {
            let mut w = term.multiplicity as f64;
            for &s in &term.interior[..term.len as usize] {
                let slot = &mut cache[s as usize];
                if *slot == 0 {
                    *slot = mode.effective_degree(degree(s)).max(1);
                }
                w /= *slot as f64;
            }
            total += w;
        }
        total
    }
}

static CSS_TEMPLATES: [[OnceLock<CssTemplates>; MAX_K - 1]; MAX_K - 2] = [
    [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ],
    [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ],
    [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ],
];

pub fn css_templates(k: usize, d: usize) -> Result<&'static CssTemplates> {
    check_dimensions(k, d)?;
    Ok(CSS_TEMPLATES[k - 3][d - 1].get_or_init(|| CssTemplates::build(k, d)))
}

/// Raw relationship-graph degree of the window positions in `subset`.
fn subset_degree<A: NeighborAccess>(window: &WalkWindow, access: &A, subset: u8) -> u64 {
    let degrees = window.slot_degrees();
    let positions = (0..window.k()).filter(|&p| subset & (1 << p) != 0);
    match window.d() {
        1 => positions.map(|p| degrees[p] as u64).sum(),
        2 => positions.map(|p| degrees[p] as u64).sum::<u64>() - 2,
        _ => {
            let nodes: Vec<NodeId> = positions.map(|p| window.slot_nodes()[p]).collect();
            state_degree(access, &SubgraphState::new(&nodes))
        }
    }
}

/// Sum of `pi_tilde` over every window spanning the same subgraph as the
/// given valid window. For `l <= 2` this equals `alpha * pi_tilde`.
pub fn css_probability<A: NeighborAccess>(window: &WalkWindow, access: &A, mode: WalkMode) -> f64 {
    assert!(window.is_valid(), "css weight needs a valid window");
    if window.l() == 1 {
        return window.pi_tilde(mode);
    }
    let templates =
        css_templates(window.k(), window.d()).expect("window dimensions are admissible");
    templates.probability_with(window.labeled_mask(), mode, |s| {
        subset_degree(window, access, s)
    })
}

/// Runs one chain and returns its report.
pub fn run_estimate<A: NeighborAccess>(
    cfg: &EstimatorConfig,
    access: &A,
) -> Result<EstimateReport> {
    run_scaled(cfg, access, 1.0)
}

pub(crate) fn run_scaled<A: NeighborAccess>(
    cfg: &EstimatorConfig,
    access: &A,
    weight_scale: f64,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let cat = catalog::catalog(cfg.k)?;
    let alpha = alpha_table(cfg.k, cfg.d)?;
    let mut notes = Vec::new();
    let css = cfg.method == Method::Css && cfg.l() > 2;
    if cfg.method == Method::Css && !css {
        notes.push("css weights equal base weights when l <= 2; base weights used".to_string());
    }
    let templates = if css {
        Some(css_templates(cfg.k, cfg.d)?)
    } else {
        None
    };

    let counted = CountingAccess::new(access);
    let mut walker = Walker::start(&counted, cfg.walk_config())?;
    let mut acc = vec![KahanSum::default(); cat.len()];
    let mut valid = 0u64;
    for _ in 0..cfg.steps {
        walker.step()?;
        let window = walker.window();
        if !window.is_valid() {
            continue;
        }
        valid += 1;
        let mask = window.labeled_mask();
        let class = cat
            .classify_mask(mask)
            .expect("valid windows are connected");
        let weight = match templates {
            Some(t) => t.probability_with(mask, cfg.walk, |s| subset_degree(window, &counted, s)),
            None => alpha.alpha[class - 1] as f64 * window.pi_tilde(cfg.walk),
        };
        acc[class - 1].add(1.0 / (weight * weight_scale));
    }
    let accumulators = acc.iter().map(KahanSum::value).collect();
    Ok(finish(
        cfg,
        accumulators,
        valid,
        counted.calls(),
        &alpha,
        notes,
    ))
}

fn finish(
    cfg: &EstimatorConfig,
    accumulators: Vec<f64>,
    valid_windows: u64,
    api_calls: u64,
    alpha: &AlphaTable,
    mut notes: Vec<String>,
) -> EstimateReport {
    let not_estimable = alpha.not_estimable();
    let estimable = |i: usize| alpha.alpha[i] > 0;
    let total: KahanSum = (0..accumulators.len())
        .filter(|&i| estimable(i))
        .map(|i| accumulators[i])
        .collect();
    let total = total.value();
    let degenerate = valid_windows == 0 || total <= 0.0;
    if degenerate {
        notes.push("no valid window observed; concentrations undefined".to_string());
    }
    let concentration = (0..accumulators.len())
        .map(|i| (!degenerate && estimable(i)).then(|| accumulators[i] / total))
        .collect();
    EstimateReport {
        graph: None,
        k: cfg.k,
        d: cfg.d,
        method: cfg.method,
        walk: cfg.walk,
        steps: cfg.steps,
        seed: cfg.seed,
        burn_in: cfg.burn_in,
        valid_windows,
        api_calls,
        accumulators,
        concentration,
        counts: None,
        not_estimable,
        degenerate,
        notes,
    }
}

/// Absolute counts `2 r_d / n * accumulator_i`, with `r_d` the number of
/// relationship-graph edges. `None` for classes that cannot be estimated.
pub fn estimate_counts(report: &EstimateReport, r_d: u64) -> Result<Vec<Option<f64>>> {
    if r_d == 0 {
        return Err(Error::InvalidInput(
            "relationship edge count must be positive".into(),
        ));
    }
    let scale = 2.0 * r_d as f64 / report.steps as f64;
    Ok(report
        .accumulators
        .iter()
        .enumerate()
        .map(|(i, &a)| (!report.not_estimable.contains(&(i + 1))).then_some(scale * a))
        .collect())
}

/// `|R(d)|` when it follows from node degrees: `|E|` for `d = 1` and
/// `sum over edges of (d_u + d_v - 2) / 2` for `d = 2`.
pub fn relationship_edge_count(graph: &Graph, d: usize) -> Option<u64> {
    match d {
        1 => Some(graph.edge_count() as u64),
        2 => Some(graph.r2_size()),
        _ => None,
    }
}

/// splitmix64 output mix; maps 0 to 0.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of chain `index`; chain 0 keeps the base seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ mix64(index)
}

/// Runs `chains` independent chains on the current rayon pool. Reports
/// come back in chain order.
pub fn run_parallel<A: NeighborAccess + Sync>(
    cfg: &EstimatorConfig,
    access: &A,
    chains: usize,
) -> Result<Vec<EstimateReport>> {
    if chains == 0 {
        return Err(Error::Config("chains must be at least 1".into()));
    }
    (0..chains as u64)
        .into_par_iter()
        .map(|i| {
            let cfg = EstimatorConfig {
                seed: derive_seed(cfg.seed, i),
                ..cfg.clone()
            };
            run_estimate(&cfg, access)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::load_edge_list;
    use crate::walk::SubgraphState;

    fn fig1() -> Graph {
        load_edge_list("1 2\n1 3\n1 4\n2 3\n3 4".as_bytes()).unwrap()
    }

    fn s(labels: &[NodeId]) -> SubgraphState {
        SubgraphState::new(&labels.iter().map(|l| l - 1).collect::<Vec<_>>())
    }

    #[test]
    fn kahan_beats_naive_sum() {
        let mut k = KahanSum::default();
        let mut naive = 0.0;
        for x in [1e16, 1.0, -1e16, 1.0] {
            k.add(x);
            naive += x;
        }
        assert_eq!(k.value(), 2.0);
        assert_ne!(naive, 2.0);
    }

    #[test]
    fn css_examples_on_fig1() {
        let g = fig1();
        let tri = WalkWindow::from_states(&g, 3, 1, &[s(&[1]), s(&[2]), s(&[3])]).unwrap();
        let p = css_probability(&tri, &g, WalkMode::Simple);
        assert!((p - 7.0 / 3.0).abs() < 1e-12);
        let wedge = WalkWindow::from_states(&g, 3, 1, &[s(&[4]), s(&[1]), s(&[2])]).unwrap();
        assert!((css_probability(&wedge, &g, WalkMode::Simple) - 2.0 / 3.0).abs() < 1e-12);
        // l = 2: alpha * 1
        let w = WalkWindow::from_states(&g, 3, 2, &[s(&[1, 2]), s(&[2, 3])]).unwrap();
        assert_eq!(css_probability(&w, &g, WalkMode::Simple), 6.0);
    }

    #[test]
    fn css_equals_alpha_weight_on_regular_graphs() {
        // on a regular graph every corresponding state has the same weight
        let g = generate::petersen();
        for (k, d) in [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)] {
            let cfg = WalkConfig {
                k,
                d,
                mode: WalkMode::Simple,
                seed: 9,
                start: None,
                burn_in: 0,
            };
            let mut walker = Walker::start(&g, cfg).unwrap();
            let alpha = alpha_table(k, d).unwrap();
            let cat = catalog::catalog(k).unwrap();
            for _ in 0..300 {
                walker.step().unwrap();
                let w = walker.window();
                if !w.is_valid() {
                    continue;
                }
                let class = cat.classify_mask(w.labeled_mask()).unwrap();
                let base = alpha.alpha[class - 1] as f64 * w.pi_tilde(WalkMode::Simple);
                let css = css_probability(w, &g, WalkMode::Simple);
                assert!((base - css).abs() <= 1e-12 * base, "k={k} d={d}");
            }
        }
    }

    #[test]
    fn config_validation() {
        let g = fig1();
        assert!(run_estimate(&EstimatorConfig::new(3, 0, 10), &g).is_err());
        assert!(run_estimate(&EstimatorConfig::new(3, 3, 10), &g).is_err());
        assert!(run_estimate(&EstimatorConfig::new(3, 1, 0), &g).is_err());
        assert!(matches!(
            run_estimate(&EstimatorConfig::new(6, 1, 10), &g),
            Err(Error::UnsupportedK(6))
        ));
    }

    #[test]
    fn diamond_only_graphlet_is_class_five() {
        let g = fig1();
        for method in [Method::Base, Method::Css] {
            let r =
                run_estimate(&EstimatorConfig::new(4, 2, 500).method(method).seed(3), &g).unwrap();
            assert!(r.valid_windows > 0);
            assert_eq!(r.concentration[4], Some(1.0));
        }
    }

    #[test]
    fn clique_has_only_triangles() {
        let g = generate::complete(5);
        for d in [1, 2] {
            let r = run_estimate(&EstimatorConfig::new(3, d, 300).seed(1), &g).unwrap();
            assert_eq!(r.concentration, vec![Some(0.0), Some(1.0)]);
        }
    }

    #[test]
    fn not_estimable_classes_are_flagged() {
        let g = generate::complete(5);
        let r = run_estimate(&EstimatorConfig::new(4, 1, 200), &g).unwrap();
        assert_eq!(r.not_estimable, vec![2]);
        assert_eq!(r.concentration[1], None);
        let sum: f64 = r.concentration.iter().flatten().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_runs_are_flagged() {
        let cfg = EstimatorConfig::new(3, 1, 10);
        let alpha = alpha_table(3, 1).unwrap();
        let r = finish(&cfg, vec![0.0, 0.0], 0, 0, &alpha, Vec::new());
        assert!(r.degenerate);
        assert!(r.concentration.iter().all(Option::is_none));
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn scale_cancels_in_concentrations() {
        let g = generate::barabasi_albert(60, 2, 4);
        let cfg = EstimatorConfig::new(4, 2, 2000)
            .seed(8)
            .method(Method::Base);
        let a = run_scaled(&cfg, &g, 1.0).unwrap();
        let b = run_scaled(&cfg, &g, 7.0).unwrap();
        for (x, y) in a.concentration.iter().zip(&b.concentration) {
            let (x, y) = (x.unwrap(), y.unwrap());
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
        }
    }

    #[test]
    fn counts_scale_by_relationship_edges() {
        let g = generate::complete(4);
        let r = run_estimate(&EstimatorConfig::new(4, 2, 100_000).seed(2), &g)
            .unwrap()
            .with_counts(12)
            .unwrap();
        // each valid window adds 4 / 48, so the count is 2 * valid / steps
        let counts = r.counts.as_ref().unwrap();
        let expected = 2.0 * r.valid_windows as f64 / r.steps as f64;
        assert!((counts[5].unwrap() - expected).abs() < 1e-9);
        assert!((counts[5].unwrap() - 1.0).abs() < 0.02);
        assert!(estimate_counts(&r_dummy(), 0).is_err());
    }

    fn r_dummy() -> EstimateReport {
        run_estimate(&EstimatorConfig::new(3, 1, 5), &fig1()).unwrap()
    }

    #[test]
    fn seeds_and_parallel_chains() {
        assert_eq!(mix64(0), 0);
        assert_eq!(derive_seed(42, 0), 42);
        assert_ne!(derive_seed(42, 1), derive_seed(42, 2));
        let g = fig1();
        let cfg = EstimatorConfig::new(3, 1, 1000).seed(42);
        let one = run_parallel(&cfg, &g, 1).unwrap();
        assert_eq!(one[0], run_estimate(&cfg, &g).unwrap());
        let a = run_parallel(&cfg, &g, 2).unwrap();
        let b = run_parallel(&cfg, &g, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].accumulators, a[1].accumulators);
        assert!(run_parallel(&cfg, &g, 0).is_err());
    }

    #[test]
    fn json_and_csv_shapes() {
        let r = r_dummy();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        for key in [
            "graph",
            "k",
            "d",
            "method",
            "walk",
            "steps",
            "seed",
            "valid_windows",
            "api_calls",
            "concentration",
            "counts",
            "not_estimable",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["method"], "base");
        assert_eq!(v["walk"], "srw");
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("class,alpha,accumulator,concentration,count,estimable"));
    }

    #[test]
    fn api_calls_are_counted() {
        let g = fig1();
        let r = run_estimate(&EstimatorConfig::new(3, 2, 100), &g).unwrap();
        assert!(r.api_calls >= 200);
    }
}
