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

//! Accuracy benchmarks: repeated independent runs per (method, budget)
//! cell, scored by NRMSE against ground truth.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_baseline, AcceptanceRule, BaselineMethod, PATH3_BETA};
use crate::catalog::{alpha_table, catalog};
use crate::error::{Error, Result};
use crate::estimate::{csv_error, derive_seed, run_estimate, EstimatorConfig, Method};
use crate::graph::Graph;
use crate::oracle::exact_enumerate;
use crate::walk::WalkMode;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "GRAPHLET_THREADS";

/// `sqrt(mean((x - truth)^2)) / truth`.
pub fn nrmse(estimates: &[f64], truth: f64) -> Result<f64> {
    if truth <= 0.0 || !truth.is_finite() {
        return Err(Error::InvalidInput(format!(
            "truth must be positive, got {truth}"
        )));
    }
    if estimates.len() < 2 {
        return Err(Error::InvalidInput("need at least two estimates".into()));
    }
    let mse = estimates.iter().map(|x| (x - truth).powi(2)).sum::<f64>() / estimates.len() as f64;
    Ok(mse.sqrt() / truth)
}

/// Cosine similarity of two concentration vectors.
pub fn similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    Ok(dot / (na * nb))
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            r[t] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation, with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (rx, ry) = (ranks(xs), ranks(ys));
    let (mx, _) = mean_and_se(&rx);
    let (my, _) = mean_and_se(&ry);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchMethod {
    Walk {
        d: usize,
        method: Method,
        walk: WalkMode,
    },
    Baseline(BaselineMethod),
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchMethod::Walk { d, method, walk } => {
                write!(f, "d{d}-{}-{}", method.as_str(), walk.as_str())
            }
            BenchMethod::Baseline(b) => f.write_str(b.as_str()),
        }
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    /// `d<d>-<base|css>-<srw|nb>` or a baseline name.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(b) = s.parse::<BaselineMethod>() {
            return Ok(BenchMethod::Baseline(b));
        }
        let bad = || {
            Error::Config(format!(
                "bad method '{s}', expected e.g. d2-css-nb or wedge"
            ))
        };
        let mut parts = s.split('-');
        let d = parts
            .next()
            .and_then(|p| p.strip_prefix('d'))
            .and_then(|p| p.parse().ok())
            .ok_or_else(bad)?;
        let method = parts.next().ok_or_else(bad)?.parse()?;
        let walk = parts.next().ok_or_else(bad)?.parse()?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(BenchMethod::Walk { d, method, walk })
    }
}

impl Serialize for BenchMethod {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BenchMethod {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl BenchMethod {
    /// Whether the method only uses neighbor queries.
    pub fn restricted(&self) -> bool {
        match self {
            BenchMethod::Walk { .. } => true,
            BenchMethod::Baseline(b) => !b.full_access(),
        }
    }

    /// Per-class flag: can the method estimate class `i`.
    pub fn estimable(&self, k: usize) -> Result<Vec<bool>> {
        match self {
            BenchMethod::Walk { d, .. } => {
                Ok(alpha_table(k, *d)?.alpha.iter().map(|&a| a > 0).collect())
            }
            BenchMethod::Baseline(b) => {
                if b.k() != k {
                    return Err(Error::Config(format!(
                        "{} estimates {}-node graphlets, not {k}",
                        b.as_str(),
                        b.k()
                    )));
                }
                Ok(match b {
                    BaselineMethod::Path3 => PATH3_BETA.iter().map(|&x| x > 0).collect(),
                    _ => vec![true; 2],
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthSource {
    Exact,
    File(PathBuf),
}

/// Ground-truth concentrations, as written by the `exact` command or by
/// hand (`{"k": 3, "concentration": [..]}`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    pub k: usize,
    pub concentration: Vec<f64>,
}

impl Truth {
    pub fn exact(g: &Graph, k: usize) -> Result<Self> {
        Ok(Truth {
            k,
            concentration: exact_enumerate(g, k)?.concentration(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let truth: Truth = serde_json::from_str(text)?;
        let classes = catalog(truth.k)?.len();
        if truth.concentration.len() != classes {
            return Err(Error::InvalidInput(format!(
                "truth has {} entries, {}-node graphlets have {classes} classes",
                truth.concentration.len(),
                truth.k
            )));
        }
        Ok(truth)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn resolve(source: &TruthSource, g: &Graph, k: usize) -> Result<Self> {
        let truth = match source {
            TruthSource::Exact => Self::exact(g, k)?,
            TruthSource::File(p) => Self::load(p)?,
        };
        if truth.k != k {
            return Err(Error::InvalidInput(format!(
                "truth is for k = {}, bench uses k = {k}",
                truth.k
            )));
        }
        Ok(truth)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub k: usize,
    pub methods: Vec<BenchMethod>,
    /// Budgets, strictly increasing. Walk steps or baseline samples.
    pub steps: Vec<u64>,
    pub runs: usize,
    pub seed: u64,
    pub truth: TruthSource,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 2 {
            return Err(Error::Config("runs must be at least 2".into()));
        }
        if self.steps.is_empty()
            || self.steps[0] == 0
            || self.steps.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Config(
                "steps grid must be positive and strictly increasing".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods given".into()));
        }
        for m in &self.methods {
            if let BenchMethod::Walk { d, .. } = m {
                EstimatorConfig::new(self.k, *d, 1).validate()?;
            }
            m.estimable(self.k)?;
        }
        Ok(())
    }
}

/// Parses `a:b:step` or a comma-separated list.
pub fn parse_steps(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("bad steps grid '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<u64> = parts
            .iter()
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if v[2] == 0 || v[0] > v[1] {
            return Err(bad());
        }
        return Ok((v[0]..=v[1]).step_by(v[2] as usize).collect());
    }
    text.split(',')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect()
}

pub fn worker_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn worker_pool() -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(worker_threads())
        .build()
        .map_err(|e| Error::Config(e.to_string()))
}

struct Outcome {
    concentration: Vec<Option<f64>>,
    api_calls: Option<u64>,
    degenerate: bool,
    secs: f64,
}

fn run_job(g: &Graph, k: usize, method: BenchMethod, steps: u64, seed: u64) -> Result<Outcome> {
    let t = Instant::now();
    let (concentration, api_calls, degenerate) = match method {
        BenchMethod::Walk { d, method, walk } => {
            let cfg = EstimatorConfig::new(k, d, steps)
                .method(method)
                .walk(walk)
                .seed(seed);
            let r = run_estimate(&cfg, g)?;
            (r.concentration, Some(r.api_calls), r.degenerate)
        }
        BenchMethod::Baseline(b) => {
            let r = run_baseline(g, b, steps, seed, AcceptanceRule::default())?;
            let degenerate = r.concentration.iter().all(Option::is_none);
            (r.concentration, r.api_calls, degenerate)
        }
    };
    Ok(Outcome {
        concentration,
        api_calls,
        degenerate,
        secs: t.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: BenchMethod,
    pub access: String,
    pub steps: u64,
    pub runs: usize,
    pub class: usize,
    /// Truth renormalized over the classes the method can estimate.
    pub truth: Option<f64>,
    pub mean: Option<f64>,
    pub se: Option<f64>,
    pub nrmse: Option<f64>,
    pub api_calls: Option<f64>,
    pub degenerate_runs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub method: BenchMethod,
    pub steps: u64,
    pub runs: usize,
    pub wall_secs: f64,
    pub secs_per_run: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub timings: Vec<TimingRow>,
}

/// Runs every (method, budget, run) job on the worker pool. Run `r` of
/// every cell uses seed `derive_seed(spec.seed, r)`, so methods are
/// compared on paired seeds; results are reduced in (cell, run) order.
pub fn run_bench(g: &Graph, spec: &BenchSpec, truth: &Truth) -> Result<BenchResult> {
    spec.validate()?;
    if truth.k != spec.k {
        return Err(Error::InvalidInput("truth and bench disagree on k".into()));
    }
    let cells: Vec<(BenchMethod, u64)> = spec
        .methods
        .iter()
        .flat_map(|&m| spec.steps.iter().map(move |&s| (m, s)))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.runs).map(move |r| (c, r)))
        .collect();
    let pool = worker_pool()?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, r)| {
                let (m, s) = cells[c];
                run_job(g, spec.k, m, s, derive_seed(spec.seed, r as u64))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::new();
    let mut timings = Vec::new();
    for (c, &(method, steps)) in cells.iter().enumerate() {
        let runs = &outcomes[c * spec.runs..(c + 1) * spec.runs];
        let estimable = method.estimable(spec.k)?;
        let mass: f64 = truth
            .concentration
            .iter()
            .zip(&estimable)
            .filter(|(_, e)| **e)
            .map(|(t, _)| t)
            .sum();
        let calls: Vec<f64> = runs
            .iter()
            .filter_map(|o| o.api_calls.map(|x| x as f64))
            .collect();
        let api_calls = (!calls.is_empty()).then(|| mean_and_se(&calls).0);
        let degenerate_runs = runs.iter().filter(|o| o.degenerate).count();
        for (i, &ok) in estimable.iter().enumerate() {
            let mut row = BenchRow {
                method,
                access: if method.restricted() {
                    "restricted"
                } else {
                    "full"
                }
                .to_string(),
                steps,
                runs: spec.runs,
                class: i + 1,
                truth: None,
                mean: None,
                se: None,
                nrmse: None,
                api_calls,
                degenerate_runs,
            };
            if ok {
                let t = if mass > 0.0 {
                    truth.concentration[i] / mass
                } else {
                    0.0
                };
                let xs: Vec<f64> = runs
                    .iter()
                    .map(|o| o.concentration[i].unwrap_or(0.0))
                    .collect();
                let (mean, se) = mean_and_se(&xs);
                row.truth = Some(t);
                row.mean = Some(mean);
                row.se = Some(se);
                row.nrmse = nrmse(&xs, t).ok();
            }
            rows.push(row);
        }
        let wall: f64 = runs.iter().map(|o| o.secs).sum();
        timings.push(TimingRow {
            method,
            steps,
            runs: spec.runs,
            wall_secs: wall,
            secs_per_run: wall / spec.runs as f64,
        });
    }
    Ok(BenchResult { rows, timings })
}

fn write_serialized<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

impl BenchResult {
    /// One row per (method, budget, class). Deterministic for a fixed spec.
    pub fn write_results_csv<W: Write>(&self, out: W) -> Result<()> {
        write_serialized(out, &self.rows)
    }

    pub fn write_timings_csv<W: Write>(&self, out: W) -> Result<()> {
        write_serialized(out, &self.timings)
    }

    /// Wide NRMSE table: `class,steps` then one column per method.
    pub fn write_plot_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut methods: Vec<BenchMethod> = Vec::new();
        let mut keys: Vec<(usize, u64)> = Vec::new();
        for r in &self.rows {
            if !methods.contains(&r.method) {
                methods.push(r.method);
            }
            if !keys.contains(&(r.class, r.steps)) {
                keys.push((r.class, r.steps));
            }
        }
        keys.sort_unstable();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["class".to_string(), "steps".to_string()];
        header.extend(methods.iter().map(|m| m.to_string()));
        w.write_record(&header).map_err(csv_error)?;
        for (class, steps) in keys {
            let mut rec = vec![class.to_string(), steps.to_string()];
            for m in &methods {
                let v = self
                    .rows
                    .iter()
                    .find(|r| r.method == *m && r.class == class && r.steps == steps)
                    .and_then(|r| r.nrmse);
                rec.push(v.map(|x| x.to_string()).unwrap_or_default());
            }
            w.write_record(&rec).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `results.csv`, `timings.csv` and `plot.csv` into `dir`.
    pub fn write_all(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.write_results_csv(std::fs::File::create(dir.join("results.csv"))?)?;
        self.write_timings_csv(std::fs::File::create(dir.join("timings.csv"))?)?;
        self.write_plot_csv(std::fs::File::create(dir.join("plot.csv"))?)?;
        Ok(())
    }
}
