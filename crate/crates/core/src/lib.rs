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

//! Graphlet concentration and count estimation by random walks on subgraph
//! relationship graphs.
//!
//! The walk runs over connected `d`-node subgraphs of an input graph, using
//! only neighbor queries. Every `l = k - d + 1` consecutive states span a
//! candidate `k`-node graphlet, which is reweighted by its stationary
//! probability to give unbiased concentration and count estimates.

pub mod access;
pub mod baselines;
pub mod bench;
pub mod catalog;
pub mod error;
pub mod estimate;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod walk;

/// Random generator used everywhere a seed is accepted.
pub type Rng64 = rand_pcg::Pcg64Mcg;

pub use access::{AccessStats, CountingAccess, NeighborAccess, NeighborOracle, OracleOptions};
pub use baselines::{AcceptanceRule, BaselineMethod, BaselineReport};
pub use bench::{BenchMethod, BenchResult, BenchSpec, Truth, TruthSource};
pub use catalog::{
    alpha_table, catalog, classify, AlphaTable, Catalog, Classification, GraphletClass,
};
pub use error::{Error, Result};
pub use estimate::{run_estimate, run_parallel, EstimateReport, EstimatorConfig, Method};
pub use graph::{load_edge_list, load_edge_list_path, Graph, NodeId};
pub use oracle::{exact_enumerate, ExactCounts};
pub use walk::{SubgraphState, WalkConfig, WalkMode, WalkWindow, Walker};
