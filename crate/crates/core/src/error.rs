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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node {node} out of range for a graph with {count} nodes")]
    NodeOutOfRange { node: u64, count: usize },

    #[error("unsupported graphlet size k={0}, expected 3, 4 or 5")]
    UnsupportedK(usize),

    #[error("invalid walk dimension d={d} for graphlet size k={k}")]
    InvalidDimension { k: usize, d: usize },

    #[error("graph has {nodes} nodes, fewer than k={k}")]
    GraphTooSmall { nodes: usize, k: usize },

    #[error("no graphlet class is estimable with k={k}, d={d}")]
    NotEstimable { k: usize, d: usize },

    #[error("state has no neighbors in the relationship graph")]
    IsolatedState,

    #[error("relationship graph would exceed {limit} states")]
    TooLarge { limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
