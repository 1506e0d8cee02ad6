// Copyright 2026 The hanoi-walk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Coined discrete-time quantum-walk search on the degree-3 Hanoi network.
//!
//! The network is a cycle of `N = 2^n` vertices with one extra long-range
//! edge per vertex. Every vertex label `k > 0` factors as `k = 2^k1 (2 k2 + 1)`;
//! vertices at the same level `k1` with consecutive `k2` are linked pairwise,
//! and vertex 0 is linked to vertex `N/2`.
//!
//! The walker lives in the 3N-dimensional coin ⊗ position space. One step
//! applies the coin at every vertex (a sign flip at the marked vertex) and then
//! moves along the edge selected by the coin value. The coin is the reflection
//! about a biased coin state controlled by `epsilon ∈ [0, 3]`; `epsilon = 1`
//! gives the Grover coin.
//!
//! Modules, bottom up:
//!
//! - [`topology`]: vertex decomposition, small-world partners, shift table.
//! - [`coin`]: coin matrices and the initial state.
//! - [`engine`]: state vector and the sparse step operator.
//! - [`search`]: probability traces, first-peak detection and cost.
//! - [`sweep`]: parameter sweeps and scaling fits.
//! - [`oracle`]: dense-matrix reference used to cross-check the engine.
//! - [`io`]: CSV and JSON persistence.

pub mod coin;
pub mod engine;
pub mod error;
pub mod io;
pub mod oracle;
pub mod search;
pub mod sweep;
pub mod topology;

pub use coin::{chi_state, epsilon_coin, grover_coin, initial_state, ChiState, CoinMatrix, CoinSpec, DEGREE};
pub use engine::{StepOperator, WalkerState};
pub use error::{Error, Result};
pub use search::{
    compute_cost, detect_first_peak, run_search, CostModel, Peak, PeakDetectorConfig, ProbabilityTrace,
    SearchOutcome, SearchResult,
};
pub use sweep::{
    find_optimal_epsilon, fit_cost_exponent, fit_success_decay, sweep_epsilon, sweep_size, FitResult,
    OptimalEpsilon, SweepRecord,
};
pub use topology::{NetworkSize, ShiftPermutation, VertexCoords};
