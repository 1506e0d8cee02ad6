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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("network exponent n = {0} is out of range (need 2 <= n <= {max})", max = crate::topology::MAX_EXPONENT)]
    InvalidSize(u32),

    #[error("vertex {vertex} is out of range for a network of {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },

    #[error("vertex 0 has no hierarchy decomposition")]
    NoDecomposition,

    #[error("epsilon = {0} is outside [0, 3]")]
    EpsilonOutOfRange(f64),

    #[error("no marked vertex configured")]
    MissingMark,

    #[error("state dimension {found} does not match operator dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid peak detector settings: {0}")]
    InvalidDetector(String),

    #[error("trace too short for peak detection ({0} samples, need at least 3)")]
    TraceTooShort(usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("dense oracle refused n = {0} (limit n <= {max})", max = crate::oracle::MAX_DENSE_EXPONENT)]
    OracleTooLarge(u32),

    #[error("topology check '{property}' failed at index {index}")]
    Topology { property: &'static str, index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
