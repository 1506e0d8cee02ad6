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

//! Hanoi network (degree 3) construction.
//!
//! Basis states of the walk are indexed by `a * N + k`, where `a ∈ {0, 1, 2}`
//! is the coin value and `k` the vertex. Coin 0 follows the small-world edge,
//! coin 1 moves to `k + 1` and becomes coin 2, coin 2 moves to `k - 1` and
//! becomes coin 1.

use std::fmt;

use crate::error::{Error, Result};

/// Largest accepted network exponent.
pub const MAX_EXPONENT: u32 = 24;

/// Number of vertices `N = 2^n`, with `2 <= n <= MAX_EXPONENT`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetworkSize {
    exponent: u32,
}

impl NetworkSize {
    pub fn new(exponent: u32) -> Result<Self> {
        if !(2..=MAX_EXPONENT).contains(&exponent) {
            return Err(Error::InvalidSize(exponent));
        }
        Ok(NetworkSize { exponent })
    }

    #[inline]
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    #[inline]
    pub fn vertices(&self) -> usize {
        1usize << self.exponent
    }

    /// Dimension of the coin ⊗ position space, `3N`.
    #[inline]
    pub fn dimension(&self) -> usize {
        3 * self.vertices()
    }

    /// The top-level vertex `2^(n-1)`, partner of vertex 0.
    #[inline]
    pub fn top_vertex(&self) -> usize {
        self.vertices() / 2
    }

    fn check_vertex(&self, k: usize) -> Result<()> {
        if k >= self.vertices() {
            Err(Error::VertexOutOfRange { vertex: k, vertices: self.vertices() })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for NetworkSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} (N={})", self.exponent, self.vertices())
    }
}

/// A nonzero vertex label with its hierarchy level `k1` and index `k2`
/// within that level, `k = 2^k1 (2 k2 + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexCoords {
    pub k: usize,
    pub k1: u32,
    pub k2: usize,
}

/// Splits `k` into level and in-level index. Vertex 0 has no decomposition.
pub fn decompose(k: usize, size: NetworkSize) -> Result<VertexCoords> {
    size.check_vertex(k)?;
    if k == 0 {
        return Err(Error::NoDecomposition);
    }
    let k1 = k.trailing_zeros();
    let k2 = (k >> k1) >> 1;
    Ok(VertexCoords { k, k1, k2 })
}

/// Inverse of [`decompose`].
pub fn compose(k1: u32, k2: usize, size: NetworkSize) -> Result<VertexCoords> {
    let k = (2 * k2 + 1)
        .checked_shl(k1)
        .filter(|&k| k1 < usize::BITS && k >> k1 == 2 * k2 + 1)
        .ok_or(Error::VertexOutOfRange { vertex: usize::MAX, vertices: size.vertices() })?;
    size.check_vertex(k)?;
    Ok(VertexCoords { k, k1, k2 })
}

/// The coin-0 neighbour of `k`: `k2 -> k2 + (-1)^k2` within the level, and
/// the special link `0 <-> N/2`.
pub fn smallworld_partner(k: usize, size: NetworkSize) -> Result<usize> {
    size.check_vertex(k)?;
    Ok(partner_unchecked(k, size.top_vertex()))
}

#[inline]
fn partner_unchecked(k: usize, top: usize) -> usize {
    if k == 0 {
        return top;
    }
    if k == top {
        return 0;
    }
    let k1 = k.trailing_zeros();
    // Flipping the lowest bit of k2 sends even k2 up and odd k2 down.
    let k2 = ((k >> k1) >> 1) ^ 1;
    (2 * k2 + 1) << k1
}

/// Precomputed shift operator: `table[a * N + k]` is the basis index that
/// `|a, k>` is sent to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftPermutation {
    size: NetworkSize,
    table: Vec<usize>,
}

impl ShiftPermutation {
    pub fn build(size: NetworkSize) -> Self {
        let n = size.vertices();
        let top = size.top_vertex();
        let mut table = vec![0usize; 3 * n];
        for k in 0..n {
            table[k] = partner_unchecked(k, top);
            table[n + k] = 2 * n + (k + 1) % n;
            table[2 * n + k] = n + (k + n - 1) % n;
        }
        ShiftPermutation { size, table }
    }

    /// Wraps an arbitrary table without checking it is a valid shift. Use
    /// [`validate_permutation`] to check it.
    pub fn from_table(size: NetworkSize, table: Vec<usize>) -> Result<Self> {
        if table.len() != size.dimension() {
            return Err(Error::DimensionMismatch { expected: size.dimension(), found: table.len() });
        }
        Ok(ShiftPermutation { size, table })
    }

    #[inline]
    pub fn size(&self) -> NetworkSize {
        self.size
    }

    #[inline]
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn image(&self, index: usize) -> usize {
        self.table[index]
    }

    /// Image of `(coin, vertex)` as a `(coin, vertex)` pair.
    pub fn apply(&self, coin: usize, vertex: usize) -> (usize, usize) {
        let n = self.size.vertices();
        let j = self.table[coin * n + vertex];
        (j / n, j % n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeType {
    Backbone,
    SmallWorld,
}

impl EdgeType {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeType::Backbone => "backbone",
            EdgeType::SmallWorld => "smallworld",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeType,
}

/// Adjacency list in vertex order: for each vertex its clockwise backbone
/// neighbour, counterclockwise backbone neighbour and small-world partner.
pub fn edges(size: NetworkSize) -> Vec<Edge> {
    let n = size.vertices();
    let top = size.top_vertex();
    (0..n)
        .flat_map(|k| {
            [
                Edge { from: k, to: (k + 1) % n, kind: EdgeType::Backbone },
                Edge { from: k, to: (k + n - 1) % n, kind: EdgeType::Backbone },
                Edge { from: k, to: partner_unchecked(k, top), kind: EdgeType::SmallWorld },
            ]
        })
        .collect()
}

/// Summary of a successful [`validate_topology`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyReport {
    pub size: NetworkSize,
    pub vertices: usize,
    pub edges: usize,
    /// Number of vertices at each level `k1 = 0..n-1` (vertex 0 excluded).
    pub level_counts: Vec<usize>,
}

/// Checks that `perm` is a bijection on the basis and squares to the identity.
pub fn validate_permutation(perm: &ShiftPermutation) -> Result<()> {
    let dim = perm.size.dimension();
    let mut seen = vec![false; dim];
    for (i, &j) in perm.table.iter().enumerate() {
        if j >= dim || seen[j] {
            return Err(Error::Topology { property: "bijective", index: i });
        }
        seen[j] = true;
    }
    for (i, &j) in perm.table.iter().enumerate() {
        if perm.table[j] != i {
            return Err(Error::Topology { property: "involution", index: i });
        }
    }
    Ok(())
}

/// Full structural check of the network of the given size.
pub fn validate_topology(size: NetworkSize) -> Result<TopologyReport> {
    let n = size.vertices();
    let exp = size.exponent();

    let mut level_counts = vec![0usize; exp as usize];
    for k in 1..n {
        level_counts[k.trailing_zeros() as usize] += 1;
    }
    for (k1, &count) in level_counts.iter().enumerate() {
        let expected_odd = k1 as u32 == exp - 1;
        if expected_odd != (count % 2 == 1) || (expected_odd && count != 1) {
            return Err(Error::Topology { property: "level-cardinality", index: k1 });
        }
    }

    for k in 0..n {
        let p = smallworld_partner(k, size)?;
        if p == k {
            return Err(Error::Topology { property: "fixed-point-free", index: k });
        }
        if smallworld_partner(p, size)? != k {
            return Err(Error::Topology { property: "partner-involution", index: k });
        }
        if p != 0 && p != size.top_vertex() && k != 0 && k != size.top_vertex() {
            let (a, b) = (decompose(k, size)?, decompose(p, size)?);
            if a.k1 != b.k1 || a.k2 / 2 != b.k2 / 2 {
                return Err(Error::Topology { property: "same-level-pairing", index: k });
            }
        }
    }

    let perm = ShiftPermutation::build(size);
    validate_permutation(&perm)?;

    // Degree: the three basis states at k must lead to three distinct
    // vertices other than k.
    let mut incident = vec![0usize; n];
    for k in 0..n {
        let targets = [perm.apply(0, k).1, perm.apply(1, k).1, perm.apply(2, k).1];
        if targets.contains(&k) || targets[0] == targets[1] || targets[0] == targets[2] || targets[1] == targets[2] {
            return Err(Error::Topology { property: "simple-degree-3", index: k });
        }
        for t in targets {
            incident[t] += 1;
        }
    }
    if let Some(k) = incident.iter().position(|&d| d != 3) {
        return Err(Error::Topology { property: "degree-3", index: k });
    }

    Ok(TopologyReport { size, vertices: n, edges: 3 * n / 2, level_counts })
}
