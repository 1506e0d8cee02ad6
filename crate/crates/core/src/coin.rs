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

//! Coin operators and the biased initial state.
//!
//! The epsilon coin is the reflection `2|chi><chi| - I` about
//!
//! ```text
//! chi = ( sqrt(eps/d), sqrt((d-eps)/(d(d-1))), sqrt((d-eps)/(d(d-1))) )
//! ```
//!
//! so that `chi ⊗ s` (with `s` uniform over vertices) is the +1 eigenvector of
//! the unmarked coin. `eps = 1` gives the Grover coin, `eps > 1` pushes
//! amplitude onto the small-world edge, `eps < 1` onto the backbone.

use std::ops::Mul;

use num_complex::Complex64;

use crate::engine::WalkerState;
use crate::error::{Error, Result};
use crate::topology::NetworkSize;

/// Vertex degree of the network; only degree 3 is supported.
pub const DEGREE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinSpec {
    epsilon: f64,
    marked: Option<usize>,
}

impl CoinSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        let d = DEGREE as f64;
        if !(0.0..=d).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        Ok(CoinSpec { epsilon, marked: None })
    }

    pub fn marked(epsilon: f64, vertex: usize) -> Result<Self> {
        Ok(Self::new(epsilon)?.with_mark(vertex))
    }

    pub fn with_mark(mut self, vertex: usize) -> Self {
        self.marked = Some(vertex);
        self
    }

    pub fn without_mark(mut self) -> Self {
        self.marked = None;
        self
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn mark(&self) -> Option<usize> {
        self.marked
    }

    /// Checks the marked vertex, if any, against `size`.
    pub fn check(&self, size: NetworkSize) -> Result<()> {
        match self.marked {
            Some(k) if k >= size.vertices() => Err(Error::VertexOutOfRange { vertex: k, vertices: size.vertices() }),
            _ => Ok(()),
        }
    }
}

/// Real 3×3 coin, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinMatrix(pub [[f64; 3]; 3]);

impl CoinMatrix {
    pub const IDENTITY: CoinMatrix = CoinMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.0[row][col]
    }

    pub fn transpose(&self) -> CoinMatrix {
        let m = &self.0;
        CoinMatrix([[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]])
    }

    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Applies the coin to one vertex's amplitude triple.
    #[inline]
    pub fn apply(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let m = &self.0;
        [
            v[0] * m[0][0] + v[1] * m[0][1] + v[2] * m[0][2],
            v[0] * m[1][0] + v[1] * m[1][1] + v[2] * m[1][2],
            v[0] * m[2][0] + v[1] * m[2][1] + v[2] * m[2][2],
        ]
    }
}

impl Mul for CoinMatrix {
    type Output = CoinMatrix;

    fn mul(self, rhs: CoinMatrix) -> CoinMatrix {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|l| self.0[i][l] * rhs.0[l][j]).sum();
            }
        }
        CoinMatrix(out)
    }
}

/// Coin factor of the initial state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiState(pub [f64; 3]);

impl ChiState {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `2|chi><chi| - I`.
    pub fn reflection(&self) -> CoinMatrix {
        let c = &self.0;
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = 2.0 * c[i] * c[j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        CoinMatrix(m)
    }
}

/// `(1/3) [[-1, 2, 2], [2, -1, 2], [2, 2, -1]]`.
pub fn grover_coin() -> CoinMatrix {
    let a = -1.0 / 3.0;
    let b = 2.0 / 3.0;
    CoinMatrix([[a, b, b], [b, a, b], [b, b, a]])
}

pub fn chi_state(spec: &CoinSpec) -> ChiState {
    let d = DEGREE as f64;
    let eps = spec.epsilon;
    let small_world = (eps / d).sqrt();
    let backbone = ((d - eps) / (d * (d - 1.0))).sqrt();
    ChiState([small_world, backbone, backbone])
}

pub fn epsilon_coin(spec: &CoinSpec) -> CoinMatrix {
    chi_state(spec).reflection()
}

/// `chi ⊗ s` with `s_k = 1/sqrt(N)`. Does not depend on the marked vertex.
pub fn initial_state(spec: &CoinSpec, size: NetworkSize) -> WalkerState {
    let chi = chi_state(spec);
    let n = size.vertices();
    let scale = 1.0 / (n as f64).sqrt();
    let mut amps = Vec::with_capacity(size.dimension());
    for c in chi.0 {
        amps.extend(std::iter::repeat_n(Complex64::new(c * scale, 0.0), n));
    }
    WalkerState::from_amplitudes(size, amps).expect("dimension is 3N by construction")
}

/// Applies `C' = -I ⊗ |k0><k0| + C ⊗ (I - |k0><k0|)` in place.
pub fn apply_marked_coin(state: &mut WalkerState, spec: &CoinSpec) -> Result<()> {
    let k0 = spec.marked.ok_or(Error::MissingMark)?;
    spec.check(state.size())?;
    let coin = epsilon_coin(spec);
    let n = state.size().vertices();
    let amps = state.amplitudes_mut();
    for k in 0..n {
        let v = [amps[k], amps[n + k], amps[2 * n + k]];
        let w = if k == k0 { [-v[0], -v[1], -v[2]] } else { coin.apply(v) };
        amps[k] = w[0];
        amps[n + k] = w[1];
        amps[2 * n + k] = w[2];
    }
    Ok(())
}
