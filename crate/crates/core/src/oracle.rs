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

//! Dense reference implementation of the walk for small networks.
//!
//! Everything here is assembled from the construction rules directly: the
//! small-world pairing by enumerating each hierarchy level, the coin from its
//! closed-form entries, and the step as the product of an explicit permutation
//! matrix with a block-diagonal coin matrix. None of it goes through
//! [`crate::topology`], [`crate::coin`] or the sparse kernel, so the two can be
//! compared meaningfully.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coin::CoinSpec;
use crate::engine::StepOperator;
use crate::error::{Error, Result};
use crate::topology::{NetworkSize, ShiftPermutation};

/// Largest exponent accepted by the dense oracle (dimension 384).
pub const MAX_DENSE_EXPONENT: u32 = 7;

fn guard(size: NetworkSize) -> Result<()> {
    if size.exponent() > MAX_DENSE_EXPONENT {
        Err(Error::OracleTooLarge(size.exponent()))
    } else {
        Ok(())
    }
}

/// Small-world pairing built level by level.
fn pairing_by_levels(exponent: u32) -> Vec<usize> {
    let n = 1usize << exponent;
    let mut partner = vec![usize::MAX; n];
    partner[0] = n / 2;
    partner[n / 2] = 0;
    for level in 0..exponent - 1 {
        let members: Vec<usize> = (0..n >> (level + 1)).map(|j| (1usize << level) * (2 * j + 1)).collect();
        for pair in members.chunks(2) {
            partner[pair[0]] = pair[1];
            partner[pair[1]] = pair[0];
        }
    }
    partner
}

fn coin_entries(epsilon: f64) -> [[f64; 3]; 3] {
    let diag0 = 2.0 * epsilon / 3.0 - 1.0;
    let cross = 2.0 * (epsilon * (3.0 - epsilon)).sqrt() / (3.0 * 2f64.sqrt());
    let back = (3.0 - epsilon) / 3.0;
    [[diag0, cross, cross], [cross, back - 1.0, back], [cross, back, back - 1.0]]
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// The full `3N × 3N` step matrix.
#[derive(Clone, Debug)]
pub struct DenseUnitary {
    size: NetworkSize,
    spec: CoinSpec,
    matrix: DMatrix<Complex64>,
}

pub fn build_dense(size: NetworkSize, spec: &CoinSpec) -> Result<DenseUnitary> {
    guard(size)?;
    spec.check(size)?;
    let n = size.vertices();
    let dim = 3 * n;
    let index = |coin: usize, vertex: usize| coin * n + vertex;

    let partner = pairing_by_levels(size.exponent());
    let mut shift = DMatrix::from_element(dim, dim, zero());
    for k in 0..n {
        shift[(index(0, partner[k]), index(0, k))] = one();
        shift[(index(2, (k + 1) % n), index(1, k))] = one();
        shift[(index(1, (k + n - 1) % n), index(2, k))] = one();
    }

    let c = coin_entries(spec.epsilon());
    let mut coin = DMatrix::from_element(dim, dim, zero());
    for k in 0..n {
        for a in 0..3 {
            for b in 0..3 {
                let v = if Some(k) == spec.mark() {
                    if a == b { -1.0 } else { 0.0 }
                } else {
                    c[a][b]
                };
                coin[(index(a, k), index(b, k))] = Complex64::new(v, 0.0);
            }
        }
    }

    Ok(DenseUnitary { size, spec: *spec, matrix: shift * coin })
}

impl DenseUnitary {
    pub fn size(&self) -> NetworkSize {
        self.size
    }

    pub fn spec(&self) -> &CoinSpec {
        &self.spec
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `max |U^† U - I|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let dim = prod.nrows();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j { one() } else { zero() };
                worst = worst.max((prod[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// `U^t` by repeated squaring.
    pub fn power(&self, t: usize) -> DMatrix<Complex64> {
        let dim = self.matrix.nrows();
        let mut result = DMatrix::<Complex64>::identity(dim, dim);
        let mut base = self.matrix.clone();
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `t` successive matrix-vector products.
    pub fn evolve(&self, psi: &DVector<Complex64>, t: usize) -> DVector<Complex64> {
        let mut v = psi.clone();
        for _ in 0..t {
            v = &self.matrix * v;
        }
        v
    }

    /// Moduli of the eigenvalues. The step matrix is real, so the real
    /// Schur-based solver applies.
    pub fn eigenvalue_moduli(&self) -> Vec<f64> {
        let real = self.matrix.map(|z| z.re);
        real.complex_eigenvalues().iter().map(|z| z.norm()).collect()
    }
}

/// The biased initial state written out directly.
pub fn dense_initial_state(size: NetworkSize, epsilon: f64) -> DVector<Complex64> {
    let n = size.vertices();
    let s = 1.0 / (n as f64).sqrt();
    let a0 = (epsilon / 3.0).sqrt() * s;
    let a12 = ((3.0 - epsilon) / 6.0).sqrt() * s;
    DVector::from_fn(3 * n, |i, _| Complex64::new(if i < n { a0 } else { a12 }, 0.0))
}

/// Something that can produce the state after `t` steps from the initial
/// state; lets the comparison run against alternative engines.
pub trait Propagator {
    fn propagate(&self, size: NetworkSize, spec: &CoinSpec, t: usize) -> Result<Vec<Complex64>>;
}

/// The production sparse engine.
#[derive(Clone, Copy, Debug, Default)]
pub struct SparseEngine;

impl Propagator for SparseEngine {
    fn propagate(&self, size: NetworkSize, spec: &CoinSpec, t: usize) -> Result<Vec<Complex64>> {
        let shift = std::sync::Arc::new(ShiftPermutation::build(size));
        let op = StepOperator::for_spec(shift, spec)?;
        let mut st = crate::coin::initial_state(spec, size);
        op.evolve(&mut st, t)?;
        Ok(st.into_amplitudes())
    }
}

/// Max-abs amplitude deviation between `engine` and the dense oracle after
/// `t` steps from the initial state.
pub fn compare_with(engine: &dyn Propagator, size: NetworkSize, spec: &CoinSpec, t: usize) -> Result<f64> {
    let dense = build_dense(size, spec)?;
    let reference = dense.evolve(&dense_initial_state(size, spec.epsilon()), t);
    let got = engine.propagate(size, spec, t)?;
    if got.len() != reference.len() {
        return Err(Error::DimensionMismatch { expected: reference.len(), found: got.len() });
    }
    Ok(got.iter().zip(reference.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

pub fn compare_engine(size: NetworkSize, spec: &CoinSpec, t: usize) -> Result<f64> {
    compare_with(&SparseEngine, size, spec, t)
}

/// One row of the oracle check suite.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleCheck {
    pub n: u32,
    pub epsilon: f64,
    pub marked: Option<usize>,
    pub steps: usize,
    pub deviation: f64,
    pub unitarity: f64,
    pub deviation_threshold: f64,
    pub unitarity_threshold: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.deviation < self.deviation_threshold && self.unitarity < self.unitarity_threshold
    }
}

/// Parameters for [`run_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub exponents: Vec<u32>,
    pub epsilons: Vec<f64>,
    pub marked: Option<usize>,
    pub steps: usize,
    pub deviation_threshold: f64,
    pub unitarity_threshold: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            exponents: vec![3, 4],
            epsilons: vec![0.0, 1.0, 1.7, 2.5],
            marked: Some(0),
            steps: 200,
            deviation_threshold: 1e-10,
            unitarity_threshold: 1e-12,
        }
    }
}

pub fn run_suite(config: &SuiteConfig, engine: &dyn Propagator) -> Result<Vec<OracleCheck>> {
    let mut out = Vec::new();
    for &n in &config.exponents {
        let size = NetworkSize::new(n)?;
        guard(size)?;
        for &eps in &config.epsilons {
            let mut spec = CoinSpec::new(eps)?;
            if let Some(k) = config.marked {
                spec = spec.with_mark(k);
            }
            let unitarity = build_dense(size, &spec)?.unitarity_error();
            let deviation = compare_with(engine, size, &spec, config.steps)?;
            out.push(OracleCheck {
                n,
                epsilon: eps,
                marked: config.marked,
                steps: config.steps,
                deviation,
                unitarity,
                deviation_threshold: config.deviation_threshold,
                unitarity_threshold: config.unitarity_threshold,
            });
        }
    }
    Ok(out)
}
