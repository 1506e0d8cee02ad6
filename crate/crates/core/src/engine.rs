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

//! State vector and the sparse step operator `U' = S · C'`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::coin::{epsilon_coin, CoinMatrix, CoinSpec};
use crate::error::{Error, Result};
use crate::topology::{NetworkSize, ShiftPermutation};

/// Amplitudes `psi[a * N + k]` over coin value `a` and vertex `k`.
#[derive(Clone, Debug)]
pub struct WalkerState {
    size: NetworkSize,
    amps: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl WalkerState {
    pub fn from_amplitudes(size: NetworkSize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != size.dimension() {
            return Err(Error::DimensionMismatch { expected: size.dimension(), found: amps.len() });
        }
        Ok(WalkerState { size, amps, scratch: Vec::new() })
    }

    /// The basis state `|coin, vertex>`.
    pub fn basis(size: NetworkSize, coin: usize, vertex: usize) -> Result<Self> {
        if coin >= 3 || vertex >= size.vertices() {
            return Err(Error::VertexOutOfRange { vertex, vertices: size.vertices() });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); size.dimension()];
        amps[coin * size.vertices() + vertex] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(size, amps)
    }

    #[inline]
    pub fn size(&self) -> NetworkSize {
        self.size
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    #[inline]
    pub fn amplitude(&self, coin: usize, vertex: usize) -> Complex64 {
        self.amps[coin * self.size.vertices() + vertex]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `p_k = sum_a |psi_{a,k}|^2` for every vertex.
    pub fn position_distribution(&self) -> Vec<f64> {
        let n = self.size.vertices();
        (0..n)
            .map(|k| self.amps[k].norm_sqr() + self.amps[n + k].norm_sqr() + self.amps[2 * n + k].norm_sqr())
            .collect()
    }

    pub fn probability_at(&self, vertex: usize) -> Result<f64> {
        let n = self.size.vertices();
        if vertex >= n {
            return Err(Error::VertexOutOfRange { vertex, vertices: n });
        }
        Ok(self.amps[vertex].norm_sqr() + self.amps[n + vertex].norm_sqr() + self.amps[2 * n + vertex].norm_sqr())
    }

    pub fn max_abs_diff(&self, other: &WalkerState) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// One walk step: the coin at every vertex (`-I` at the marked vertex, if
/// any) followed by the shift permutation.
#[derive(Clone, Debug)]
pub struct StepOperator {
    shift: Arc<ShiftPermutation>,
    coin: CoinMatrix,
    marked: Option<usize>,
}

impl StepOperator {
    pub fn new(shift: Arc<ShiftPermutation>, coin: CoinMatrix, marked: Option<usize>) -> Result<Self> {
        let size = shift.size();
        if let Some(k) = marked {
            if k >= size.vertices() {
                return Err(Error::VertexOutOfRange { vertex: k, vertices: size.vertices() });
            }
        }
        Ok(StepOperator { shift, coin, marked })
    }

    /// Operator for `spec` (epsilon coin, mark taken from the spec).
    pub fn for_spec(shift: Arc<ShiftPermutation>, spec: &CoinSpec) -> Result<Self> {
        Self::new(shift, epsilon_coin(spec), spec.mark())
    }

    #[inline]
    pub fn size(&self) -> NetworkSize {
        self.shift.size()
    }

    #[inline]
    pub fn coin(&self) -> &CoinMatrix {
        &self.coin
    }

    #[inline]
    pub fn marked(&self) -> Option<usize> {
        self.marked
    }

    #[inline]
    pub fn shift(&self) -> &ShiftPermutation {
        &self.shift
    }

    pub fn step(&self, state: &mut WalkerState) -> Result<()> {
        let dim = self.shift.size().dimension();
        if state.amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: state.amps.len() });
        }
        let n = self.shift.size().vertices();
        let table = self.shift.table();
        let zero = Complex64::new(0.0, 0.0);
        state.scratch.resize(dim, zero);
        let (src, dst) = (&state.amps, &mut state.scratch);
        let (src0, rest) = src.split_at(n);
        let (src1, src2) = rest.split_at(n);
        for k in 0..n {
            let v = [src0[k], src1[k], src2[k]];
            let w = if Some(k) == self.marked { [-v[0], -v[1], -v[2]] } else { self.coin.apply(v) };
            dst[table[k]] = w[0];
            dst[table[n + k]] = w[1];
            dst[table[2 * n + k]] = w[2];
        }
        std::mem::swap(&mut state.amps, &mut state.scratch);
        Ok(())
    }

    pub fn evolve(&self, state: &mut WalkerState, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step(state)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{grover_coin, initial_state};
    use crate::topology::smallworld_partner;

    fn setup(n: u32) -> (NetworkSize, Arc<ShiftPermutation>) {
        let size = NetworkSize::new(n).unwrap();
        (size, Arc::new(ShiftPermutation::build(size)))
    }

    #[test]
    fn single_step_from_basis_state() {
        let (size, shift) = setup(4);
        let op = StepOperator::new(shift, grover_coin(), None).unwrap();
        let mut st = WalkerState::basis(size, 1, 4).unwrap();
        op.step(&mut st).unwrap();
        let partner = smallworld_partner(4, size).unwrap();
        // Column 1 of G is (2/3, -1/3, 2/3).
        let mut expect = vec![(0, partner, 2.0 / 3.0), (2, 5, -1.0 / 3.0), (1, 3, 2.0 / 3.0)];
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut got: Vec<(usize, usize, f64)> = (0..3)
            .flat_map(|a| (0..16).map(move |k| (a, k)))
            .filter_map(|(a, k)| {
                let z = st.amplitude(a, k);
                (z.norm() > 0.0).then_some((a, k, z.re))
            })
            .collect();
        got.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(got.len(), 3);
        for (g, e) in got.iter().zip(&expect) {
            assert_eq!((g.0, g.1), (e.0, e.1));
            assert!((g.2 - e.2).abs() < 1e-15);
        }
    }

    #[test]
    fn marked_vertex_reflects_then_shifts() {
        let (size, shift) = setup(4);
        let spec = CoinSpec::marked(3.0, 6).unwrap();
        let op = StepOperator::for_spec(shift, &spec).unwrap();
        let mut st = WalkerState::basis(size, 0, 6).unwrap();
        op.step(&mut st).unwrap();
        let p = smallworld_partner(6, size).unwrap();
        assert_eq!(st.amplitude(0, p), Complex64::new(-1.0, 0.0));
        assert!((st.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let (size, shift) = setup(3);
        let spec = CoinSpec::marked(1.7, 0).unwrap();
        let op = StepOperator::for_spec(shift, &spec).unwrap();
        let st0 = initial_state(&spec, size);
        let mut st = st0.clone();
        op.evolve(&mut st, 0).unwrap();
        assert_eq!(st.amplitudes(), st0.amplitudes());
    }

    #[test]
    fn evolve_composes() {
        let (size, shift) = setup(5);
        let spec = CoinSpec::marked(2.2, 3).unwrap();
        let op = StepOperator::for_spec(shift, &spec).unwrap();
        let mut a = initial_state(&spec, size);
        let mut b = a.clone();
        op.evolve(&mut a, 37).unwrap();
        op.evolve(&mut b, 20).unwrap();
        op.evolve(&mut b, 17).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn uniform_state_is_stationary_without_mark() {
        let (size, shift) = setup(6);
        for eps in [0.3, 1.0, 2.4] {
            let spec = CoinSpec::new(eps).unwrap();
            let op = StepOperator::for_spec(shift.clone(), &spec).unwrap();
            let st0 = initial_state(&spec, size);
            let mut st = st0.clone();
            op.step(&mut st).unwrap();
            assert!(st.max_abs_diff(&st0) < 1e-13);
        }
    }

    #[test]
    fn distribution_of_basis_state() {
        let (size, _) = setup(4);
        let st = WalkerState::basis(size, 2, 7).unwrap();
        let p = st.position_distribution();
        assert_eq!(p[7], 1.0);
        assert_eq!(p.iter().sum::<f64>(), 1.0);
        assert_eq!(st.probability_at(7).unwrap(), 1.0);
        assert!(st.probability_at(16).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let (_, shift) = setup(4);
        let (other, _) = setup(3);
        let op = StepOperator::new(shift, grover_coin(), None).unwrap();
        let mut st = WalkerState::basis(other, 0, 0).unwrap();
        assert!(matches!(op.step(&mut st), Err(Error::DimensionMismatch { .. })));
        assert!(WalkerState::from_amplitudes(other, vec![Complex64::new(0.0, 0.0); 5]).is_err());
    }

    #[test]
    fn marked_vertex_range_checked() {
        let (_, shift) = setup(3);
        assert!(StepOperator::new(shift, grover_coin(), Some(8)).is_err());
    }
}
