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

//! Parameter sweeps over epsilon and network size, and the scaling fits.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin::CoinSpec;
use crate::error::{Error, Result};
use crate::search::{run_search_with, CostModel, PeakDetectorConfig, SearchOutcome};
use crate::topology::{NetworkSize, ShiftPermutation};

/// One `(n, epsilon, k0)` cell of a sweep. When no peak was found `t_f` and
/// `p_max` are zero and `cost` is infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: u32,
    #[serde(rename = "N")]
    pub vertices: usize,
    pub epsilon: f64,
    pub k0: usize,
    pub t_f: usize,
    pub p_max: f64,
    pub cost: f64,
    pub peak_found: bool,
}

impl SweepRecord {
    pub fn from_outcome(size: NetworkSize, epsilon: f64, k0: usize, outcome: &SearchOutcome) -> Self {
        let (t_f, p_max, cost, peak_found) = match outcome.found() {
            Some(r) => (r.t_f, r.p_max, r.cost, true),
            None => (0, 0.0, f64::INFINITY, false),
        };
        SweepRecord { n: size.exponent(), vertices: size.vertices(), epsilon, k0, t_f, p_max, cost, peak_found }
    }
}

fn run_cell(
    shift: &Arc<ShiftPermutation>,
    epsilon: f64,
    k0: usize,
    det: &PeakDetectorConfig,
    model: CostModel,
) -> Result<SweepRecord> {
    let spec = CoinSpec::marked(epsilon, k0)?;
    let outcome = run_search_with(shift.clone(), &spec, det, model)?;
    Ok(SweepRecord::from_outcome(shift.size(), epsilon, k0, &outcome))
}

/// One record per grid value, in grid order. Cells run in parallel.
pub fn sweep_epsilon(
    size: NetworkSize,
    grid: &[f64],
    k0: usize,
    det: &PeakDetectorConfig,
    model: CostModel,
) -> Result<Vec<SweepRecord>> {
    for &eps in grid {
        CoinSpec::new(eps)?;
    }
    CoinSpec::marked(1.0, k0)?.check(size)?;
    det.validate()?;
    let shift = Arc::new(ShiftPermutation::build(size));
    grid.par_iter().map(|&eps| run_cell(&shift, eps, k0, det, model)).collect()
}

/// One record per exponent in `exponents`, sorted ascending.
pub fn sweep_size(
    spec: &CoinSpec,
    exponents: &[u32],
    det: &PeakDetectorConfig,
    model: CostModel,
) -> Result<Vec<SweepRecord>> {
    let k0 = spec.mark().ok_or(Error::MissingMark)?;
    let mut sizes = exponents.iter().map(|&n| NetworkSize::new(n)).collect::<Result<Vec<_>>>()?;
    sizes.sort();
    for size in &sizes {
        spec.check(*size)?;
    }
    det.validate()?;
    sizes
        .par_iter()
        .map(|&size| run_cell(&Arc::new(ShiftPermutation::build(size)), spec.epsilon(), k0, det, model))
        .collect()
}

/// Vertex 0 followed by one representative `2^k1` of every hierarchy level.
pub fn level_representatives(size: NetworkSize) -> Vec<usize> {
    std::iter::once(0).chain((0..size.exponent()).map(|k1| 1usize << k1)).collect()
}

/// Runs the same search with the mark placed on each of
/// [`level_representatives`].
pub fn sweep_levels(
    size: NetworkSize,
    epsilon: f64,
    det: &PeakDetectorConfig,
    model: CostModel,
) -> Result<Vec<SweepRecord>> {
    CoinSpec::new(epsilon)?;
    det.validate()?;
    let shift = Arc::new(ShiftPermutation::build(size));
    level_representatives(size).par_iter().map(|&k0| run_cell(&shift, epsilon, k0, det, model)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalEpsilon {
    pub epsilon: f64,
    pub cost: f64,
    /// Vertex of the parabola through the minimum and its grid neighbours,
    /// when requested and the minimum is interior.
    pub refined: Option<(f64, f64)>,
}

/// Grid point of minimal cost among records with a peak. Ties go to the
/// smaller epsilon.
pub fn find_optimal_epsilon(records: &[SweepRecord], refine: bool) -> Result<OptimalEpsilon> {
    let mut valid: Vec<&SweepRecord> = records.iter().filter(|r| r.peak_found && r.cost.is_finite()).collect();
    if valid.len() < 3 {
        return Err(Error::InsufficientData(format!("{} records with a peak, need at least 3", valid.len())));
    }
    valid.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    let mut best = 0;
    for (i, r) in valid.iter().enumerate() {
        if r.cost < valid[best].cost {
            best = i;
        }
    }
    let refined = if refine && best > 0 && best + 1 < valid.len() {
        let (x0, y0) = (valid[best - 1].epsilon, valid[best - 1].cost);
        let (x1, y1) = (valid[best].epsilon, valid[best].cost);
        let (x2, y2) = (valid[best + 1].epsilon, valid[best + 1].cost);
        parabola_vertex([x0, x1, x2], [y0, y1, y2])
    } else {
        None
    };
    Ok(OptimalEpsilon { epsilon: valid[best].epsilon, cost: valid[best].cost, refined })
}

fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    // Newton divided differences: y = y0 + d1 (x - x0) + d2 (x - x0)(x - x1).
    let d01 = (y[1] - y[0]) / (x[1] - x[0]);
    let d12 = (y[2] - y[1]) / (x[2] - x[1]);
    let d2 = (d12 - d01) / (x[2] - x[0]);
    if d2.is_nan() || d2 <= 0.0 {
        return None;
    }
    let xv = 0.5 * (x[0] + x[1]) - d01 / (2.0 * d2);
    let yv = y[0] + d01 * (xv - x[0]) + d2 * (xv - x[0]) * (xv - x[1]);
    Some((xv, yv))
}

/// A straight-line fit on transformed data.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub model: String,
    pub parameters: BTreeMap<String, f64>,
    pub r2: f64,
    pub points: usize,
    pub residual_rms: f64,
    pub residual_max: f64,
}

impl FitResult {
    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }
}

struct LineFit {
    slope: f64,
    intercept: f64,
    r2: f64,
    residual_rms: f64,
    residual_max: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::Degenerate("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - (intercept + slope * a)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Ok(LineFit {
        slope,
        intercept,
        r2,
        residual_rms: (ss_res / m).sqrt(),
        residual_max: residuals.iter().map(|r| r.abs()).fold(0.0, f64::max),
    })
}

fn fit_points(records: &[SweepRecord]) -> Result<Vec<&SweepRecord>> {
    let valid: Vec<&SweepRecord> =
        records.iter().filter(|r| r.peak_found && r.cost.is_finite() && r.p_max > 0.0).collect();
    if valid.len() < 4 {
        return Err(Error::InsufficientData(format!("{} records with a peak, need at least 4", valid.len())));
    }
    let distinct: BTreeSet<usize> = valid.iter().map(|r| r.vertices).collect();
    if distinct.len() != valid.len() {
        return Err(Error::Degenerate("records must have distinct network sizes".into()));
    }
    Ok(valid)
}

/// Fits `cost = A N^c ln N` as a line `ln(cost / ln N) = ln A + c ln N`.
pub fn fit_cost_exponent(records: &[SweepRecord]) -> Result<FitResult> {
    let pts = fit_points(records)?;
    let x: Vec<f64> = pts.iter().map(|r| (r.vertices as f64).ln()).collect();
    let y: Vec<f64> = pts.iter().map(|r| (r.cost / (r.vertices as f64).ln()).ln()).collect();
    let fit = least_squares(&x, &y)?;
    Ok(FitResult {
        model: "cost_power_log".into(),
        parameters: BTreeMap::from([("c".into(), fit.slope), ("prefactor".into(), fit.intercept.exp())]),
        r2: fit.r2,
        points: pts.len(),
        residual_rms: fit.residual_rms,
        residual_max: fit.residual_max,
    })
}

/// Fits `p_max = B (ln N)^s` as a line `ln p_max = ln B + s ln ln N`.
pub fn fit_success_decay(records: &[SweepRecord]) -> Result<FitResult> {
    let pts = fit_points(records)?;
    let x: Vec<f64> = pts.iter().map(|r| (r.vertices as f64).ln().ln()).collect();
    let y: Vec<f64> = pts.iter().map(|r| r.p_max.ln()).collect();
    let fit = least_squares(&x, &y)?;
    Ok(FitResult {
        model: "success_log_decay".into(),
        parameters: BTreeMap::from([("slope".into(), fit.slope), ("prefactor".into(), fit.intercept.exp())]),
        r2: fit.r2,
        points: pts.len(),
        residual_rms: fit.residual_rms,
        residual_max: fit.residual_max,
    })
}
