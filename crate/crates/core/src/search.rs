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

//! The search protocol: evolve the biased initial state under the marked step
//! operator, record the marked-vertex probability, and locate its first peak.
//!
//! Peak detection works on a centred moving average of width `w` (truncated
//! at the ends of the trace). A hump starts where the smoothed trace first
//! reaches `rho` times its global maximum, and ends where it falls below `rho`
//! times the largest smoothed value seen inside the hump. The reported peak is
//! the raw maximum over the hump, widened by `w / 2` on each side. Humps whose
//! raw maximum sits on the first or last sample are not peaks.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coin::{initial_state, CoinSpec};
use crate::engine::StepOperator;
use crate::error::{Error, Result};
use crate::topology::{NetworkSize, ShiftPermutation};

/// Hard cap on the number of simulated steps per run.
pub const HORIZON_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakDetectorConfig {
    /// Moving-average width; odd, at least 1.
    pub window: usize,
    /// Fraction of the global (smoothed) maximum a hump must reach.
    pub prominence: f64,
    /// Initial horizon in units of `ceil(sqrt(N) ln N)` steps.
    pub horizon_factor: f64,
}

impl Default for PeakDetectorConfig {
    fn default() -> Self {
        PeakDetectorConfig { window: 5, prominence: 0.5, horizon_factor: 20.0 }
    }
}

impl PeakDetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidDetector(format!("window must be odd and >= 1, got {}", self.window)));
        }
        if !(self.prominence > 0.0 && self.prominence <= 1.0) {
            return Err(Error::InvalidDetector(format!("prominence must lie in (0, 1], got {}", self.prominence)));
        }
        if !(self.horizon_factor >= 1.0 && self.horizon_factor.is_finite()) {
            return Err(Error::InvalidDetector(format!("horizon factor must be >= 1, got {}", self.horizon_factor)));
        }
        Ok(())
    }

    /// Initial number of steps for a network of `size`.
    pub fn horizon(&self, size: NetworkSize) -> usize {
        let n = size.vertices() as f64;
        let base = (n.sqrt() * n.ln()).ceil();
        ((self.horizon_factor * base).ceil() as usize).clamp(1, HORIZON_CAP)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CostModel {
    /// `t_f / p_max`: expected steps when the run is repeated until success.
    #[default]
    Repetition,
    /// `t_f / sqrt(p_max)`: amplitude amplification over the single run.
    Amplification,
}

impl CostModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CostModel::Repetition => "repetition",
            CostModel::Amplification => "amplification",
        }
    }
}

impl std::str::FromStr for CostModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "repetition" => Ok(CostModel::Repetition),
            "amplification" => Ok(CostModel::Amplification),
            other => Err(Error::Parse(format!("unknown cost model '{other}'"))),
        }
    }
}

/// Total cost of a search whose single run takes `t_f` steps and succeeds with
/// probability `p_max`. Zero probability gives infinite cost.
pub fn compute_cost(t_f: usize, p_max: f64, model: CostModel) -> f64 {
    if p_max <= 0.0 {
        return f64::INFINITY;
    }
    match model {
        CostModel::Repetition => t_f as f64 / p_max,
        CostModel::Amplification => t_f as f64 / p_max.sqrt(),
    }
}

/// Marked-vertex probability for `t = 0..=T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTrace {
    pub exponent: u32,
    pub epsilon: f64,
    pub marked: usize,
    pub values: Vec<f64>,
}

impl ProbabilityTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub t_f: usize,
    pub p_max: f64,
    /// False when the hump was still open at the end of the trace.
    pub closed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hump {
    pub start: usize,
    /// One past the last sample inside the hump.
    pub end: usize,
    pub peak: Peak,
}

fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let len = values.len();
    let half = window / 2;
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in values {
        acc += v;
        prefix.push(acc);
    }
    (0..len)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(len);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// All humps of `values` that qualify as peaks, in time order.
pub fn find_humps(values: &[f64], det: &PeakDetectorConfig) -> Result<Vec<Hump>> {
    det.validate()?;
    let len = values.len();
    if len < 3 {
        return Err(Error::TraceTooShort(len));
    }
    let half = det.window / 2;
    let smooth = moving_average(values, det.window);
    let threshold = det.prominence * smooth.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut humps = Vec::new();
    let mut i = 0;
    while i < len {
        if smooth[i] < threshold {
            i += 1;
            continue;
        }
        let start = i;
        let mut running = smooth[i];
        let mut j = i;
        while j < len && smooth[j] >= det.prominence * running {
            running = running.max(smooth[j]);
            j += 1;
        }
        let lo = start.saturating_sub(half);
        let hi = (j + half).min(len);
        let (t, p) = values[lo..hi]
            .iter()
            .enumerate()
            .fold((lo, f64::NEG_INFINITY), |best, (off, &v)| if v > best.1 { (lo + off, v) } else { best });
        if t >= 1 && t + 1 < len && p > values[0] {
            humps.push(Hump { start, end: j, peak: Peak { t_f: t, p_max: p, closed: j < len } });
        }
        i = j.max(i + 1);
    }
    Ok(humps)
}

/// First peak of `values`, or `None` when the trace has no qualifying hump
/// (monotone, flat, or everything below the prominence threshold).
pub fn detect_first_peak(values: &[f64], det: &PeakDetectorConfig) -> Result<Option<Peak>> {
    Ok(find_humps(values, det)?.into_iter().next().map(|h| h.peak))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub t_f: usize,
    pub p_max: f64,
    pub cost: f64,
    pub model: CostModel,
    pub detector: PeakDetectorConfig,
    pub trace: ProbabilityTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(SearchResult),
    /// No peak up to [`HORIZON_CAP`] steps; carries the whole trace.
    NoPeak { detector: PeakDetectorConfig, model: CostModel, trace: ProbabilityTrace },
}

impl SearchOutcome {
    pub fn trace(&self) -> &ProbabilityTrace {
        match self {
            SearchOutcome::Found(r) => &r.trace,
            SearchOutcome::NoPeak { trace, .. } => trace,
        }
    }

    pub fn found(&self) -> Option<&SearchResult> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            SearchOutcome::NoPeak { .. } => None,
        }
    }

    /// Cost of the outcome; infinite when no peak was found.
    pub fn cost(&self) -> f64 {
        self.found().map_or(f64::INFINITY, |r| r.cost)
    }
}

/// Runs one search on a freshly built shift table.
pub fn run_search(
    size: NetworkSize,
    spec: &CoinSpec,
    det: &PeakDetectorConfig,
    model: CostModel,
) -> Result<SearchOutcome> {
    let shift = Arc::new(ShiftPermutation::build(size));
    run_search_with(shift, spec, det, model)
}

/// Runs one search on a shared shift table. The horizon starts at
/// [`PeakDetectorConfig::horizon`] and doubles, up to [`HORIZON_CAP`], while
/// no closed hump has been seen.
pub fn run_search_with(
    shift: Arc<ShiftPermutation>,
    spec: &CoinSpec,
    det: &PeakDetectorConfig,
    model: CostModel,
) -> Result<SearchOutcome> {
    det.validate()?;
    let marked = spec.mark().ok_or(Error::MissingMark)?;
    let size = shift.size();
    spec.check(size)?;
    let op = StepOperator::for_spec(shift, spec)?;

    let mut state = initial_state(spec, size);
    let mut values = vec![state.probability_at(marked)?];
    let mut horizon = det.horizon(size).max(2);
    loop {
        while values.len() <= horizon {
            op.step(&mut state)?;
            values.push(state.probability_at(marked)?);
        }
        let peak = detect_first_peak(&values, det)?;
        let at_cap = horizon >= HORIZON_CAP;
        let trace = || ProbabilityTrace { exponent: size.exponent(), epsilon: spec.epsilon(), marked, values: values.clone() };
        match peak {
            Some(p) if p.closed || at_cap => {
                return Ok(SearchOutcome::Found(SearchResult {
                    t_f: p.t_f,
                    p_max: p.p_max,
                    cost: compute_cost(p.t_f, p.p_max, model),
                    model,
                    detector: *det,
                    trace: trace(),
                }));
            }
            None if at_cap => return Ok(SearchOutcome::NoPeak { detector: *det, model, trace: trace() }),
            _ => horizon = (horizon * 2).min(HORIZON_CAP),
        }
    }
}
