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

//! CSV and JSON persistence. Floats are always written with 17 significant
//! digits so that identical runs produce byte-identical files.

use std::io::{Read, Write};

use serde_json::{Map, Number, Value};

pub use serde_json::Value as JsonValue;

use crate::engine::WalkerState;
use crate::error::{Error, Result};
use crate::search::{PeakDetectorConfig, ProbabilityTrace, SearchOutcome};
use crate::sweep::{FitResult, OptimalEpsilon, SweepRecord};
use crate::topology::{edges, NetworkSize};

pub const TRACE_HEADER: [&str; 2] = ["t", "p"];
pub const SWEEP_HEADER: [&str; 8] = ["n", "N", "epsilon", "k0", "t_f", "p_max", "cost", "peak_found"];
pub const EDGE_HEADER: [&str; 3] = ["k", "neighbor", "edge_type"];
pub const SNAPSHOT_HEADER: [&str; 4] = ["a", "k", "re", "im"];

/// `x` with 17 significant digits in scientific notation; `inf`, `-inf` and
/// `NaN` for non-finite values.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn json_float(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(format_float(x).parse::<Number>().expect("finite float formats as a JSON number"))
    } else {
        Value::Null
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

pub fn write_trace_csv<W: Write>(out: W, trace: &ProbabilityTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER).map_err(csv_err)?;
    for (t, p) in trace.values.iter().enumerate() {
        w.write_record([t.to_string(), format_float(*p)]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn detector_json(det: &PeakDetectorConfig) -> Value {
    let mut m = Map::new();
    m.insert("window".into(), Value::from(det.window));
    m.insert("prominence".into(), json_float(det.prominence));
    m.insert("horizon_factor".into(), json_float(det.horizon_factor));
    Value::Object(m)
}

/// Search outcome as a JSON object. Peak fields are `null` when no peak was
/// found.
pub fn search_json(outcome: &SearchOutcome) -> Value {
    let trace = outcome.trace();
    let mut m = Map::new();
    m.insert("n".into(), Value::from(trace.exponent));
    m.insert("epsilon".into(), json_float(trace.epsilon));
    m.insert("marked".into(), Value::from(trace.marked));
    let (det, model) = match outcome {
        SearchOutcome::Found(r) => {
            m.insert("peak_found".into(), Value::Bool(true));
            m.insert("t_f".into(), Value::from(r.t_f));
            m.insert("p_max".into(), json_float(r.p_max));
            m.insert("cost".into(), json_float(r.cost));
            (&r.detector, r.model)
        }
        SearchOutcome::NoPeak { detector, model, .. } => {
            m.insert("peak_found".into(), Value::Bool(false));
            m.insert("t_f".into(), Value::Null);
            m.insert("p_max".into(), Value::Null);
            m.insert("cost".into(), Value::Null);
            (detector, *model)
        }
    };
    m.insert("model".into(), Value::from(model.as_str()));
    m.insert("steps".into(), Value::from(trace.values.len().saturating_sub(1)));
    m.insert("detector".into(), detector_json(det));
    Value::Object(m)
}

pub fn write_json<W: Write>(mut out: W, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.vertices.to_string(),
            format_float(r.epsilon),
            r.k0.to_string(),
            r.t_f.to_string(),
            format_float(r.p_max),
            format_float(r.cost),
            r.peak_found.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_json(records: &[SweepRecord]) -> Value {
    Value::Array(
        records
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("n".into(), Value::from(r.n));
                m.insert("N".into(), Value::from(r.vertices));
                m.insert("epsilon".into(), json_float(r.epsilon));
                m.insert("k0".into(), Value::from(r.k0));
                m.insert("t_f".into(), Value::from(r.t_f));
                m.insert("p_max".into(), json_float(r.p_max));
                m.insert("cost".into(), json_float(r.cost));
                m.insert("peak_found".into(), Value::Bool(r.peak_found));
                Value::Object(m)
            })
            .collect(),
    )
}

/// Reads records written by [`write_sweep_csv`].
pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(SWEEP_HEADER.iter().copied()) {
        return Err(Error::Parse(format!("unexpected sweep header: {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    let field = |rec: &csv::StringRecord, i: usize| -> Result<String> {
        rec.get(i).map(str::to_owned).ok_or_else(|| Error::Parse(format!("missing column {}", SWEEP_HEADER[i])))
    };
    fn parse<T: std::str::FromStr>(s: String, what: &str) -> Result<T> {
        s.trim().parse().map_err(|_| Error::Parse(format!("bad {what}: '{s}'")))
    }
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            Ok(SweepRecord {
                n: parse(field(&rec, 0)?, "n")?,
                vertices: parse(field(&rec, 1)?, "N")?,
                epsilon: parse(field(&rec, 2)?, "epsilon")?,
                k0: parse(field(&rec, 3)?, "k0")?,
                t_f: parse(field(&rec, 4)?, "t_f")?,
                p_max: parse(field(&rec, 5)?, "p_max")?,
                cost: parse(field(&rec, 6)?, "cost")?,
                peak_found: parse(field(&rec, 7)?, "peak_found")?,
            })
        })
        .collect()
}

pub fn fit_json(fit: &FitResult) -> Value {
    let mut params = Map::new();
    for (k, v) in &fit.parameters {
        params.insert(k.clone(), json_float(*v));
    }
    let mut m = Map::new();
    m.insert("model".into(), Value::from(fit.model.clone()));
    m.insert("parameters".into(), Value::Object(params));
    m.insert("r2".into(), json_float(fit.r2));
    m.insert("points".into(), Value::from(fit.points));
    m.insert("residual_rms".into(), json_float(fit.residual_rms));
    m.insert("residual_max".into(), json_float(fit.residual_max));
    Value::Object(m)
}

pub fn optimum_json(opt: &OptimalEpsilon) -> Value {
    let mut params = Map::new();
    params.insert("epsilon_star".into(), json_float(opt.epsilon));
    params.insert("cost_star".into(), json_float(opt.cost));
    if let Some((e, c)) = opt.refined {
        params.insert("epsilon_refined".into(), json_float(e));
        params.insert("cost_refined".into(), json_float(c));
    }
    let mut m = Map::new();
    m.insert("model".into(), Value::from("optimal_epsilon"));
    m.insert("parameters".into(), Value::Object(params));
    m.insert("r2".into(), Value::Null);
    Value::Object(m)
}

pub fn write_edges_csv<W: Write>(out: W, size: NetworkSize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EDGE_HEADER).map_err(csv_err)?;
    for e in edges(size) {
        w.write_record([e.from.to_string(), e.to.to_string(), e.kind.as_str().to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_snapshot_csv<W: Write>(out: W, state: &WalkerState) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SNAPSHOT_HEADER).map_err(csv_err)?;
    let n = state.size().vertices();
    for a in 0..3 {
        for k in 0..n {
            let z = state.amplitude(a, k);
            w.write_record([a.to_string(), k.to_string(), format_float(z.re), format_float(z.im)])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::CostModel;

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(0.25), "2.5000000000000000e-1");
        assert_eq!(format_float(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_float(f64::INFINITY), "inf");
        let x = 0.1 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn trace_csv_layout() {
        let trace = ProbabilityTrace { exponent: 2, epsilon: 1.0, marked: 0, values: vec![0.25, 0.5] };
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &trace).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,p\n0,2.5000000000000000e-1\n1,5.0000000000000000e-1\n");
    }

    #[test]
    fn sweep_csv_roundtrip() {
        let recs = vec![
            SweepRecord { n: 6, vertices: 64, epsilon: 1.7, k0: 0, t_f: 12, p_max: 0.2, cost: 60.0, peak_found: true },
            SweepRecord {
                n: 6,
                vertices: 64,
                epsilon: 3.0,
                k0: 0,
                t_f: 0,
                p_max: 0.0,
                cost: f64::INFINITY,
                peak_found: false,
            },
        ];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,N,epsilon,k0,t_f,p_max,cost,peak_found\n"));
        assert_eq!(read_sweep_csv(buf.as_slice()).unwrap(), recs);
        assert!(read_sweep_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn search_json_fields() {
        let size = NetworkSize::new(4).unwrap();
        let spec = crate::coin::CoinSpec::marked(1.0, 0).unwrap();
        let out = crate::search::run_search(size, &spec, &PeakDetectorConfig::default(), CostModel::Repetition).unwrap();
        let v = search_json(&out);
        for key in ["n", "epsilon", "marked", "t_f", "p_max", "cost", "model", "detector"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["model"], "repetition");
        assert_eq!(v["detector"]["window"], 5);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"epsilon\":1.0000000000000000e+0"));
    }

    #[test]
    fn edges_csv_rows() {
        let mut buf = Vec::new();
        write_edges_csv(&mut buf, NetworkSize::new(2).unwrap()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,neighbor,edge_type");
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[3], "0,2,smallworld");
    }

    #[test]
    fn snapshot_csv_rows() {
        let size = NetworkSize::new(2).unwrap();
        let st = WalkerState::basis(size, 1, 3).unwrap();
        let mut buf = Vec::new();
        write_snapshot_csv(&mut buf, &st).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 13);
        assert!(text.contains("\n1,3,1.0000000000000000e0,0.0000000000000000e0\n"));
    }
}
