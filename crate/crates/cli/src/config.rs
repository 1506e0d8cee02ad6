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

//! `key = value` defaults files and range/list arguments.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::UsageError;

/// Defaults read from a config file. Keys are the long flag names without
/// the leading dashes (`epsilon`, `horizon-factor`, ...).
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("config line {}: expected 'key = value'", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(UsageError(format!("config line {}: unknown key '{key}'", lineno + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, UsageError> {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| UsageError(format!("config key '{key}': cannot parse '{v}'"))))
            .transpose()
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

const KNOWN_KEYS: &[&str] = &[
    "n",
    "epsilon",
    "marked",
    "window",
    "prominence",
    "horizon-factor",
    "cost-model",
    "grid",
    "n-range",
    "steps",
    "threshold",
    "format",
    "out",
];

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_epsilon_grid(spec: &str) -> Result<Vec<f64>, UsageError> {
    let bad = || UsageError(format!("invalid grid '{spec}'"));
    if spec.contains(':') {
        let parts: Vec<f64> =
            spec.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if step.is_nan() || step <= 0.0 || stop < start || !start.is_finite() || !stop.is_finite() {
            return Err(UsageError(format!("empty or inverted grid '{spec}'")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // Round to 12 decimals so that 0.2 + 2 * 0.2 prints as 0.6.
        Ok((0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
    } else {
        let list: Vec<f64> = spec
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if list.is_empty() {
            return Err(UsageError(format!("empty grid '{spec}'")));
        }
        Ok(list)
    }
}

/// `lo:hi` (inclusive, ascending) or a comma-separated list of exponents.
pub fn parse_exponents(spec: &str) -> Result<Vec<u32>, UsageError> {
    let bad = || UsageError(format!("invalid n range '{spec}'"));
    let list: Vec<u32> = if let Some((lo, hi)) = spec.split_once(':') {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(UsageError(format!("empty n range '{spec}'")));
        }
        (lo..=hi).collect()
    } else {
        spec.split(',').filter(|s| !s.trim().is_empty()).map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if list.is_empty() {
        return Err(UsageError(format!("empty n range '{spec}'")));
    }
    let mut sorted = list.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != list.len() {
        return Err(UsageError(format!("repeated exponent in '{spec}'")));
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ranges() {
        let g = parse_epsilon_grid("0.2:2.8:0.2").unwrap();
        assert_eq!(g.len(), 14);
        assert_eq!(g[2], 0.6);
        assert_eq!(*g.last().unwrap(), 2.8);
        assert_eq!(parse_epsilon_grid("1.0").unwrap(), vec![1.0]);
        assert_eq!(parse_epsilon_grid("0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert!(parse_epsilon_grid("2:1:0.1").is_err());
        assert!(parse_epsilon_grid("1:2:0").is_err());
        assert!(parse_epsilon_grid("1:2").is_err());
        assert!(parse_epsilon_grid("").is_err());
    }

    #[test]
    fn exponent_ranges() {
        assert_eq!(parse_exponents("6:12").unwrap(), (6..=12).collect::<Vec<_>>());
        assert_eq!(parse_exponents("8").unwrap(), vec![8]);
        assert!(parse_exponents("12:6").is_err());
        assert!(parse_exponents("6,7,6").is_err());
        assert!(parse_exponents("x").is_err());
    }

    #[test]
    fn config_file() {
        let cfg = ConfigFile::parse("# defaults\nepsilon = 1.7\nhorizon_factor=30\n\ncost-model = amplification\n").unwrap();
        assert_eq!(cfg.get::<f64>("epsilon").unwrap(), Some(1.7));
        assert_eq!(cfg.get::<f64>("horizon-factor").unwrap(), Some(30.0));
        assert_eq!(cfg.raw("cost-model"), Some("amplification"));
        assert_eq!(cfg.get::<u32>("n").unwrap(), None);
        assert!(ConfigFile::parse("bogus = 1").is_err());
        assert!(ConfigFile::parse("epsilon 1").is_err());
        assert!(ConfigFile::parse("n = x").unwrap().get::<u32>("n").is_err());
    }
}
