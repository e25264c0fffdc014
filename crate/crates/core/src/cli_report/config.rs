use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::checks::{find_check, known_ids, PARAM_NAMES};
use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Finest level; refinement studies use n/4, n/2, n.
    pub n: usize,
    #[serde(rename = "X_max")]
    pub x_max: f64,
    pub grading: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n: 256, x_max: 40.0, grading: 2.0 }
    }
}

impl GridSpec {
    pub fn levels(&self) -> Vec<usize> {
        vec![self.n / 4, self.n / 2, self.n]
    }
}

/// `check` alone matches every row of that check; `check:gamma=3&p=2` matches rows whose
/// parameters equal all listed values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selector {
    pub check: String,
    pub params: BTreeMap<String, f64>,
}

impl Selector {
    pub fn matches(&self, check: &str, params: &BTreeMap<String, f64>) -> bool {
        self.check == check && self.params.iter().all(|(k, v)| params.get(k).is_some_and(|x| (x - v).abs() <= 1e-12 * v.abs().max(1.0)))
    }

    fn parse(s: &str) -> Result<Self> {
        let (check, rest) = match s.split_once(':') {
            Some((c, r)) => (c.trim(), Some(r)),
            None => (s.trim(), None),
        };
        let mut params = BTreeMap::new();
        if let Some(rest) = rest {
            for cond in rest.split('&') {
                let (k, v) = cond
                    .split_once('=')
                    .ok_or_else(|| LabError::Config(format!("selector condition `{cond}` is not key=value")))?;
                params.insert(k.trim().to_string(), parse_number(v.trim())?);
            }
        }
        Ok(Self { check: check.to_string(), params })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub checks: Vec<String>,
    pub lattice: BTreeMap<String, Vec<f64>>,
    pub grid: GridSpec,
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: PathBuf,
    pub expect_divergent: Vec<Selector>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            checks: Vec::new(),
            lattice: BTreeMap::new(),
            grid: GridSpec::default(),
            tolerances: BTreeMap::new(),
            output_dir: PathBuf::from("heatcalc-out"),
            expect_divergent: Vec::new(),
        }
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| LabError::Config(format!("`{s}` is not a number (value lists are explicit, no ranges)")))
}

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl SweepConfig {
    /// One `key = value[, value...]` per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| LabError::Config(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key.split_once('.') {
                None if key == "checks" => cfg.checks = list(value).map(String::from).collect(),
                None if key == "output_dir" => cfg.output_dir = PathBuf::from(value),
                Some(("lattice", name)) => {
                    let vals = list(value).map(parse_number).collect::<Result<Vec<_>>>().map_err(|e| err(e.to_string()))?;
                    cfg.lattice.insert(name.to_string(), vals);
                }
                Some(("grid", field)) => {
                    let v = parse_number(value).map_err(|e| err(e.to_string()))?;
                    match field {
                        "n" => cfg.grid.n = v as usize,
                        "X_max" => cfg.grid.x_max = v,
                        "grading" => cfg.grid.grading = v,
                        _ => return Err(err(format!("unknown grid field `{field}` (n, X_max, grading)"))),
                    }
                }
                Some(("tolerances", name)) => {
                    cfg.tolerances.insert(name.to_string(), parse_number(value).map_err(|e| err(e.to_string()))?);
                }
                Some(("expect", "divergent")) => {
                    cfg.expect_divergent = list(value).map(Selector::parse).collect::<Result<Vec<_>>>()?;
                }
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Check ids exist, parameter names are known, the grid is usable and every lattice
    /// point not tagged as expected-divergent meets the operation's preconditions.
    pub fn validate(&self) -> Result<()> {
        for id in &self.checks {
            if find_check(id).is_none() {
                return Err(LabError::Config(format!("unknown check `{id}`; known checks: {}", known_ids().join(", "))));
            }
        }
        for sel in &self.expect_divergent {
            if find_check(&sel.check).is_none() {
                return Err(LabError::Config(format!("expect.divergent names unknown check `{}`", sel.check)));
            }
        }
        for (name, vals) in &self.lattice {
            if !PARAM_NAMES.contains(&name.as_str()) {
                return Err(LabError::Config(format!("unknown lattice parameter `{name}`; known: {}", PARAM_NAMES.join(", "))));
            }
            if vals.is_empty() || vals.iter().any(|v| !v.is_finite()) {
                return Err(LabError::Config(format!("lattice.{name} needs finite values")));
            }
        }
        if self.grid.n < 32 || !(self.grid.x_max > 0.0) || !(self.grid.grading >= 1.0) {
            return Err(LabError::Config(format!("grid needs n >= 32, X_max > 0 and grading >= 1, got {:?}", self.grid)));
        }
        for id in &self.checks {
            let check = find_check(id).expect("validated above");
            for point in check.points(&self.lattice) {
                if self.expect_divergent.iter().any(|s| s.matches(id, &point)) {
                    continue;
                }
                (check.precondition)(&point).map_err(|e| LabError::Config(format!("{id} at {point:?}: {e}")))?;
            }
        }
        Ok(())
    }
}
