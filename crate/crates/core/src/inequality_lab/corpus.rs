//! Test functions: the versioned corpus file and closure-backed profiles.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::weighted_spaces::{make_graded_grid, GradedGrid, GridFunction};

/// A function of x ≥ 0 that can be sampled on grids of any size.
pub trait Profile: Send + Sync {
    fn name(&self) -> &str;
    fn eval(&self, x: f64) -> f64;
    /// Support [lo, hi]; hi is also the default computational extent.
    fn support(&self) -> (f64, f64);

    fn sample(&self, grid: &Arc<GradedGrid>) -> GridFunction {
        GridFunction::from_fn(grid, |x| self.eval(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    PowExp { a: f64, b: f64, r: f64 },
    XGauss { a: f64, r: f64 },
    Bump { c: f64, w: f64 },
    SinExp { r: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusFunction {
    pub name: String,
    pub kind: Kind,
    pub support: (f64, f64),
}

impl Profile for CorpusFunction {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            return 0.0;
        }
        match self.kind {
            Kind::PowExp { a, b, r } => {
                let s = x / r;
                s.powf(a) * (-b * s).exp()
            }
            Kind::XGauss { a, r } => {
                let s = x / r;
                s * (-a * s * s).exp()
            }
            Kind::Bump { c, w } => {
                let s = (x - c) / w;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - s * s)).exp()
                }
            }
            Kind::SinExp { r } => (x / r).sin() * (-x / r).exp(),
        }
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }
}

impl CorpusFunction {
    /// Natural length scale, used to size grids.
    pub fn scale(&self) -> f64 {
        match self.kind {
            Kind::PowExp { r, .. } | Kind::XGauss { r, .. } | Kind::SinExp { r } => r,
            Kind::Bump { w, .. } => w,
        }
    }

    pub fn vanishes_at_zero(&self) -> bool {
        self.eval(0.0) == 0.0
    }
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut m = BTreeMap::new();
    for kv in s.split(',').filter(|t| !t.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| LabError::Data(format!("bad parameter `{kv}`")))?;
        let v: f64 = v.parse().map_err(|_| LabError::Data(format!("bad number in `{kv}`")))?;
        m.insert(k.to_string(), v);
    }
    Ok(m)
}

fn parse_support(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once("..").ok_or_else(|| LabError::Data(format!("support `{s}` is not lo..hi")))?;
    let lo: f64 = a.parse().map_err(|_| LabError::Data(format!("bad support `{s}`")))?;
    let hi: f64 = b.parse().map_err(|_| LabError::Data(format!("bad support `{s}`")))?;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(LabError::Data(format!("support `{s}` must satisfy 0 <= lo < hi < inf")));
    }
    Ok((lo, hi))
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusFunction>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(LabError::Data(format!("corpus line {}: expected 4 fields, got {}", ln + 1, fields.len())));
        }
        let p = parse_params(fields[2])?;
        let get = |k: &str| {
            p.get(k).copied().ok_or_else(|| LabError::Data(format!("corpus line {}: missing `{k}`", ln + 1)))
        };
        let kind = match fields[1] {
            "powexp" => Kind::PowExp { a: get("a")?, b: get("b")?, r: get("r")? },
            "xgauss" => Kind::XGauss { a: get("a")?, r: get("r")? },
            "bump" => Kind::Bump { c: get("c")?, w: get("w")? },
            "sinexp" => Kind::SinExp { r: get("r")? },
            k => return Err(LabError::Data(format!("corpus line {}: unknown kind `{k}`", ln + 1))),
        };
        out.push(CorpusFunction { name: fields[0].to_string(), kind, support: parse_support(fields[3])? });
    }
    Ok(out)
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusFunction>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

/// The corpus shipped with the crate.
pub fn default_corpus() -> Vec<CorpusFunction> {
    parse_corpus(include_str!("../../data/corpus.txt")).expect("bundled corpus parses")
}

/// A profile backed by a closure.
pub struct FnProfile {
    pub name: String,
    pub f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub support: (f64, f64),
}

impl FnProfile {
    pub fn new(name: &str, support: (f64, f64), f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Box::new(f), support }
    }
}

impl Profile for FnProfile {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }
}

/// Grid levels used for refinement trends.
#[derive(Clone, Debug, PartialEq)]
pub struct LabGrids {
    pub levels: Vec<usize>,
    pub grading: f64,
    /// Overrides the profile's support end as the grid extent.
    pub x_max: Option<f64>,
}

impl Default for LabGrids {
    fn default() -> Self {
        Self { levels: vec![128, 256, 512], grading: 2.0, x_max: None }
    }
}

impl LabGrids {
    pub fn grids_for(&self, u: &dyn Profile) -> Result<Vec<Arc<GradedGrid>>> {
        if self.levels.len() < 3 {
            return Err(LabError::Argument("refinement trends need at least 3 grid levels".into()));
        }
        let x_max = self.x_max.unwrap_or(u.support().1);
        self.levels.iter().map(|&n| make_graded_grid(n, x_max, self.grading).map(Arc::new)).collect()
    }
}
