//! Result records shared by the checks and the sweep runner.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::weighted_spaces::GradedGrid;

/// Growth needed per refinement level to call a sequence divergent.
pub const DIVERGENCE_FACTOR: f64 = 1.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Stable,
    Growing,
    Shrinking,
}

impl Trend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Stable => "stable",
            Trend::Growing => "growing",
            Trend::Shrinking => "shrinking",
        }
    }
}

/// Growing when the last three levels each rise by at least 25%, shrinking when they each
/// fall by the same factor, stable otherwise.
pub fn classify_trend(values: &[f64]) -> Trend {
    if values.len() < 3 {
        return Trend::Stable;
    }
    let tail = &values[values.len() - 3..];
    if tail.iter().any(|v| v.is_infinite()) && tail[0].is_finite() {
        return Trend::Growing;
    }
    if tail.windows(2).all(|w| w[1] >= DIVERGENCE_FACTOR * w[0] && w[1] > 0.0) {
        Trend::Growing
    } else if tail.windows(2).all(|w| w[1] * DIVERGENCE_FACTOR <= w[0]) {
        Trend::Shrinking
    } else {
        Trend::Stable
    }
}

/// Largest relative change between consecutive levels.
pub fn max_relative_change(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| if w[0] == 0.0 && w[1] == 0.0 { 0.0 } else { (w[1] - w[0]).abs() / w[0].abs().max(w[1].abs()) })
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "expected-divergence-confirmed")]
    ExpectedDivergenceConfirmed,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::ExpectedDivergenceConfirmed => "expected-divergence-confirmed",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn is_ok(&self) -> bool {
        !matches!(self, Outcome::Fail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub n: usize,
    #[serde(rename = "X_max")]
    pub x_max: f64,
    pub grading: f64,
}

impl From<&GradedGrid> for GridInfo {
    fn from(g: &GradedGrid) -> Self {
        Self { n: g.n, x_max: g.x_max, grading: g.grading_exponent }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    pub value: f64,
    pub bound: Option<f64>,
    pub pass: Outcome,
    pub grid: GridInfo,
}

impl NormReport {
    pub fn new(check: &str, grid: GridInfo, value: f64) -> Self {
        Self { check: check.into(), params: BTreeMap::new(), value, bound: None, pass: Outcome::Pass, grid }
    }

    pub fn param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.into(), v);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Value(f64),
    Finite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    /// Ratio at the finest level.
    pub ratio: f64,
    pub reference_bound: Bound,
    pub witness: String,
    pub refinement_trend: Trend,
    pub levels: Vec<usize>,
    pub per_level: Vec<f64>,
}

impl RatioReport {
    pub fn from_levels(levels: Vec<usize>, per_level: Vec<f64>, reference_bound: Bound, witness: String) -> Self {
        let ratio = *per_level.last().unwrap_or(&0.0);
        let refinement_trend = classify_trend(&per_level);
        Self { ratio, reference_bound, witness, refinement_trend, levels, per_level }
    }

    pub fn within_bound(&self, slack: f64) -> bool {
        match self.reference_bound {
            Bound::Value(b) => self.ratio <= b * (1.0 + slack),
            Bound::Finite => self.ratio.is_finite() && self.refinement_trend != Trend::Growing,
        }
    }
}
