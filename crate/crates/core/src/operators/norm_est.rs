//! Lower bounds for ‖K‖ on L^p(x^γ) by nonlinear power iteration from several starts.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};
use crate::weighted_spaces::{GradedGrid, GridFunction, PowerWeight};

pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[C64]) -> Vec<C64>;
    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64>;
}

/// Row-major dense matrix; purely real matrices take a real path.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    n: usize,
    data: Vec<C64>,
    real: Option<Vec<f64>>,
}

impl DenseOperator {
    pub fn new(n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(LabError::Argument(format!("matrix has {} entries, expected {}", data.len(), n * n)));
        }
        let real = data.iter().all(|c| c.im == 0.0).then(|| data.iter().map(|c| c.re).collect());
        Ok(Self { n, data, real })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = C64::new(1.0, 0.0);
        }
        Self::new(n, data).expect("square")
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    /// self · other.
    pub fn compose(&self, other: &DenseOperator) -> DenseOperator {
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let o = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    o[j] += a * row[j];
                }
            }
        }
        DenseOperator::new(n, out).expect("square")
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        match &self.real {
            Some(m) => (0..n)
                .map(|i| {
                    let row = &m[i * n..(i + 1) * n];
                    row.iter().zip(v).fold(C64::new(0.0, 0.0), |acc, (a, x)| acc + x * *a)
                })
                .collect(),
            None => (0..n)
                .map(|i| {
                    let row = &self.data[i * n..(i + 1) * n];
                    row.iter().zip(v).fold(C64::new(0.0, 0.0), |acc, (a, x)| acc + a * x)
                })
                .collect(),
        }
    }

    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let vi = v[i];
            match &self.real {
                Some(m) => {
                    for j in 0..n {
                        out[j] += vi * m[i * n + j];
                    }
                }
                None => {
                    for j in 0..n {
                        out[j] += self.data[i * n + j].conj() * vi;
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct NormEstimate {
    pub value: f64,
    pub maximizer: GridFunction,
    /// Label of the start the maximizer came from.
    pub start: String,
    pub per_start: Vec<(String, f64)>,
}

const MAX_ITERATIONS: usize = 300;
const BOUNDARY_BUMPS: usize = 3;

fn weighted_p(d: &[f64], v: &[C64], p: f64) -> f64 {
    crate::quad::compensated_sum(d.iter().zip(v).map(|(di, vi)| di * vi.norm().powf(p)))
}

fn psi(v: C64, q: f64) -> C64 {
    let a = v.norm();
    if a == 0.0 { C64::new(0.0, 0.0) } else { v * a.powf(q - 2.0) }
}

/// Seed of random start k is `PROBE_SEED_BASE + k`.
pub const PROBE_SEED_BASE: u64 = 0x5eed_0000;

/// Estimates sup ‖Kf‖/‖f‖ over grid functions, in L^p(w) with the grid quadrature.
pub fn operator_norm_estimate(
    op: &dyn LinearOperator,
    grid: &Arc<GradedGrid>,
    p: f64,
    w: &PowerWeight,
    probes: usize,
) -> Result<NormEstimate> {
    let n = grid.n;
    if op.dim() != n {
        return Err(LabError::Argument(format!("operator acts on {} unknowns, grid has {n}", op.dim())));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::Argument(format!("p = {p} must lie in (1, ∞)")));
    }
    let d: Vec<f64> = (0..n).map(|i| grid.quad_weights[i] * w.eval(grid.nodes[i])).collect();
    let q = p / (p - 1.0);
    let ratio = |f: &[C64], kf: &[C64]| {
        let den = weighted_p(&d, f, p);
        if den == 0.0 { 0.0 } else { (weighted_p(&d, kf, p) / den).powf(1.0 / p) }
    };

    let mut starts: Vec<(String, Vec<C64>)> = Vec::new();
    starts.push(("constant".into(), vec![C64::new(1.0, 0.0); n]));
    for b in 0..BOUNDARY_BUMPS.min(n) {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[b] = C64::new(1.0, 0.0);
        starts.push((format!("boundary_bump_{}", b + 1), e));
    }
    for k in 0..probes {
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED_BASE + k as u64);
        let v = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        starts.push((format!("random_{k}"), v));
    }

    let mut best: Option<(f64, Vec<C64>, String)> = None;
    let mut per_start = Vec::with_capacity(starts.len());
    for (label, mut f) in starts {
        let mut kf = op.apply(&f);
        let mut r = ratio(&f, &kf);
        for _ in 0..MAX_ITERATIONS {
            let z: Vec<C64> = kf.iter().zip(&d).map(|(y, di)| psi(*y, p) * *di).collect();
            let v = op.apply_adjoint(&z);
            let g: Vec<C64> = v.iter().zip(&d).map(|(vi, di)| psi(vi / *di, q)).collect();
            let scale = weighted_p(&d, &g, p).powf(1.0 / p);
            if !(scale > 0.0 && scale.is_finite()) {
                break;
            }
            let g: Vec<C64> = g.iter().map(|c| c / scale).collect();
            let kg = op.apply(&g);
            let rg = ratio(&g, &kg);
            if !(rg > r * (1.0 + 1e-12)) {
                if rg > r {
                    f = g;
                    kf = kg;
                    r = rg;
                }
                break;
            }
            f = g;
            kf = kg;
            r = rg;
        }
        per_start.push((label.clone(), r));
        if best.as_ref().map_or(true, |b| r > b.0) {
            best = Some((r, f, label));
        }
    }
    let (value, f, start) = best.expect("at least one start");
    Ok(NormEstimate { value, maximizer: GridFunction::new(grid.clone(), f, 1)?, start, per_start })
}
