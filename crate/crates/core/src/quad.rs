//! Small quadrature toolbox: compensated sums, Gauss-Legendre rules and an
//! adaptive Gauss-Kronrod integrator.

/// Neumaier summation. Order of `add` calls fixes the result bit for bit.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = CompensatedSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre recurrence).
/// Three-point Gauss–Legendre rule on [-1, 1].
pub(crate) const GL3_X: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
pub(crate) const GL3_W: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    if m == 1 {
        x[0] = 0.0;
        w[0] = 2.0;
    }
    (x, w)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive G7K15 on [a, b]. Returns (value, error estimate).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let mut intervals = vec![(a, b, gk15(&f, a, b))];
    for _ in 0..2000 {
        let total: f64 = intervals.iter().map(|iv| iv.2 .0).sum();
        let err: f64 = intervals.iter().map(|iv| iv.2 .1).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (k, _) = intervals
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, iv)| if iv.2 .1 > best.1 { (i, iv.2 .1) } else { best });
        let (lo, hi, _) = intervals.swap_remove(k);
        let mid = 0.5 * (lo + hi);
        intervals.push((lo, mid, gk15(&f, lo, mid)));
        intervals.push((mid, hi, gk15(&f, mid, hi)));
    }
    intervals.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let val = compensated_sum(intervals.iter().map(|iv| iv.2 .0));
    let err = intervals.iter().map(|iv| iv.2 .1).sum();
    (val, err)
}

/// Integrate over consecutive breakpoints.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64) -> f64 {
    compensated_sum(breaks.windows(2).map(|w| integrate(&f, w[0], w[1], abs_tol, rel_tol).0))
}

/// Least-squares line fit, returns (slope, intercept, rms residual).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - icept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    (slope, icept, rms)
}
