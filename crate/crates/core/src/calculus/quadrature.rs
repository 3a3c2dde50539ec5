use serde::{Deserialize, Serialize};

use crate::error::{PhantomError, Result};

/// Tolerances and limits for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panel bisections before giving up.
    pub max_subdivisions: usize,
    /// Cut-off used for infinite endpoints when the path gives no hint.
    pub infinite_truncation: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 1 << 16,
            infinite_truncation: 50.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validated(self) -> Result<Self> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(PhantomError::BadParameter("tolerances must be positive".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(PhantomError::BadParameter("max_subdivisions must be >= 1".into()));
        }
        if !(self.infinite_truncation > 0.0) {
            return Err(PhantomError::BadParameter("infinite_truncation must be positive".into()));
        }
        Ok(self)
    }
}

// Nonnegative nodes of the 15-point Gauss-Legendre rule with their weights.
const GL15: [(f64, f64); 8] = [
    (0.0, 0.2025782419255609),
    (0.20119409399743451, 0.19843148532711125),
    (0.3941513470775634, 0.18616100001556188),
    (0.5709721726085388, 0.16626920581699378),
    (0.7244177313601701, 0.1395706779261539),
    (0.8482065834104272, 0.10715922046717177),
    (0.937273392400706, 0.07036604748810807),
    (0.9879925180204854, 0.030753241996118647),
];

fn panel<F: Fn(f64) -> [f64; 2]>(f: &F, lo: f64, hi: f64) -> [f64; 2] {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut acc = [0.0; 2];
    for (k, &(x, w)) in GL15.iter().enumerate() {
        let mut add = |v: [f64; 2]| {
            acc[0] += w * v[0];
            acc[1] += w * v[1];
        };
        add(f(c + h * x));
        if k > 0 {
            add(f(c - h * x));
        }
    }
    [acc[0] * h, acc[1] * h]
}

/// Adaptive composite 15-point Gauss-Legendre integration of a pair of
/// real functions over a finite interval. A panel is accepted when its
/// estimate agrees with the sum of its two halves to within the tolerance,
/// checked separately for each component.
pub fn integrate_pair<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<[f64; 2]>
where
    F: Fn(f64) -> [f64; 2],
{
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(PhantomError::BadParameter(format!(
            "quadrature bounds must be finite, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok([0.0, 0.0]);
    }
    if lo > hi {
        let r = integrate_pair(f, hi, lo, cfg)?;
        return Ok([-r[0], -r[1]]);
    }
    let width = hi - lo;
    let mut stack: Vec<(f64, f64, [f64; 2])> = Vec::new();
    const START: usize = 4;
    for k in 0..START {
        let a = lo + width * k as f64 / START as f64;
        let b = if k + 1 == START { hi } else { lo + width * (k + 1) as f64 / START as f64 };
        stack.push((a, b, panel(&f, a, b)));
    }
    let mut total = [0.0f64; 2];
    let mut subdivisions = 0usize;
    while let Some((a, b, whole)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = panel(&f, a, m);
        let right = panel(&f, m, b);
        let refined = [left[0] + right[0], left[1] + right[1]];
        let share = (b - a) / width;
        let ok = (0..2).all(|c| {
            let err = (whole[c] - refined[c]).abs();
            err <= (cfg.abs_tol * share).max(cfg.rel_tol * refined[c].abs())
        });
        if ok || m <= a || m >= b {
            if !(refined[0].is_finite() && refined[1].is_finite()) {
                return Err(PhantomError::QuadratureFailure { lo: a, hi: b, subdivisions });
            }
            total[0] += refined[0];
            total[1] += refined[1];
            continue;
        }
        subdivisions += 1;
        if subdivisions > cfg.max_subdivisions {
            return Err(PhantomError::QuadratureFailure { lo: a, hi: b, subdivisions });
        }
        stack.push((a, m, left));
        stack.push((m, b, right));
    }
    Ok(total)
}

/// Scalar convenience wrapper around [`integrate_pair`].
pub fn integrate<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    Ok(integrate_pair(|t| [f(t), 0.0], lo, hi, cfg)?[0])
}
