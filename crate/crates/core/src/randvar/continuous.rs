use std::fmt;
use std::sync::Arc;

use super::{RandomVariable, Threshold};
use crate::calculus::{finite_bounds, integrate_along, Path, PathPoint, QuadratureConfig};
use crate::error::{PhantomError, Result};
use crate::ring::{OrderKind, Phantom};

/// A density evaluated at a sampled path position.
///
/// The value returned is `f_X` at the point; integration multiplies it by
/// the tangent. Densities that want the tangent normalized away can read
/// `dz` from the path point.
pub type DensityFn = Arc<dyn Fn(&PathPoint) -> Phantom + Send + Sync>;

/// Number of grid cells used to probe order monotonicity along the path and
/// to locate sublevel sets when the path is not monotone.
const GRID: usize = 1024;
const BISECTIONS: usize = 80;

/// How a sublevel set of the path was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SublevelMethod {
    /// The order is monotone along the path; one boundary found by bisection.
    Bisection,
    /// The order is not monotone; boundaries found cell by cell on a grid.
    Grid,
}

/// A phantom random variable carried by a path with a density.
#[derive(Clone)]
pub struct ContinuousPRV {
    path: Path,
    density: DensityFn,
    cfg: QuadratureConfig,
}

impl fmt::Debug for ContinuousPRV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousPRV")
            .field("path", &self.path)
            .field("cfg", &self.cfg)
            .finish()
    }
}

impl ContinuousPRV {
    /// Checks that the real term of the density is nonnegative on a grid
    /// and that `int f(z) dz` over the path is `1 + p*0` within `1e-6`.
    pub fn new(
        path: Path,
        density: impl Fn(&PathPoint) -> Phantom + Send + Sync + 'static,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        let x = ContinuousPRV::unnormalized(path, density, cfg)?;
        let total = x.normalization()?;
        if !total.approx_eq(Phantom::ONE, 1e-6) {
            return Err(PhantomError::InvalidVariable(format!(
                "density integrates to {total} along the path, expected 1 + p*0"
            )));
        }
        Ok(x)
    }

    /// Skips the normalization check, keeping the nonnegativity check.
    pub fn unnormalized(
        path: Path,
        density: impl Fn(&PathPoint) -> Phantom + Send + Sync + 'static,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        let cfg = cfg.validated()?;
        let x = ContinuousPRV { path, density: Arc::new(density), cfg };
        let (lo, hi) = x.bounds()?;
        for k in 0..=GRID {
            let t = lo + (hi - lo) * k as f64 / GRID as f64;
            let f = (x.density)(&x.path.sample_unchecked(t));
            if !(f.re >= 0.0) {
                return Err(PhantomError::InvalidVariable(format!(
                    "density has negative or undefined real term {f} at t = {t}"
                )));
            }
        }
        Ok(x)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    pub fn with_config(mut self, cfg: QuadratureConfig) -> Result<Self> {
        self.cfg = cfg.validated()?;
        Ok(self)
    }

    /// The density at parameter `t`.
    pub fn density_at(&self, t: f64) -> Result<Phantom> {
        Ok((self.density)(&self.path.sample(t)?))
    }

    /// The integrand `f(g(t)) g'(t)` at parameter `t`.
    pub fn weighted_density_at(&self, t: f64) -> Result<Phantom> {
        let p = self.path.sample(t)?;
        Ok((self.density)(&p) * p.dz)
    }

    fn bounds(&self) -> Result<(f64, f64)> {
        finite_bounds(&self.path, self.path.domain(), &self.cfg)
    }

    /// `int g(z) f(z) dz` over the parameter intervals given.
    fn integrate_weighted(&self, intervals: &[(f64, f64)], g: &dyn Fn(Phantom) -> Phantom) -> Result<Phantom> {
        intervals
            .iter()
            .map(|&iv| integrate_along(&self.path, iv, &self.cfg, |p| g(p.z) * (self.density)(p) * p.dz))
            .sum()
    }

    /// Total mass `int f(z) dz` over the whole path.
    pub fn normalization(&self) -> Result<Phantom> {
        self.integrate_weighted(&[self.bounds()?], &|_| Phantom::ONE)
    }

    /// Whether `ord` is monotone nondecreasing (`Some(true)`) or
    /// nonincreasing (`Some(false)`) along the path, probed on a grid.
    fn monotone_direction(&self, ord: OrderKind, lo: f64, hi: f64) -> Option<bool> {
        let pts: Vec<Phantom> = (0..=GRID)
            .map(|k| self.path.point_unchecked(lo + (hi - lo) * k as f64 / GRID as f64))
            .collect();
        let up = pts.windows(2).all(|w| ord.compare(w[0], w[1]).is_le());
        if up {
            return Some(true);
        }
        let down = pts.windows(2).all(|w| ord.compare(w[0], w[1]).is_ge());
        down.then_some(false)
    }

    fn boundary(&self, pred: &dyn Fn(f64) -> bool, mut inside: f64, mut outside: f64) -> f64 {
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if pred(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    }

    /// Parameter intervals where `pred` holds.
    fn level_set(&self, pred: &dyn Fn(f64) -> bool, ord: OrderKind) -> Result<(Vec<(f64, f64)>, SublevelMethod)> {
        let (lo, hi) = self.bounds()?;
        match self.monotone_direction(ord, lo, hi) {
            Some(_) => {
                let (a, b) = (pred(lo), pred(hi));
                let iv = match (a, b) {
                    (true, true) => vec![(lo, hi)],
                    (false, false) => vec![],
                    (true, false) => vec![(lo, self.boundary(pred, lo, hi))],
                    (false, true) => vec![(self.boundary(pred, hi, lo), hi)],
                };
                Ok((iv, SublevelMethod::Bisection))
            }
            None => {
                let mut out: Vec<(f64, f64)> = Vec::new();
                let mut start: Option<f64> = None;
                let mut prev_t = lo;
                let mut prev = pred(lo);
                if prev {
                    start = Some(lo);
                }
                for k in 1..=GRID {
                    let t = lo + (hi - lo) * k as f64 / GRID as f64;
                    let cur = pred(t);
                    if cur != prev {
                        if cur {
                            start = Some(self.boundary(pred, t, prev_t));
                        } else if let Some(s) = start.take() {
                            out.push((s, self.boundary(pred, prev_t, t)));
                        }
                    }
                    prev = cur;
                    prev_t = t;
                }
                if let Some(s) = start {
                    out.push((s, hi));
                }
                Ok((out, SublevelMethod::Grid))
            }
        }
    }

    /// Parameter intervals where the path point is `<= z` under `ord`.
    pub fn sublevel_intervals(&self, z: Phantom, ord: OrderKind) -> Result<(Vec<(f64, f64)>, SublevelMethod)> {
        let pred = |t: f64| ord.compare(self.path.point_unchecked(t), z).is_le();
        self.level_set(&pred, ord)
    }

    /// `P(X <= z)` under `ord`: the density integrated over the sublevel set.
    pub fn cdf(&self, z: impl Into<Threshold>, ord: OrderKind) -> Result<Phantom> {
        let ord = ord.validated()?.require_probability_grade()?;
        match z.into() {
            Threshold::NegInfinity => Ok(Phantom::ZERO),
            Threshold::PosInfinity => self.normalization(),
            Threshold::At(z) => {
                let (iv, _) = self.sublevel_intervals(z, ord)?;
                self.integrate_weighted(&iv, &|_| Phantom::ONE)
            }
        }
    }

    fn extremal_point(&self, intervals: &[(f64, f64)], ord: OrderKind, want_max: bool) -> Result<Phantom> {
        let (lo, hi) = self.bounds()?;
        let step = (hi - lo) / GRID as f64;
        let mut best: Option<(Phantom, f64)> = None;
        for &(a, b) in intervals {
            let mut ts = vec![a, b];
            let mut t = lo + ((a - lo) / step).ceil() * step;
            while t < b {
                ts.push(t);
                t += step;
            }
            for t in ts {
                let p = self.path.point_unchecked(t);
                let better = match best {
                    None => true,
                    Some((q, s)) => {
                        let c = ord.compare(p, q);
                        let c = if want_max { c } else { reverse(c) };
                        c == crate::ring::Comparison::Greater
                            || (c == crate::ring::Comparison::Equivalent && (if want_max { t > s } else { t < s }))
                    }
                };
                if better {
                    best = Some((p, t));
                }
            }
        }
        best.map(|(p, _)| p).ok_or(PhantomError::EmptyRange)
    }

    /// The largest path point (under `ord`, then by parameter) that is
    /// `<= z`.
    pub fn xi_sup(&self, z: Phantom, ord: OrderKind) -> Result<Phantom> {
        let ord = ord.validated()?;
        let (iv, _) = self.sublevel_intervals(z, ord)?;
        self.extremal_point(&iv, ord, true)
    }

    /// The smallest path point (under `ord`, then by parameter) that is
    /// `>= z`.
    pub fn xi_inf(&self, z: Phantom, ord: OrderKind) -> Result<Phantom> {
        let ord = ord.validated()?;
        let pred = |t: f64| ord.compare(self.path.point_unchecked(t), z).is_ge();
        let (iv, _) = self.level_set(&pred, ord)?;
        self.extremal_point(&iv, ord, false)
    }
}

fn reverse(c: crate::ring::Comparison) -> crate::ring::Comparison {
    use crate::ring::Comparison::*;
    match c {
        Less => Greater,
        Greater => Less,
        Equivalent => Equivalent,
    }
}

impl RandomVariable for ContinuousPRV {
    fn moment(&self, n: u32) -> Result<Phantom> {
        let n = n as i32;
        self.integrate_weighted(&[self.bounds()?], &|z| z.map_components(|x| x.powi(n)))
    }

    fn expect_fn(&self, g: &dyn Fn(Phantom) -> Phantom) -> Result<Phantom> {
        self.integrate_weighted(&[self.bounds()?], g)
    }

    fn mgf(&self, zeta: Phantom) -> Result<Phantom> {
        self.integrate_weighted(&[self.bounds()?], &|z| (zeta * z).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exponential(lambda: f64) -> ContinuousPRV {
        let path = Path::real_line(0.0, 40.0 / lambda).unwrap();
        ContinuousPRV::new(
            path,
            move |p: &PathPoint| Phantom::real(lambda * (-lambda * p.z.re).exp()),
            QuadratureConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn real_exponential_median() {
        let x = exponential(2.0);
        let c = x.cdf(Phantom::real(2f64.ln() / 2.0), OrderKind::Lex).unwrap();
        assert!(c.approx_eq(Phantom::real(0.5), 1e-9));
        assert!(x.cdf(Threshold::PosInfinity, OrderKind::Lex).unwrap().approx_eq(Phantom::ONE, 1e-9));
        assert_eq!(x.cdf(Threshold::NegInfinity, OrderKind::Lex).unwrap(), Phantom::ZERO);
    }

    #[test]
    fn moments_of_real_exponential() {
        let x = exponential(2.0);
        assert!(x.mean().unwrap().approx_eq(Phantom::real(0.5), 1e-9));
        assert!(x.variance().unwrap().approx_eq(Phantom::real(0.25), 1e-9));
    }

    #[test]
    fn rejects_unnormalized_and_negative_densities() {
        let path = Path::real_line(0.0, 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        assert!(ContinuousPRV::new(path.clone(), |_| Phantom::real(2.0), cfg).is_err());
        assert!(ContinuousPRV::unnormalized(path, |_| Phantom::real(-1.0), cfg).is_err());
    }

    #[test]
    fn xi_locators_on_the_identity_path() {
        let path = Path::real_line(0.0, 1.0).unwrap();
        let x = ContinuousPRV::new(path, |_| Phantom::ONE, QuadratureConfig::default()).unwrap();
        let s = x.xi_sup(Phantom::real(0.5), OrderKind::Lex).unwrap();
        assert!(s.approx_eq(Phantom::real(0.5), 1e-12));
        assert_eq!(x.xi_sup(Phantom::real(5.0), OrderKind::Lex).unwrap(), Phantom::ONE);
        assert!(matches!(
            x.xi_sup(Phantom::real(-1.0), OrderKind::Lex),
            Err(PhantomError::EmptyRange)
        ));
        let i = x.xi_inf(Phantom::real(0.25), OrderKind::Lex).unwrap();
        assert!(i.approx_eq(Phantom::real(0.25), 1e-12));
    }

    #[test]
    fn non_monotone_path_uses_grid() {
        // A path that goes out along the real axis and comes back with a
        // phantom offset, so the lexicographic order is not monotone in t.
        let path = Path::new(
            |t: f64| if t <= 1.0 { t } else { 2.0 - t },
            |t: f64| if t <= 1.0 { 0.0 } else { 0.5 },
            0.0,
            2.0,
        )
        .unwrap()
        .with_derivatives(|t| if t <= 1.0 { 1.0 } else { -1.0 }, |_| 0.0);
        let x = ContinuousPRV::unnormalized(path, |_| Phantom::ONE, QuadratureConfig::default()).unwrap();
        let (iv, method) = x.sublevel_intervals(Phantom::real(0.5), OrderKind::Lex).unwrap();
        assert_eq!(method, SublevelMethod::Grid);
        assert_eq!(iv.len(), 2);
        assert!((iv[0].1 - 0.5).abs() < 1e-9);
        assert!((iv[1].0 - 1.5).abs() < 1e-9);
        assert_eq!(iv[1].1, 2.0);
    }
}
