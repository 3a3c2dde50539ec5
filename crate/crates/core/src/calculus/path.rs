use std::fmt;
use std::sync::Arc;

use crate::error::{PhantomError, Result};
use crate::ring::Phantom;

/// A real function of the path parameter, shareable across threads.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A curve `t -> a(t) + p*b(t)` over a closed parameter interval.
///
/// Paths are assumed to have no self-intersections; nothing checks this.
/// Endpoints may be infinite, in which case integration truncates them at
/// `truncation` (or at the quadrature configuration's default).
#[derive(Clone)]
pub struct Path {
    a: RealFn,
    b: RealFn,
    a_deriv: Option<RealFn>,
    b_deriv: Option<RealFn>,
    t0: f64,
    t1: f64,
    truncation: Option<f64>,
}

/// A sampled position on a path: parameter, point and tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub t: f64,
    pub z: Phantom,
    pub dz: Phantom,
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Path")
            .field("t0", &self.t0)
            .field("t1", &self.t1)
            .field("analytic_tangent", &self.a_deriv.is_some())
            .field("truncation", &self.truncation)
            .finish()
    }
}

fn finite_difference(f: &RealFn, t: f64) -> f64 {
    let h = 1e-6 * t.abs().max(1.0);
    (f(t + h) - f(t - h)) / (2.0 * h)
}

impl Path {
    /// A path without analytic derivatives. Tangents use central
    /// differences with step `1e-6 * max(1, |t|)`.
    pub fn new(
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t0: f64,
        t1: f64,
    ) -> Result<Self> {
        if t0.is_nan() || t1.is_nan() || t0 >= t1 {
            return Err(PhantomError::BadParameter(format!(
                "path domain [{t0}, {t1}] is empty"
            )));
        }
        Ok(Path {
            a: Arc::new(a),
            b: Arc::new(b),
            a_deriv: None,
            b_deriv: None,
            t0,
            t1,
            truncation: None,
        })
    }

    pub fn with_derivatives(
        mut self,
        a_deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b_deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.a_deriv = Some(Arc::new(a_deriv));
        self.b_deriv = Some(Arc::new(b_deriv));
        self
    }

    /// Sets where infinite endpoints are cut off during integration.
    pub fn with_truncation(mut self, t: f64) -> Self {
        self.truncation = Some(t.abs());
        self
    }

    /// `t -> start + t*direction` with exact tangents.
    pub fn line(start: Phantom, direction: Phantom, t0: f64, t1: f64) -> Result<Self> {
        Ok(Path::new(
            move |t| start.re + t * direction.re,
            move |t| start.ph + t * direction.ph,
            t0,
            t1,
        )?
        .with_derivatives(move |_| direction.re, move |_| direction.ph))
    }

    /// The identity path `t -> t` on the real axis.
    pub fn real_line(t0: f64, t1: f64) -> Result<Self> {
        Path::line(Phantom::ZERO, Phantom::ONE, t0, t1)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn truncation(&self) -> Option<f64> {
        self.truncation
    }

    pub fn has_analytic_tangent(&self) -> bool {
        self.a_deriv.is_some() && self.b_deriv.is_some()
    }

    fn check(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < self.t0 || t > self.t1 {
            Err(PhantomError::OutOfDomain { t, t0: self.t0, t1: self.t1 })
        } else {
            Ok(())
        }
    }

    pub fn point(&self, t: f64) -> Result<Phantom> {
        self.check(t)?;
        Ok(self.point_unchecked(t))
    }

    pub fn tangent(&self, t: f64) -> Result<Phantom> {
        self.check(t)?;
        Ok(self.tangent_unchecked(t))
    }

    pub fn sample(&self, t: f64) -> Result<PathPoint> {
        self.check(t)?;
        Ok(self.sample_unchecked(t))
    }

    pub(crate) fn point_unchecked(&self, t: f64) -> Phantom {
        Phantom::new((self.a)(t), (self.b)(t))
    }

    pub(crate) fn tangent_unchecked(&self, t: f64) -> Phantom {
        let da = match &self.a_deriv {
            Some(d) => d(t),
            None => finite_difference(&self.a, t),
        };
        let db = match &self.b_deriv {
            Some(d) => d(t),
            None => finite_difference(&self.b, t),
        };
        Phantom::new(da, db)
    }

    pub(crate) fn sample_unchecked(&self, t: f64) -> PathPoint {
        PathPoint { t, z: self.point_unchecked(t), dz: self.tangent_unchecked(t) }
    }

    /// The same curve traversed backwards over the same parameter interval.
    pub fn reversed(&self) -> Path {
        let (t0, t1) = (self.t0, self.t1);
        let flip = move |t: f64| t0 + t1 - t;
        let (a, b) = (self.a.clone(), self.b.clone());
        let mut out = Path {
            a: Arc::new(move |t| a(flip(t))),
            b: Arc::new(move |t| b(flip(t))),
            a_deriv: None,
            b_deriv: None,
            t0,
            t1,
            truncation: self.truncation,
        };
        if let (Some(da), Some(db)) = (self.a_deriv.clone(), self.b_deriv.clone()) {
            out.a_deriv = Some(Arc::new(move |t| -da(flip(t))));
            out.b_deriv = Some(Arc::new(move |t| -db(flip(t))));
        }
        out
    }

    /// This path followed by `next`, reparameterised so `next` starts where
    /// this path's parameter ends. Both domains must be finite.
    pub fn concat(&self, next: &Path) -> Result<Path> {
        if ![self.t0, self.t1, next.t0, next.t1].iter().all(|t| t.is_finite()) {
            return Err(PhantomError::BadParameter(
                "only finite paths can be concatenated".into(),
            ));
        }
        let split = self.t1;
        let shift = next.t0 - split;
        let t1 = split + (next.t1 - next.t0);
        let piece = |f: RealFn, g: RealFn| -> RealFn {
            Arc::new(move |t| if t <= split { f(t) } else { g(t + shift) })
        };
        let mut out = Path {
            a: piece(self.a.clone(), next.a.clone()),
            b: piece(self.b.clone(), next.b.clone()),
            a_deriv: None,
            b_deriv: None,
            t0: self.t0,
            t1,
            truncation: None,
        };
        if self.has_analytic_tangent() && next.has_analytic_tangent() {
            out.a_deriv = Some(piece(
                self.a_deriv.clone().unwrap(),
                next.a_deriv.clone().unwrap(),
            ));
            out.b_deriv = Some(piece(
                self.b_deriv.clone().unwrap(),
                next.b_deriv.clone().unwrap(),
            ));
        } else {
            let (a, b) = (out.a.clone(), out.b.clone());
            let (lo, hi) = (self.t0, t1);
            let one_sided = move |f: &RealFn, t: f64| {
                let h = 1e-6 * t.abs().max(1.0);
                if t <= split {
                    let l = (t - h).max(lo);
                    (f(t) - f(l)) / (t - l).max(f64::MIN_POSITIVE)
                } else {
                    let r = (t + h).min(hi);
                    (f(r) - f(t)) / (r - t).max(f64::MIN_POSITIVE)
                }
            };
            let oa = one_sided;
            out.a_deriv = Some(Arc::new(move |t| oa(&a, t)));
            out.b_deriv = Some(Arc::new(move |t| one_sided(&b, t)));
        }
        Ok(out)
    }

    /// Checks that both components of the path stay pseudo nonnegative on
    /// an evenly spaced grid of `n` parameters over the finite part of the
    /// domain.
    pub(crate) fn is_pseudo_nonnegative_on_grid(&self, n: usize, cutoff: f64) -> bool {
        let lo = if self.t0.is_finite() { self.t0 } else { -cutoff };
        let hi = if self.t1.is_finite() { self.t1 } else { cutoff };
        (0..=n).all(|k| {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            self.point_unchecked(t).is_pseudo_nonnegative()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_line_point_and_tangent() {
        let g = Path::real_line(0.0, 5.0).unwrap();
        assert_eq!(g.point(2.0).unwrap(), Phantom::new(2.0, 0.0));
        assert_eq!(g.tangent(2.0).unwrap(), Phantom::new(1.0, 0.0));
    }

    #[test]
    fn finite_difference_tangent() {
        let g = Path::new(|t| t, |t| t * t, -3.0, 3.0).unwrap();
        let d = g.tangent(1.0).unwrap();
        assert!(d.approx_eq(Phantom::new(1.0, 2.0), 1e-8));
    }

    #[test]
    fn out_of_domain() {
        let g = Path::real_line(0.0, 1.0).unwrap();
        assert!(matches!(g.point(1.5), Err(PhantomError::OutOfDomain { .. })));
        assert!(g.tangent(-0.1).is_err());
        assert!(Path::real_line(1.0, 1.0).is_err());
    }

    #[test]
    fn reversal_swaps_endpoints() {
        let g = Path::line(Phantom::new(1.0, 0.0), Phantom::new(2.0, 1.0), 0.0, 1.0).unwrap();
        let r = g.reversed();
        assert_eq!(r.point(0.0).unwrap(), g.point(1.0).unwrap());
        assert_eq!(r.tangent(0.3).unwrap(), -g.tangent(0.7).unwrap());
    }

    #[test]
    fn concatenation_is_continuous() {
        let g = Path::line(Phantom::ZERO, Phantom::new(1.0, 1.0), 0.0, 1.0).unwrap();
        let h = Path::line(Phantom::new(1.0, 1.0), Phantom::new(1.0, -1.0), 0.0, 2.0).unwrap();
        let c = g.concat(&h).unwrap();
        assert_eq!(c.domain(), (0.0, 3.0));
        assert_eq!(c.point(1.0).unwrap(), Phantom::new(1.0, 1.0));
        assert_eq!(c.point(3.0).unwrap(), Phantom::new(3.0, -1.0));
        assert_eq!(c.tangent(2.0).unwrap(), Phantom::new(1.0, -1.0));
    }
}
