//! Phantom polynomials, paths through the phantom plane and integration
//! along them.
//!
//! The integral of `f` along a path `g` is `int f(g(t)) g'(t) dt`. Because
//! phantom multiplication expands to
//! `f_re a' + p*(f_re b' + f_ph (a' + b'))`, the phantom integral is a pair
//! of ordinary real integrals, each evaluated by adaptive quadrature.

mod path;
mod poly;
mod quadrature;

pub use path::{Path, PathPoint, RealFn};
pub use poly::PhantomPolynomial;
pub use quadrature::{integrate, integrate_pair, QuadratureConfig};

use crate::error::{PhantomError, Result};
use crate::ring::Phantom;

/// Resolves a parameter interval against a path: checks containment and
/// replaces infinite endpoints with the truncation cut-off.
pub fn finite_bounds(path: &Path, sub: (f64, f64), cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (t0, t1) = path.domain();
    let (lo, hi) = sub;
    if lo.is_nan() || hi.is_nan() || lo < t0 || hi > t1 {
        return Err(PhantomError::OutOfDomain {
            t: if lo < t0 || lo.is_nan() { lo } else { hi },
            t0,
            t1,
        });
    }
    let cut = path.truncation().unwrap_or(cfg.infinite_truncation);
    let clamp = |t: f64| {
        if t == f64::NEG_INFINITY {
            -cut
        } else if t == f64::INFINITY {
            cut
        } else {
            t
        }
    };
    Ok((clamp(lo), clamp(hi)))
}

/// Integrates an arbitrary phantom-valued function of the sampled path
/// position with respect to the parameter `t`. No tangent factor is
/// applied; the caller includes it if wanted.
pub fn integrate_along<G>(path: &Path, sub: (f64, f64), cfg: &QuadratureConfig, g: G) -> Result<Phantom>
where
    G: Fn(&PathPoint) -> Phantom,
{
    let (lo, hi) = finite_bounds(path, sub, cfg)?;
    let r = integrate_pair(
        |t| {
            let v = g(&path.sample_unchecked(t));
            [v.re, v.ph]
        },
        lo,
        hi,
        cfg,
    )?;
    Ok(Phantom::new(r[0], r[1]))
}

/// The path integral `int_g f(z) dz` over the parameter sub-interval `sub`.
pub fn path_integral<F>(f: F, path: &Path, sub: (f64, f64), cfg: &QuadratureConfig) -> Result<Phantom>
where
    F: Fn(Phantom) -> Phantom,
{
    integrate_along(path, sub, cfg, |p| f(p.z) * p.dz)
}

/// [`path_integral`] over the whole domain of the path.
pub fn path_integral_full<F>(f: F, path: &Path, cfg: &QuadratureConfig) -> Result<Phantom>
where
    F: Fn(Phantom) -> Phantom,
{
    path_integral(f, path, path.domain(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_speed_arc() {
        let cfg = QuadratureConfig::default();
        let g = Path::real_line(0.0, 1.0).unwrap();
        let v = path_integral(|_| Phantom::ONE, &g, (0.0, 1.0), &cfg).unwrap();
        assert!(v.approx_eq(Phantom::ONE, 1e-14));
    }

    #[test]
    fn diagonal_path_integrates_to_endpoint_difference() {
        let cfg = QuadratureConfig::default();
        let g = Path::line(Phantom::ZERO, Phantom::new(1.0, 1.0), 0.0, 1.0).unwrap();
        let v = path_integral_full(|_| Phantom::ONE, &g, &cfg).unwrap();
        assert!(v.approx_eq(Phantom::new(1.0, 1.0), 1e-14));
    }

    #[test]
    fn expanded_form_of_the_integrand() {
        let cfg = QuadratureConfig::default();
        let g = Path::new(|t| t, |t| 0.5 * t * t, 0.0, 1.0)
            .unwrap()
            .with_derivatives(|_| 1.0, |t| t);
        let f = |z: Phantom| z * Phantom::new(1.0, 2.0);
        let v = path_integral_full(f, &g, &cfg).unwrap();
        let re = integrate(|t| f(g.point(t).unwrap()).re * 1.0, 0.0, 1.0, &cfg).unwrap();
        let ph = integrate(
            |t| {
                let w = f(g.point(t).unwrap());
                w.re * t + w.ph * (1.0 + t)
            },
            0.0,
            1.0,
            &cfg,
        )
        .unwrap();
        assert!(v.approx_eq(Phantom::new(re, ph), 1e-12));
    }

    #[test]
    fn infinite_domain_uses_truncation() {
        let cfg = QuadratureConfig::default();
        let g = Path::real_line(0.0, f64::INFINITY).unwrap().with_truncation(60.0);
        let v = path_integral_full(|z| (-z).exp(), &g, &cfg).unwrap();
        assert!(v.approx_eq(Phantom::ONE, 1e-12));
    }

    #[test]
    fn sub_interval_outside_domain() {
        let cfg = QuadratureConfig::default();
        let g = Path::real_line(0.0, 1.0).unwrap();
        assert!(path_integral(|z| z, &g, (0.0, 2.0), &cfg).is_err());
    }
}
