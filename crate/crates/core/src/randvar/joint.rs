use super::DiscretePRV;
use crate::error::{PhantomError, Result};
use crate::measure::{in_zone, EQ_TOL, ZONE_TOL};
use crate::ring::{Phantom, ZERO_DIVISOR_TOL};

/// True when `re` lies in `[-1, 1]` and `-(1 + re) <= ph <= 1 - re`, the
/// zone where phantom correlation coefficients live.
pub fn in_correlation_zone(z: Phantom, tol: f64) -> bool {
    z.re >= -1.0 - tol && z.re <= 1.0 + tol && z.ph >= -(1.0 + z.re) - tol && z.ph <= 1.0 - z.re + tol
}

/// A pair of discrete phantom random variables with a joint mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDiscretePRV {
    support: Vec<((Phantom, Phantom), Phantom)>,
}

impl JointDiscretePRV {
    pub fn new(support: Vec<((Phantom, Phantom), Phantom)>) -> Result<Self> {
        if support.is_empty() {
            return Err(PhantomError::InvalidVariable("empty joint support".into()));
        }
        for (k, &((x, y), p)) in support.iter().enumerate() {
            if !in_zone(p, ZONE_TOL) {
                return Err(PhantomError::InvalidVariable(format!(
                    "probability {p} at ({x}, {y}) is outside the probability zone"
                )));
            }
            if support[..k].iter().any(|(v, _)| *v == (x, y)) {
                return Err(PhantomError::InvalidVariable(format!("point ({x}, {y}) listed twice")));
            }
        }
        let total: Phantom = support.iter().map(|(_, p)| *p).sum();
        if !total.approx_eq(Phantom::ONE, ZONE_TOL) {
            return Err(PhantomError::InvalidVariable(format!("joint probabilities sum to {total}")));
        }
        Ok(JointDiscretePRV { support })
    }

    /// The joint law of independent `x` and `y`.
    pub fn product(x: &DiscretePRV, y: &DiscretePRV) -> Result<Self> {
        JointDiscretePRV::new(
            x.support()
                .iter()
                .flat_map(|&(a, p)| y.support().iter().map(move |&(b, q)| ((a, b), p * q)))
                .collect(),
        )
    }

    /// The joint law of `(X, X)`.
    pub fn diagonal(x: &DiscretePRV) -> Self {
        JointDiscretePRV { support: x.support().iter().map(|&(v, p)| ((v, v), p)).collect() }
    }

    pub fn support(&self) -> &[((Phantom, Phantom), Phantom)] {
        &self.support
    }

    fn marginal(&self, pick: impl Fn(&(Phantom, Phantom)) -> Phantom) -> Result<DiscretePRV> {
        DiscretePRV::from_merged(self.support.iter().map(|(xy, p)| (pick(xy), *p)))
    }

    pub fn marginals(&self) -> Result<(DiscretePRV, DiscretePRV)> {
        Ok((self.marginal(|xy| xy.0)?, self.marginal(|xy| xy.1)?))
    }

    pub fn pmf(&self, x: Phantom, y: Phantom) -> Phantom {
        self.support
            .iter()
            .find(|(v, _)| *v == (x, y))
            .map_or(Phantom::ZERO, |(_, p)| *p)
    }

    /// `p(x, y) = p_X(x) p_Y(y)` at every pair of marginal support points,
    /// within `1e-10` componentwise.
    pub fn is_independent(&self) -> Result<bool> {
        let (mx, my) = self.marginals()?;
        Ok(mx.support().iter().all(|&(x, px)| {
            my.support()
                .iter()
                .all(|&(y, py)| self.pmf(x, y).approx_eq(px * py, EQ_TOL))
        }))
    }

    /// `E[g(X, Y)]` with ring arithmetic.
    pub fn expect(&self, g: impl Fn(Phantom, Phantom) -> Phantom) -> Phantom {
        self.support.iter().map(|((x, y), p)| g(*x, *y) * *p).sum()
    }

    /// The distribution of `X + Y`.
    pub fn sum(&self) -> Result<DiscretePRV> {
        DiscretePRV::from_merged(self.support.iter().map(|((x, y), p)| (*x + *y, *p)))
    }

    /// Classical covariance on one component, selected by `proj`.
    fn component_cov(&self, proj: impl Fn(Phantom) -> f64) -> (f64, f64, f64) {
        let w = |p: Phantom| proj(p);
        let mx: f64 = self.support.iter().map(|((x, _), p)| proj(*x) * w(*p)).sum();
        let my: f64 = self.support.iter().map(|((_, y), p)| proj(*y) * w(*p)).sum();
        let mut cov = 0.0;
        let mut vx = 0.0;
        let mut vy = 0.0;
        for ((x, y), p) in &self.support {
            let (dx, dy, q) = (proj(*x) - mx, proj(*y) - my, w(*p));
            cov += dx * dy * q;
            vx += dx * dx * q;
            vy += dy * dy * q;
        }
        (cov, vx, vy)
    }

    /// `E[(X - E[X])(Y - E[Y])]`, component by component.
    pub fn covariance(&self) -> Phantom {
        let (re, _, _) = self.component_cov(|z| z.re);
        let (red, _, _) = self.component_cov(|z| z.reduction());
        Phantom::from_components(re, red)
    }

    /// `E[XY] - E[X]E[Y]` with ring arithmetic.
    pub fn covariance_direct(&self) -> Phantom {
        let exy = self.expect(|x, y| x * y);
        let ex = self.expect(|x, _| x);
        let ey = self.expect(|_, y| y);
        exy - ex * ey
    }

    /// `Cov(X, Y) / (sd(X) sd(Y))`, component by component.
    pub fn correlation(&self) -> Result<Phantom> {
        let (cr, vxr, vyr) = self.component_cov(|z| z.re);
        let (ch, vxh, vyh) = self.component_cov(|z| z.reduction());
        let sr = (vxr * vyr).sqrt();
        let sh = (vxh * vyh).sqrt();
        if !(sr > ZERO_DIVISOR_TOL && sh > ZERO_DIVISOR_TOL) {
            return Err(PhantomError::DegenerateVariance(format!(
                "standard deviation product {} is zero or a zero divisor",
                Phantom::from_components(sr, sh)
            )));
        }
        Ok(Phantom::from_components(cr / sr, ch / sh))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randvar::RandomVariable;

    fn z(re: f64, ph: f64) -> Phantom {
        Phantom::new(re, ph)
    }

    fn bernoulli(p: Phantom) -> DiscretePRV {
        DiscretePRV::new(vec![(Phantom::ZERO, Phantom::ONE - p), (Phantom::ONE, p)]).unwrap()
    }

    #[test]
    fn product_is_independent_and_uncorrelated() {
        let (x, y) = (bernoulli(z(0.4, 0.2)), bernoulli(z(0.7, -0.1)));
        let j = JointDiscretePRV::product(&x, &y).unwrap();
        assert!(j.is_independent().unwrap());
        assert!(j.covariance().approx_eq(Phantom::ZERO, 1e-15));
        let (mx, my) = j.marginals().unwrap();
        assert!(mx.mean().unwrap().approx_eq(x.mean().unwrap(), 1e-15));
        assert!(my.mean().unwrap().approx_eq(y.mean().unwrap(), 1e-15));
    }

    #[test]
    fn diagonal_is_dependent_and_fully_correlated() {
        let x = bernoulli(z(0.4, 0.2));
        let j = JointDiscretePRV::diagonal(&x);
        assert!(!j.is_independent().unwrap());
        assert!(j.correlation().unwrap().approx_eq(Phantom::ONE, 1e-14));
        assert!(j.covariance().approx_eq(x.variance().unwrap(), 1e-15));
    }

    #[test]
    fn covariance_formulas_agree() {
        let j = JointDiscretePRV::new(vec![
            ((z(0.0, 1.0), z(1.0, 0.0)), z(0.2, 0.1)),
            ((z(1.0, -0.5), z(2.0, 1.0)), z(0.3, -0.2)),
            ((z(2.0, 0.0), z(-1.0, 0.5)), z(0.5, 0.1)),
        ])
        .unwrap();
        assert!(j.covariance().approx_eq_rel(j.covariance_direct(), 1e-13));
        assert!(in_correlation_zone(j.correlation().unwrap(), 1e-12));
    }

    #[test]
    fn degenerate_correlation() {
        let c = DiscretePRV::constant(Phantom::ONE);
        let j = JointDiscretePRV::product(&c, &bernoulli(z(0.4, 0.2))).unwrap();
        assert!(matches!(j.correlation(), Err(PhantomError::DegenerateVariance(_))));
    }
}
