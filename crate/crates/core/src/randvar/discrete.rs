use super::{exact_sum, nonnegative_sqrt, RandomVariable, Threshold};
use crate::error::{PhantomError, Result};
use crate::measure::{in_restricted_zone, in_zone, ZONE_TOL};
use crate::ring::{OrderKind, Phantom};

/// A phantom random variable with finite support.
///
/// Support values are matched exactly, component by component. Two values
/// meant to coincide must be built identically.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePRV {
    support: Vec<(Phantom, Phantom)>,
}

impl DiscretePRV {
    /// Checks that probabilities lie in the probability zone, that values
    /// are finite and distinct, and that the probabilities sum to one.
    pub fn new(support: Vec<(Phantom, Phantom)>) -> Result<Self> {
        let x = DiscretePRV::subnormalized(support)?;
        let total = x.total_probability();
        if !total.approx_eq(Phantom::ONE, ZONE_TOL) {
            return Err(PhantomError::InvalidVariable(format!(
                "probabilities sum to {total}, expected 1 + p*0"
            )));
        }
        Ok(x)
    }

    /// Like [`DiscretePRV::new`] but accepts total mass at most one in each
    /// component, as produced by truncating an infinite series.
    pub fn subnormalized(support: Vec<(Phantom, Phantom)>) -> Result<Self> {
        if support.is_empty() {
            return Err(PhantomError::InvalidVariable("empty support".into()));
        }
        for (k, &(v, p)) in support.iter().enumerate() {
            if !v.is_finite() {
                return Err(PhantomError::InvalidVariable(format!("value {v} is not finite")));
            }
            if !in_zone(p, ZONE_TOL) {
                return Err(PhantomError::InvalidVariable(format!(
                    "probability {p} of value {v} is outside the probability zone"
                )));
            }
            if support[..k].iter().any(|(w, _)| *w == v) {
                return Err(PhantomError::InvalidVariable(format!("value {v} listed twice")));
            }
        }
        let x = DiscretePRV { support };
        let total = x.total_probability();
        if total.re > 1.0 + ZONE_TOL || total.reduction() > 1.0 + ZONE_TOL {
            return Err(PhantomError::InvalidVariable(format!("probabilities sum to {total}")));
        }
        Ok(x)
    }

    /// A point mass at `c`.
    pub fn constant(c: Phantom) -> Self {
        DiscretePRV { support: vec![(c, Phantom::ONE)] }
    }

    /// Builds from `(value, prob)` pairs, adding the probabilities of
    /// exactly equal values.
    pub fn from_merged(pairs: impl IntoIterator<Item = (Phantom, Phantom)>) -> Result<Self> {
        let mut support: Vec<(Phantom, Phantom)> = Vec::new();
        for (v, p) in pairs {
            match support.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 += p,
                None => support.push((v, p)),
            }
        }
        DiscretePRV::new(support)
    }

    pub fn support(&self) -> &[(Phantom, Phantom)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Summed per component with correct rounding.
    pub fn total_probability(&self) -> Phantom {
        self.component_sum(|_| 1.0)
    }

    /// `1 + p*0` minus the total mass; nonzero only for truncated series.
    pub fn normalization_deficit(&self) -> Phantom {
        Phantom::ONE - self.total_probability()
    }

    /// True when no probability is a nonzero zero divisor.
    pub fn is_strict(&self) -> bool {
        self.support.iter().all(|(_, p)| in_restricted_zone(*p, ZONE_TOL))
    }

    /// `P(X = z)`, zero off the support.
    pub fn pmf(&self, z: Phantom) -> Phantom {
        self.support
            .iter()
            .find(|(v, _)| *v == z)
            .map_or(Phantom::ZERO, |(_, p)| *p)
    }

    /// `sum of p(x_k)` over every `x_k` with `x_k <= z` under `ord`,
    /// including support points equivalent to `z`.
    pub fn cdf(&self, z: impl Into<Threshold>, ord: OrderKind) -> Result<Phantom> {
        let ord = ord.validated()?.require_probability_grade()?;
        Ok(match z.into() {
            Threshold::NegInfinity => Phantom::ZERO,
            Threshold::PosInfinity => self.total_probability(),
            Threshold::At(z) => self
                .support
                .iter()
                .filter(|(v, _)| ord.compare(*v, z).is_le())
                .map(|(_, p)| *p)
                .sum(),
        })
    }

    /// The classical distribution of the real terms under the real-term
    /// probabilities.
    pub fn real_component(&self) -> Vec<(f64, f64)> {
        self.support.iter().map(|(v, p)| (v.re, p.re)).collect()
    }

    /// The classical distribution of the reductions under the reduced
    /// probabilities.
    pub fn reduced_component(&self) -> Vec<(f64, f64)> {
        self.support
            .iter()
            .map(|(v, p)| (v.reduction(), p.reduction()))
            .collect()
    }

    fn component_sum_with(&self, f_re: impl Fn(f64) -> f64, f_red: impl Fn(f64) -> f64) -> Phantom {
        let re = exact_sum(self.support.iter().map(|(v, p)| f_re(v.re) * p.re));
        let red = exact_sum(self.support.iter().map(|(v, p)| f_red(v.reduction()) * p.reduction()));
        Phantom::from_components(re, red)
    }

    fn component_sum(&self, f: impl Fn(f64) -> f64) -> Phantom {
        self.component_sum_with(&f, &f)
    }

    /// `E[X^n]` summed with ring arithmetic.
    pub fn moment_direct(&self, n: u32) -> Phantom {
        self.support
            .iter()
            .map(|(v, p)| pow_u(*v, n) * *p)
            .sum()
    }

    /// `E[X^2] - E[X]^2` with ring arithmetic.
    pub fn variance_direct(&self) -> Phantom {
        let m = self.moment_direct(1);
        self.moment_direct(2) - m * m
    }

    /// `E[e^(zeta X)]` with ring arithmetic.
    pub fn mgf_direct(&self, zeta: Phantom) -> Phantom {
        self.support.iter().map(|(v, p)| (zeta * *v).exp() * *p).sum()
    }

    /// Conjugates every value and every probability.
    pub fn conjugate(&self) -> Self {
        DiscretePRV {
            support: self
                .support
                .iter()
                .map(|(v, p)| (v.conjugate(), p.conjugate()))
                .collect(),
        }
    }

    /// The distribution of `g(X)`.
    pub fn map(&self, g: impl Fn(Phantom) -> Phantom) -> Result<Self> {
        DiscretePRV::from_merged(self.support.iter().map(|&(v, p)| (g(v), p)))
    }

    /// The distribution of `X + Y` for independent `X` and `Y`.
    pub fn convolve(&self, other: &DiscretePRV) -> Result<Self> {
        DiscretePRV::from_merged(self.support.iter().flat_map(|&(x, p)| {
            other.support.iter().map(move |&(y, q)| (x + y, p * q))
        }))
    }
}

fn pow_u(z: Phantom, n: u32) -> Phantom {
    (0..n).fold(Phantom::ONE, |acc, _| acc * z)
}

impl RandomVariable for DiscretePRV {
    fn moment(&self, n: u32) -> Result<Phantom> {
        Ok(self.component_sum(|x| x.powi(n as i32)))
    }

    fn expect_fn(&self, g: &dyn Fn(Phantom) -> Phantom) -> Result<Phantom> {
        Ok(self.support.iter().map(|(v, p)| g(*v) * *p).sum())
    }

    fn mgf(&self, zeta: Phantom) -> Result<Phantom> {
        let (zr, zh) = (zeta.re, zeta.reduction());
        Ok(self.component_sum_with(|v| (zr * v).exp(), |v| (zh * v).exp()))
    }

    /// Centered sums on each component, equal to `E[X^2] - E[X]^2`.
    fn variance(&self) -> Result<Phantom> {
        let m = self.moment(1)?;
        let (mr, mh) = (m.re, m.reduction());
        let re = self.support.iter().map(|(v, p)| (v.re - mr).powi(2) * p.re).sum();
        let red = self
            .support
            .iter()
            .map(|(v, p)| (v.reduction() - mh).powi(2) * p.reduction())
            .sum();
        Ok(Phantom::from_components(re, red))
    }

    fn std_dev(&self) -> Result<Phantom> {
        nonnegative_sqrt(self.variance()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, ph: f64) -> Phantom {
        Phantom::new(re, ph)
    }

    fn bernoulli(p: Phantom) -> DiscretePRV {
        DiscretePRV::new(vec![(Phantom::ZERO, Phantom::ONE - p), (Phantom::ONE, p)]).unwrap()
    }

    #[test]
    fn pmf_lookup() {
        let p = z(0.4, 0.2);
        let x = bernoulli(p);
        assert_eq!(x.pmf(Phantom::ONE), p);
        assert_eq!(x.pmf(z(0.5, 0.0)), Phantom::ZERO);
        assert!(x.total_probability().approx_eq(Phantom::ONE, 1e-15));
    }

    #[test]
    fn cdf_values() {
        let x = bernoulli(z(0.4, 0.2));
        assert_eq!(x.cdf(z(-1.0, 0.0), OrderKind::Lex).unwrap(), Phantom::ZERO);
        assert!(x.cdf(z(2.0, 0.0), OrderKind::Lex).unwrap().approx_eq(Phantom::ONE, 1e-15));
        assert!(x
            .cdf(Phantom::ZERO, OrderKind::Lex)
            .unwrap()
            .approx_eq(z(0.6, -0.2), 1e-15));
        assert!(matches!(
            x.cdf(Phantom::ZERO, OrderKind::AbsNorm),
            Err(PhantomError::BadOrder(_))
        ));
        assert_eq!(x.cdf(Threshold::NegInfinity, OrderKind::Lex).unwrap(), Phantom::ZERO);
    }

    #[test]
    fn weak_order_cdf_counts_equivalent_points() {
        let x = DiscretePRV::new(vec![
            (z(1.0, 2.0), z(0.25, 0.0)),
            (z(2.0, 0.0), z(0.25, 0.0)),
            (z(5.0, 0.0), z(0.5, 0.0)),
        ])
        .unwrap();
        let c = x.cdf(z(2.0, 0.0), OrderKind::Alpha(2.0)).unwrap();
        assert!(c.approx_eq(z(0.5, 0.0), 1e-15));
    }

    #[test]
    fn bernoulli_moments() {
        let p = z(0.4, 0.2);
        let x = bernoulli(p);
        assert!(x.mean().unwrap().approx_eq(p, 1e-15));
        assert!(x.variance().unwrap().approx_eq(p - p * p, 1e-15));
        let c = DiscretePRV::constant(z(1.5, -0.5));
        assert!(c.moment(3).unwrap().approx_eq(z(1.5, -0.5).pow_int(3).unwrap(), 1e-14));
        assert!(c.variance().unwrap().approx_eq(Phantom::ZERO, 1e-15));
    }

    #[test]
    fn realization_agrees_with_ring_sums() {
        let x = DiscretePRV::new(vec![
            (z(-1.0, 0.5), z(0.2, 0.1)),
            (z(0.3, 2.0), z(0.5, -0.3)),
            (z(2.0, -1.0), z(0.3, 0.2)),
        ])
        .unwrap();
        for n in 1..6 {
            assert!(x.moment(n).unwrap().approx_eq_rel(x.moment_direct(n), 1e-13));
        }
        assert!(x.variance().unwrap().approx_eq_rel(x.variance_direct(), 1e-13));
        let zeta = z(0.3, -0.7);
        assert!(x.mgf(zeta).unwrap().approx_eq_rel(x.mgf_direct(zeta), 1e-13));
    }

    #[test]
    fn std_dev_squares_to_variance() {
        let x = bernoulli(z(0.3, 0.4));
        let s = x.std_dev().unwrap();
        assert!((s * s).approx_eq(x.variance().unwrap(), 1e-14));
    }

    #[test]
    fn validation() {
        assert!(DiscretePRV::new(vec![(Phantom::ZERO, z(0.5, 0.0))]).is_err());
        assert!(DiscretePRV::new(vec![(Phantom::ZERO, z(0.7, 0.4)), (Phantom::ONE, z(0.3, -0.4))]).is_err());
        assert!(DiscretePRV::new(vec![(Phantom::ONE, z(0.5, 0.0)), (Phantom::ONE, z(0.5, 0.0))]).is_err());
        assert!(DiscretePRV::subnormalized(vec![(Phantom::ZERO, z(0.5, 0.0))]).is_ok());
    }

    #[test]
    fn strictness() {
        assert!(bernoulli(z(0.4, 0.2)).is_strict());
        assert!(!bernoulli(z(0.5, 0.5)).is_strict());
    }

    #[test]
    fn convolution_of_bernoullis() {
        let p = z(0.4, 0.2);
        let b = bernoulli(p);
        let two = b.convolve(&b).unwrap();
        assert_eq!(two.len(), 3);
        assert!(two.pmf(Phantom::ONE).approx_eq((Phantom::ONE - p) * p * 2.0, 1e-15));
    }

    #[test]
    fn linear_map() {
        let x = bernoulli(z(0.4, 0.2));
        let (alpha, beta) = (z(2.0, 1.0), z(-1.0, 0.5));
        let y = x.map(|v| alpha * v + beta).unwrap();
        assert!(y.mean().unwrap().approx_eq(alpha * x.mean().unwrap() + beta, 1e-14));
        assert!(y
            .variance()
            .unwrap()
            .approx_eq(alpha * alpha * x.variance().unwrap(), 1e-14));
    }
}
