//! Phantom random variables.
//!
//! Statistics are computed through the realization property: the real
//! term of a statistic is the classical statistic of the real terms of the
//! values under the real terms of the probabilities, and its reduction is
//! the classical statistic of the reductions under the reduced
//! probabilities. Direct ring-arithmetic versions are kept alongside as
//! cross-checks.

mod continuous;
mod discrete;
mod joint;

pub use continuous::{ContinuousPRV, DensityFn, SublevelMethod};
pub use discrete::DiscretePRV;
pub use joint::{in_correlation_zone, JointDiscretePRV};

use crate::error::Result;
use crate::ring::Phantom;

/// A CDF query point. The infinite sentinels are limits, not values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    NegInfinity,
    At(Phantom),
    PosInfinity,
}

impl From<Phantom> for Threshold {
    fn from(z: Phantom) -> Self {
        Threshold::At(z)
    }
}

/// Statistics shared by discrete and continuous phantom random variables.
pub trait RandomVariable {
    /// `E[X^n]`.
    fn moment(&self, n: u32) -> Result<Phantom>;

    /// `E[g(X)]`.
    fn expect_fn(&self, g: &dyn Fn(Phantom) -> Phantom) -> Result<Phantom>;

    /// `M(zeta) = E[e^(zeta X)]`.
    fn mgf(&self, zeta: Phantom) -> Result<Phantom>;

    fn mean(&self) -> Result<Phantom> {
        self.moment(1)
    }

    /// `E[X^2] - E[X]^2`.
    fn variance(&self) -> Result<Phantom> {
        let m = self.mean()?;
        Ok(self.moment(2)? - m * m)
    }

    /// The nonnegative phantom square root of the variance.
    fn std_dev(&self) -> Result<Phantom> {
        nonnegative_sqrt(self.variance()?)
    }
}

/// Square root of a pseudo nonnegative value, clamping components that
/// are negative only through rounding (above `-1e-12`) to zero.
pub(crate) fn nonnegative_sqrt(v: Phantom) -> Result<Phantom> {
    let clamp = |x: f64| if x < 0.0 && x > -1e-12 { 0.0 } else { x };
    Phantom::from_components(clamp(v.re), clamp(v.reduction())).sqrt()
}

/// The transform of `uX + v`: `e^(v zeta) M_X(u zeta)`.
pub fn mgf_linear<X: RandomVariable + ?Sized>(x: &X, u: Phantom, v: Phantom, zeta: Phantom) -> Result<Phantom> {
    Ok((v * zeta).exp() * x.mgf(u * zeta)?)
}

/// The transform of a sum of independent variables: the product of their
/// transforms. Independence is the caller's responsibility.
pub fn mgf_sum(xs: &[&dyn RandomVariable], zeta: Phantom) -> Result<Phantom> {
    xs.iter().map(|x| x.mgf(zeta)).product()
}

/// Correctly rounded sum of a sequence of reals.
pub(crate) fn exact_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    use xsum::{Xsum, XsumAuto};
    let mut acc = XsumAuto::new();
    for t in terms {
        acc.add(t);
    }
    acc.sum()
}
