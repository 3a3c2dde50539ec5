use serde::Serialize;

use crate::error::{PhantomError, Result};
use crate::randvar::DiscretePRV;
use crate::ring::{OrderKind, Phantom};

/// Slack allowed when deciding whether a bound holds.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkovVariant {
    /// `P(X >= z) <= E[X] / z` under a weak order.
    Order,
    /// `P(|X| >= |z|) <= E[|X|] / |z|`, compared under a weak order.
    AbsOrder,
    /// `|P(|X| >= |z|)| <= |E[|X|] / |z||` as reals.
    AbsAbs,
}

impl std::str::FromStr for MarkovVariant {
    type Err = PhantomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" | "order" => Ok(MarkovVariant::Order),
            "ii" | "abs-order" => Ok(MarkovVariant::AbsOrder),
            "iii" | "abs-abs" => Ok(MarkovVariant::AbsAbs),
            other => Err(PhantomError::BadVariant(format!("unknown Markov variant {other:?}"))),
        }
    }
}

/// Both sides of a Markov inequality. For [`MarkovVariant::AbsAbs`] the
/// sides are real and carried as real phantoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovCheck {
    pub variant: MarkovVariant,
    pub lhs: Phantom,
    pub rhs: Phantom,
    pub holds: bool,
}

fn prob_where(x: &DiscretePRV, keep: impl Fn(Phantom) -> bool) -> Phantom {
    x.support().iter().filter(|(v, _)| keep(*v)).map(|(_, p)| *p).sum()
}

fn abs_mean(x: &DiscretePRV) -> Phantom {
    x.support().iter().map(|(v, p)| *p * v.abs()).sum()
}

fn le_under(lhs: Phantom, rhs: Phantom, ord: OrderKind) -> bool {
    ord.compare_tol(lhs, rhs, BOUND_SLACK).is_le()
}

/// Evaluates one Markov inequality exactly over the finite support.
///
/// `ord` decides `>=` between phantom values for the order variants. The
/// [`MarkovVariant::Order`] variant needs a pseudo positive `z` and a
/// variable whose values are all `>= 0` under `ord`; the others need
/// `z != 0`.
pub fn markov_bound(x: &DiscretePRV, z: Phantom, variant: MarkovVariant, ord: OrderKind) -> Result<MarkovCheck> {
    let ord = ord.validated()?.require_probability_grade()?;
    match variant {
        MarkovVariant::Order => {
            if !z.is_pseudo_positive() {
                return Err(PhantomError::BadVariant(format!("order variant needs a pseudo positive z, got {z}")));
            }
            if let Some((v, _)) = x.support().iter().find(|(v, _)| !ord.compare(*v, Phantom::ZERO).is_ge()) {
                return Err(PhantomError::BadVariant(format!("order variant needs X >= 0, found value {v}")));
            }
            let lhs = prob_where(x, |v| ord.compare(v, z).is_ge());
            let mean: Phantom = x.support().iter().map(|(v, p)| *v * *p).sum();
            let rhs = mean * z.inverse()?;
            Ok(MarkovCheck { variant, lhs, rhs, holds: le_under(lhs, rhs, ord) })
        }
        MarkovVariant::AbsOrder | MarkovVariant::AbsAbs => {
            let r = z.abs();
            if r == 0.0 {
                return Err(PhantomError::BadVariant("z must be nonzero".into()));
            }
            let p = prob_where(x, |v| v.abs() >= r);
            let m = abs_mean(x) * (1.0 / r);
            if variant == MarkovVariant::AbsOrder {
                Ok(MarkovCheck { variant, lhs: p, rhs: m, holds: le_under(p, m, ord) })
            } else {
                let (lhs, rhs) = (p.abs(), m.abs());
                Ok(MarkovCheck {
                    variant,
                    lhs: Phantom::real(lhs),
                    rhs: Phantom::real(rhs),
                    holds: lhs <= rhs + BOUND_SLACK,
                })
            }
        }
    }
}

/// Both sides of the Chebyshev inequality for `|X|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevCheck {
    /// The real term of `E[|X|]`, the centre of the deviation event.
    pub mu: f64,
    /// `E[(|X| - mu)^2]`.
    pub variance: Phantom,
    /// The real radius `|z|` of the deviation event.
    pub threshold: f64,
    /// `|P(||X| - mu| >= threshold)|`.
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn chebyshev_parts(x: &DiscretePRV) -> (f64, Phantom) {
    let mu = abs_mean(x).re;
    let variance = x
        .support()
        .iter()
        .map(|(v, p)| *p * (v.abs() - mu).powi(2))
        .sum();
    (mu, variance)
}

fn deviation_prob(x: &DiscretePRV, mu: f64, threshold: f64) -> f64 {
    prob_where(x, |v| (v.abs() - mu).abs() >= threshold).abs()
}

/// `|P(||X| - mu| >= |z|)| <= |sigma^2| / |z|^2`.
pub fn chebyshev_bound(x: &DiscretePRV, z: Phantom) -> Result<ChebyshevCheck> {
    let threshold = z.abs();
    if threshold == 0.0 {
        return Err(PhantomError::BadParameter("z must be nonzero".into()));
    }
    let (mu, variance) = chebyshev_parts(x);
    let lhs = deviation_prob(x, mu, threshold);
    let rhs = variance.abs() / (threshold * threshold);
    Ok(ChebyshevCheck { mu, variance, threshold, lhs, rhs, holds: lhs <= rhs + BOUND_SLACK })
}

/// The inequality at `|z| = c sqrt|sigma^2|`, where the bound is `1/c^2`.
pub fn chebyshev_c_form(x: &DiscretePRV, c: f64) -> Result<ChebyshevCheck> {
    if !(c.is_finite() && c > 0.0) {
        return Err(PhantomError::BadParameter(format!("c = {c} must be positive")));
    }
    let (mu, variance) = chebyshev_parts(x);
    let spread = variance.abs().sqrt();
    if spread == 0.0 {
        return Err(PhantomError::DegenerateVariance("the variance of |X| is zero".into()));
    }
    let threshold = c * spread;
    let lhs = deviation_prob(x, mu, threshold);
    let rhs = 1.0 / (c * c);
    Ok(ChebyshevCheck { mu, variance, threshold, lhs, rhs, holds: lhs <= rhs + BOUND_SLACK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, ph: f64) -> Phantom {
        Phantom::new(re, ph)
    }

    fn bernoulli() -> DiscretePRV {
        let p = z(0.4, 0.2);
        DiscretePRV::new(vec![(Phantom::ZERO, Phantom::ONE - p), (Phantom::ONE, p)]).unwrap()
    }

    #[test]
    fn markov_examples() {
        let x = bernoulli();
        let c = markov_bound(&x, z(0.5, 0.0), MarkovVariant::AbsAbs, OrderKind::Lex).unwrap();
        assert!(c.holds);
        let c = markov_bound(&x, z(5.0, 0.0), MarkovVariant::AbsAbs, OrderKind::Lex).unwrap();
        assert_eq!(c.lhs, Phantom::ZERO);
        assert!(c.holds);
        let k = DiscretePRV::constant(z(2.0, 1.0));
        for v in [MarkovVariant::Order, MarkovVariant::AbsOrder, MarkovVariant::AbsAbs] {
            let c = markov_bound(&k, z(2.0, 1.0), v, OrderKind::Lex).unwrap();
            assert!(c.holds);
            assert!(c.lhs.approx_eq(c.rhs, 1e-15), "{v:?}");
        }
    }

    #[test]
    fn markov_preconditions() {
        let x = bernoulli();
        assert!(matches!(
            markov_bound(&x, z(1.0, -2.0), MarkovVariant::Order, OrderKind::Lex),
            Err(PhantomError::BadVariant(_))
        ));
        assert!(markov_bound(&x, Phantom::ZERO, MarkovVariant::AbsAbs, OrderKind::Lex).is_err());
        let neg = DiscretePRV::constant(z(-1.0, 0.0));
        assert!(markov_bound(&neg, Phantom::ONE, MarkovVariant::Order, OrderKind::Lex).is_err());
        assert!(matches!(
            markov_bound(&x, Phantom::ONE, MarkovVariant::AbsAbs, OrderKind::AbsNorm),
            Err(PhantomError::BadOrder(_))
        ));
    }

    #[test]
    fn chebyshev_examples() {
        let x = bernoulli();
        let c = chebyshev_c_form(&x, 2.0).unwrap();
        assert_eq!(c.rhs, 0.25);
        assert!(c.holds);
        let far = chebyshev_bound(&x, z(1e6, 0.0)).unwrap();
        assert_eq!(far.lhs, 0.0);
        assert!(far.holds);
        assert!(matches!(
            chebyshev_c_form(&DiscretePRV::constant(Phantom::ONE), 2.0),
            Err(PhantomError::DegenerateVariance(_))
        ));
    }
}
