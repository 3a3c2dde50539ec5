use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Phantom;
use crate::error::{PhantomError, Result};

/// Three-valued outcome of comparing under a (possibly weak) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Equivalent,
    Greater,
}

impl Comparison {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equivalent,
            Ordering::Greater => Comparison::Greater,
        }
    }

    /// True for `Less` or `Equivalent`.
    pub fn is_le(self) -> bool {
        self != Comparison::Greater
    }

    pub fn is_ge(self) -> bool {
        self != Comparison::Less
    }
}

/// The orders available on phantom numbers.
///
/// `Lex` is total. The others are weak orders with nontrivial equivalence
/// classes. `AbsNorm` ignores sign and is not compatible with addition, so
/// probability queries reject it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[derive(Default)]
pub enum OrderKind {
    /// Compare real terms, then phantom terms.
    #[default]
    Lex,
    /// Compare `a + b/alpha` for a fixed `alpha > 0`.
    Alpha(f64),
    /// Compare real terms only.
    RealTerm,
    /// Compare moduli.
    AbsNorm,
}


impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::Lex => write!(f, "lex"),
            OrderKind::Alpha(a) => write!(f, "alpha:{a}"),
            OrderKind::RealTerm => write!(f, "real"),
            OrderKind::AbsNorm => write!(f, "abs"),
        }
    }
}

impl OrderKind {
    pub fn alpha(alpha: f64) -> Result<Self> {
        OrderKind::Alpha(alpha).validated()
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            OrderKind::Alpha(a) if a.is_nan() || a <= 0.0 => Err(PhantomError::BadAlpha(a)),
            other => Ok(other),
        }
    }

    /// Lex and Alpha are the orders admitted for cumulative distributions.
    pub fn is_probability_grade(self) -> bool {
        match self {
            OrderKind::Lex => true,
            OrderKind::Alpha(a) => a > 0.0,
            _ => false,
        }
    }

    pub fn require_probability_grade(self) -> Result<Self> {
        if self.is_probability_grade() {
            Ok(self)
        } else {
            Err(PhantomError::BadOrder(self.to_string()))
        }
    }

    /// Compares exactly.
    pub fn compare(self, z1: Phantom, z2: Phantom) -> Comparison {
        self.compare_tol(z1, z2, 0.0)
    }

    /// Compares, treating keys that differ by at most `tol` as equal.
    pub fn compare_tol(self, z1: Phantom, z2: Phantom, tol: f64) -> Comparison {
        let key = |x: f64, y: f64| {
            if (x - y).abs() <= tol {
                Ordering::Equal
            } else {
                x.total_cmp(&y)
            }
        };
        let o = match self {
            OrderKind::Lex => key(z1.re, z2.re).then_with(|| key(z1.ph, z2.ph)),
            OrderKind::Alpha(a) => key(z1.re + z1.ph / a, z2.re + z2.ph / a),
            OrderKind::RealTerm => key(z1.re, z2.re),
            OrderKind::AbsNorm => key(z1.abs(), z2.abs()),
        };
        Comparison::from_ordering(o)
    }
}

/// Compares under `ord`.
pub fn compare(z1: Phantom, z2: Phantom, ord: OrderKind) -> Comparison {
    ord.compare(z1, z2)
}
