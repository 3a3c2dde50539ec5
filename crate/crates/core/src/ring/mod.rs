//! The phantom number ring `PH = R + pR`, where the phantom unit `p`
//! satisfies `p * p = p`.
//!
//! A phantom number `a + p*b` behaves like the interval with endpoints
//! `a` and `a + b`. Every ring operation acts independently on the real
//! term `a` and on the reduction `a + b`, which is the computational fact
//! most functions in this crate rely on.

mod functions;
mod order;

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{PhantomError, Result};

pub use order::{compare, Comparison, OrderKind};

/// Absolute tolerance on `|a|` and `|a + b|` used to detect zero divisors.
pub const ZERO_DIVISOR_TOL: f64 = 1e-12;

/// A phantom number `re + p*ph`.
///
/// Both fields are expected to be finite. Operations that overflow follow
/// ordinary `f64` semantics on each component.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Phantom {
    pub re: f64,
    pub ph: f64,
}

/// Sign classification of a phantom number, most specific tag first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignClass {
    Zero,
    /// `a > 0` and `b > 0`.
    Positive,
    /// `a < 0` and `b < 0`.
    Negative,
    /// `a > 0` and `a + b > 0`, but not `Positive`.
    PseudoPositive,
    /// `a < 0` and `a + b < 0`, but not `Negative`.
    PseudoNegative,
    /// Nonzero with `a = 0` or `a + b = 0`.
    ZeroDivisor,
    /// `a` and `a + b` are nonzero with opposite signs.
    Indefinite,
}

impl Phantom {
    pub const ZERO: Phantom = Phantom { re: 0.0, ph: 0.0 };
    pub const ONE: Phantom = Phantom { re: 1.0, ph: 0.0 };
    /// The phantom unit `p`.
    pub const P: Phantom = Phantom { re: 0.0, ph: 1.0 };

    pub const fn new(re: f64, ph: f64) -> Self {
        Phantom { re, ph }
    }

    pub const fn real(re: f64) -> Self {
        Phantom { re, ph: 0.0 }
    }

    /// Builds the phantom number whose real term is `re` and whose
    /// reduction is `red`.
    pub fn from_components(re: f64, red: f64) -> Self {
        Phantom { re, ph: red - re }
    }

    /// The reduction `a + b`, a ring homomorphism onto the reals.
    pub fn reduction(self) -> f64 {
        self.re + self.ph
    }

    /// `(a + b) - p*b`. Swaps the roles of `a` and `a + b`.
    pub fn conjugate(self) -> Self {
        Phantom::new(self.re + self.ph, -self.ph)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.ph.is_finite()
    }

    pub fn is_real(self) -> bool {
        self.ph == 0.0
    }

    pub fn classify(self) -> SignClass {
        self.classify_tol(ZERO_DIVISOR_TOL)
    }

    /// Classification with an explicit zero tolerance on `|a|` and `|a + b|`.
    pub fn classify_tol(self, tol: f64) -> SignClass {
        let a = self.re;
        let red = self.reduction();
        let a_zero = a.abs() <= tol;
        let red_zero = red.abs() <= tol;
        if a_zero && red_zero {
            return SignClass::Zero;
        }
        if a_zero || red_zero {
            return SignClass::ZeroDivisor;
        }
        match (a > 0.0, red > 0.0) {
            (true, true) if self.ph > 0.0 => SignClass::Positive,
            (true, true) => SignClass::PseudoPositive,
            (false, false) if self.ph < 0.0 => SignClass::Negative,
            (false, false) => SignClass::PseudoNegative,
            _ => SignClass::Indefinite,
        }
    }

    pub fn is_zero_divisor(self) -> bool {
        self.classify() == SignClass::ZeroDivisor
    }

    pub fn is_invertible(self) -> bool {
        !matches!(self.classify(), SignClass::Zero | SignClass::ZeroDivisor)
    }

    pub fn is_pseudo_positive(self) -> bool {
        matches!(self.classify(), SignClass::Positive | SignClass::PseudoPositive)
    }

    /// Pseudo positive or zero, i.e. `a >= 0` and `a + b >= 0` up to the
    /// zero-divisor tolerance.
    pub fn is_pseudo_nonnegative(self) -> bool {
        self.re >= -ZERO_DIVISOR_TOL && self.reduction() >= -ZERO_DIVISOR_TOL
    }

    /// `(1/a) + p*(1/(a+b) - 1/a)`.
    pub fn inverse(self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(PhantomError::NotInvertible(self.to_string()));
        }
        Ok(Phantom::from_components(1.0 / self.re, 1.0 / self.reduction()))
    }

    /// Ring division `self / rhs`.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Phantom) -> Result<Self> {
        if !rhs.is_invertible() {
            return Err(PhantomError::NotInvertible(rhs.to_string()));
        }
        Ok(Phantom::from_components(
            self.re / rhs.re,
            self.reduction() / rhs.reduction(),
        ))
    }

    /// `a^n + p*((a+b)^n - a^n)`; negative exponents require invertibility.
    pub fn pow_int(self, n: i32) -> Result<Self> {
        if n < 0 && !self.is_invertible() {
            return Err(PhantomError::NotInvertible(self.to_string()));
        }
        Ok(self.map_components(|x| x.powi(n)))
    }

    /// Scales by a real number.
    pub fn scale(self, k: f64) -> Self {
        Phantom::new(self.re * k, self.ph * k)
    }

    /// Applies a real function to the real term and to the reduction and
    /// reassembles the result. This is the lifting every elementary
    /// function in this module uses.
    pub fn map_components(self, f: impl Fn(f64) -> f64) -> Self {
        Phantom::from_components(f(self.re), f(self.reduction()))
    }

    /// The modulus `sqrt((a^2 + (a+b)^2) / 2)`.
    pub fn abs(self) -> f64 {
        let red = self.reduction();
        ((self.re * self.re + red * red) / 2.0).sqrt()
    }

    /// The real number `a + b/alpha`.
    pub fn alpha_value(self, alpha: f64) -> Result<f64> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(PhantomError::BadAlpha(alpha));
        }
        Ok(self.re + self.ph / alpha)
    }

    /// The metric induced by the modulus.
    pub fn distance(self, other: Phantom) -> f64 {
        (self - other).abs()
    }

    /// Componentwise absolute-tolerance equality.
    pub fn approx_eq(self, other: Phantom, tol: f64) -> bool {
        (self.re - other.re).abs() <= tol && (self.ph - other.ph).abs() <= tol
    }

    /// Equality with a tolerance relative to the magnitude of both sides.
    pub fn approx_eq_rel(self, other: Phantom, rel: f64) -> bool {
        let scale = 1.0_f64
            .max(self.re.abs())
            .max(self.ph.abs())
            .max(other.re.abs())
            .max(other.ph.abs());
        self.approx_eq(other, rel * scale)
    }
}

impl From<f64> for Phantom {
    fn from(re: f64) -> Self {
        Phantom::real(re)
    }
}

impl fmt::Display for Phantom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ph < 0.0 {
            write!(f, "{} - p*{}", self.re, -self.ph)
        } else {
            write!(f, "{} + p*{}", self.re, self.ph)
        }
    }
}

impl Add for Phantom {
    type Output = Phantom;
    fn add(self, rhs: Phantom) -> Phantom {
        Phantom::new(self.re + rhs.re, self.ph + rhs.ph)
    }
}

impl Sub for Phantom {
    type Output = Phantom;
    fn sub(self, rhs: Phantom) -> Phantom {
        Phantom::new(self.re - rhs.re, self.ph - rhs.ph)
    }
}

impl Neg for Phantom {
    type Output = Phantom;
    fn neg(self) -> Phantom {
        Phantom::new(-self.re, -self.ph)
    }
}

impl Mul for Phantom {
    type Output = Phantom;
    fn mul(self, rhs: Phantom) -> Phantom {
        Phantom::new(
            self.re * rhs.re,
            self.re * rhs.ph + self.ph * rhs.re + self.ph * rhs.ph,
        )
    }
}

impl Mul<f64> for Phantom {
    type Output = Phantom;
    fn mul(self, rhs: f64) -> Phantom {
        self.scale(rhs)
    }
}

impl Mul<Phantom> for f64 {
    type Output = Phantom;
    fn mul(self, rhs: Phantom) -> Phantom {
        rhs.scale(self)
    }
}

impl AddAssign for Phantom {
    fn add_assign(&mut self, rhs: Phantom) {
        *self = *self + rhs;
    }
}

impl SubAssign for Phantom {
    fn sub_assign(&mut self, rhs: Phantom) {
        *self = *self - rhs;
    }
}

impl MulAssign for Phantom {
    fn mul_assign(&mut self, rhs: Phantom) {
        *self = *self * rhs;
    }
}

impl Sum for Phantom {
    fn sum<I: Iterator<Item = Phantom>>(iter: I) -> Phantom {
        iter.fold(Phantom::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Phantom> for Phantom {
    fn sum<I: Iterator<Item = &'a Phantom>>(iter: I) -> Phantom {
        iter.copied().sum()
    }
}

impl Product for Phantom {
    fn product<I: Iterator<Item = Phantom>>(iter: I) -> Phantom {
        iter.fold(Phantom::ONE, Mul::mul)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, ph: f64) -> Phantom {
        Phantom::new(re, ph)
    }

    #[test]
    fn addition_examples() {
        assert_eq!(z(1.0, 2.0) + z(3.0, -1.0), z(4.0, 1.0));
        assert_eq!(z(1.5, -2.0) + Phantom::ZERO, z(1.5, -2.0));
        assert_eq!(z(1.5, -2.0) + -z(1.5, -2.0), Phantom::ZERO);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(z(2.0, 3.0) * z(1.0, 1.0), z(2.0, 8.0));
        assert_eq!(z(2.0, 3.0) * Phantom::ONE, z(2.0, 3.0));
        let b = 1.7;
        assert_eq!(z(0.0, b) * z(-b, b), Phantom::ZERO);
        assert_eq!(Phantom::P * Phantom::P, Phantom::P);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(z(2.0, 2.0).inverse().unwrap(), z(0.5, -0.25));
        assert_eq!(Phantom::ONE.inverse().unwrap(), Phantom::ONE);
        assert!(matches!(
            z(0.0, 5.0).inverse(),
            Err(PhantomError::NotInvertible(_))
        ));
        assert!(Phantom::ZERO.inverse().is_err());
    }

    #[test]
    fn division_examples() {
        assert_eq!(z(4.0, 4.0).div(z(2.0, 2.0)).unwrap(), z(2.0, 0.0));
        let w = z(3.0, -1.25);
        assert!(w.div(w).unwrap().approx_eq(Phantom::ONE, 1e-15));
        assert!(Phantom::ONE.div(z(0.0, 1.0)).is_err());
    }

    #[test]
    fn integer_power_examples() {
        assert_eq!(z(1.0, 1.0).pow_int(3).unwrap(), z(1.0, 7.0));
        assert_eq!(z(-4.0, 9.0).pow_int(0).unwrap(), Phantom::ONE);
        assert_eq!(z(2.0, 2.0).pow_int(-1).unwrap(), z(0.5, -0.25));
        assert!(z(3.0, -3.0).pow_int(-2).is_err());
    }

    #[test]
    fn conjugate_and_reduction() {
        assert_eq!(z(1.0, 2.0).conjugate(), z(3.0, -2.0));
        assert_eq!(z(4.0, 0.0).conjugate(), z(4.0, 0.0));
        assert_eq!(z(1.0, 2.0).conjugate().conjugate(), z(1.0, 2.0));
        assert_eq!(z(1.0, 2.0).reduction(), 3.0);
        assert_eq!(z(-2.5, 0.0).reduction(), -2.5);
        let (u, v) = (z(1.5, -0.5), z(-2.0, 4.0));
        assert_eq!((u * v).reduction(), u.reduction() * v.reduction());
    }

    #[test]
    fn classification() {
        assert_eq!(z(3.0, -3.0).classify(), SignClass::ZeroDivisor);
        assert_eq!(z(1.0, -0.5).classify(), SignClass::PseudoPositive);
        assert_eq!(z(0.0, 0.0).classify(), SignClass::Zero);
        assert_eq!(z(1.0, 0.5).classify(), SignClass::Positive);
        assert_eq!(z(-1.0, -0.5).classify(), SignClass::Negative);
        assert_eq!(z(-1.0, 0.5).classify(), SignClass::PseudoNegative);
        assert_eq!(z(1.0, -2.0).classify(), SignClass::Indefinite);
        assert_eq!(z(0.0, 2.0).classify(), SignClass::ZeroDivisor);
        assert_eq!(z(1e-13, 0.0).classify(), SignClass::Zero);
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(z(1.0, 0.0).abs(), 1.0);
        assert!((z(0.0, 2.0).abs() - 2f64.sqrt()).abs() < 1e-15);
        assert!((z(3.0, -2.0).abs() - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(z(3.0, -2.0).abs(), z(3.0, -2.0).conjugate().abs());
    }

    #[test]
    fn alpha_value_examples() {
        assert_eq!(z(1.0, 2.0).alpha_value(2.0).unwrap(), 2.0);
        assert_eq!(z(7.0, 0.0).alpha_value(0.3).unwrap(), 7.0);
        let w = z(1.25, -3.5);
        assert_eq!(
            w.alpha_value(2.0).unwrap(),
            w.conjugate().alpha_value(2.0).unwrap()
        );
        assert!(matches!(w.alpha_value(0.0), Err(PhantomError::BadAlpha(_))));
    }

    #[test]
    fn conjugate_difference_and_distance() {
        let w = z(0.75, -1.5);
        assert_eq!(w - w.conjugate(), z(1.5, -3.0));
        assert!((w.distance(w.conjugate()) - 1.5).abs() < 1e-15);
    }
}
