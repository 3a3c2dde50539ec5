use serde::{Deserialize, Serialize};

use crate::ring::Phantom;

/// A polynomial with phantom coefficients, lowest degree first.
///
/// Trailing zero coefficients are stripped, so the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PhantomPolynomial {
    coefficients: Vec<Phantom>,
}

impl PhantomPolynomial {
    pub fn new(mut coefficients: Vec<Phantom>) -> Self {
        while coefficients.last().is_some_and(|c| *c == Phantom::ZERO) {
            coefficients.pop();
        }
        PhantomPolynomial { coefficients }
    }

    pub fn zero() -> Self {
        PhantomPolynomial::default()
    }

    pub fn constant(c: Phantom) -> Self {
        PhantomPolynomial::new(vec![c])
    }

    /// `c * x^n`.
    pub fn monomial(c: Phantom, n: usize) -> Self {
        let mut coefficients = vec![Phantom::ZERO; n];
        coefficients.push(c);
        PhantomPolynomial::new(coefficients)
    }

    pub fn coefficients(&self) -> &[Phantom] {
        &self.coefficients
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Evaluates through the two real polynomials: the one with the real
    /// terms of the coefficients at `a`, and the one with the reductions of
    /// the coefficients at `a + b`.
    pub fn eval(&self, z: Phantom) -> Phantom {
        let real = horner(self.coefficients.iter().map(|c| c.re), z.re);
        let reduced = horner(self.coefficients.iter().map(|c| c.reduction()), z.reduction());
        Phantom::from_components(real, reduced)
    }

    /// Horner evaluation carried out with phantom ring arithmetic.
    pub fn eval_ring(&self, z: Phantom) -> Phantom {
        self.coefficients
            .iter()
            .rev()
            .fold(Phantom::ZERO, |acc, &c| acc * z + c)
    }

    /// Conjugates every coefficient.
    pub fn conjugate(&self) -> Self {
        PhantomPolynomial::new(self.coefficients.iter().map(|c| c.conjugate()).collect())
    }

    pub fn derivative(&self) -> Self {
        PhantomPolynomial::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(k as f64))
                .collect(),
        )
    }

    /// The antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coefficients = Vec::with_capacity(self.coefficients.len() + 1);
        coefficients.push(Phantom::ZERO);
        coefficients.extend(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(1.0 / (k as f64 + 1.0))),
        );
        PhantomPolynomial::new(coefficients)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        let get = |v: &[Phantom], k: usize| v.get(k).copied().unwrap_or(Phantom::ZERO);
        PhantomPolynomial::new(
            (0..n)
                .map(|k| get(&self.coefficients, k) + get(&other.coefficients, k))
                .collect(),
        )
    }

    pub fn scale(&self, w: Phantom) -> Self {
        PhantomPolynomial::new(self.coefficients.iter().map(|&c| c * w).collect())
    }
}

fn horner(coefficients: impl DoubleEndedIterator<Item = f64>, x: f64) -> f64 {
    coefficients.rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, ph: f64) -> Phantom {
        Phantom::new(re, ph)
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let f = PhantomPolynomial::new(vec![Phantom::ONE, Phantom::ZERO, Phantom::ZERO]);
        assert_eq!(f.degree(), Some(0));
        assert!(PhantomPolynomial::new(vec![Phantom::ZERO]).is_zero());
    }

    #[test]
    fn square_at_one_plus_p() {
        let f = PhantomPolynomial::monomial(Phantom::ONE, 2);
        assert_eq!(f.eval(z(1.0, 1.0)), z(1.0, 3.0));
    }

    #[test]
    fn constants_ignore_the_argument() {
        let c = z(2.5, -0.5);
        let f = PhantomPolynomial::constant(c);
        assert_eq!(f.eval(z(-3.0, 7.0)), c);
    }

    #[test]
    fn realization_matches_ring_horner() {
        let f = PhantomPolynomial::new(vec![z(1.0, 2.0), z(-0.5, 0.25), z(3.0, -1.0)]);
        let x = z(0.7, -1.3);
        assert!(f.eval(x).approx_eq_rel(f.eval_ring(x), 1e-13));
    }

    #[test]
    fn conjugate_of_linear() {
        let f = PhantomPolynomial::monomial(z(1.0, 2.0), 1);
        assert_eq!(f.conjugate(), PhantomPolynomial::monomial(z(3.0, -2.0), 1));
        let g = PhantomPolynomial::new(vec![z(1.0, 0.0), z(-2.0, 0.0)]);
        assert_eq!(g.conjugate(), g);
    }

    #[test]
    fn derivative_of_cube() {
        let f = PhantomPolynomial::monomial(Phantom::ONE, 3);
        assert_eq!(f.derivative().eval(z(1.0, 1.0)), z(3.0, 9.0));
        assert!(PhantomPolynomial::constant(z(4.0, 1.0)).derivative().is_zero());
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let f = PhantomPolynomial::new(vec![z(0.0, 0.0), z(1.0, 2.0), z(3.0, -1.0)]);
        assert_eq!(f.antiderivative().derivative(), f);
    }
}
