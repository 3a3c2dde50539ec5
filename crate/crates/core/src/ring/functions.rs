use super::Phantom;
use crate::error::{PhantomError, Result};

fn real_nth_root(x: f64, n: u32) -> f64 {
    match n {
        1 => x,
        2 => x.sqrt(),
        3 => x.cbrt(),
        _ if x < 0.0 => -(-x).powf(1.0 / f64::from(n)),
        _ => x.powf(1.0 / f64::from(n)),
    }
}

impl Phantom {
    /// Principal real `n`-th root on both components. Even roots need both
    /// `a` and `a + b` nonnegative; odd roots of negatives use the negative
    /// real root.
    pub fn nth_root(self, n: u32) -> Result<Phantom> {
        if n == 0 {
            return Err(PhantomError::BadParameter("root index must be >= 1".into()));
        }
        if n % 2 == 0 && (self.re < 0.0 || self.reduction() < 0.0) {
            return Err(PhantomError::RootDomain(self.to_string()));
        }
        Ok(self.map_components(|x| real_nth_root(x, n)))
    }

    pub fn sqrt(self) -> Result<Phantom> {
        self.nth_root(2)
    }

    /// `e^a + p*(e^(a+b) - e^a)`.
    pub fn exp(self) -> Phantom {
        self.map_components(f64::exp)
    }

    /// `ln a + p*(ln(a+b) - ln a)` for pseudo positive input.
    pub fn ln(self) -> Result<Phantom> {
        if !self.is_pseudo_positive() {
            return Err(PhantomError::LogDomain(self.to_string()));
        }
        Ok(self.map_components(f64::ln))
    }
}
