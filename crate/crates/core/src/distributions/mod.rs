//! Named phantom distributions and their closed-form statistics.
//!
//! Each family is the realization-property lift of its classical
//! counterpart. The real term of every probability or density uses the
//! real terms of the parameters, and its reduction uses their reductions.
//!
//! Continuous densities are integrated along a path as `int f(z) dz`, the
//! tangent included. [`DensityForm::TangentScaled`] divides the tangent back
//! out, which only normalizes on paths with unit-speed real and reduced
//! components.

use crate::calculus::{Path, PathPoint, QuadratureConfig};
use crate::error::{PhantomError, Result};
use crate::measure::{in_restricted_zone, in_zone, ZONE_TOL};
use crate::randvar::{ContinuousPRV, DiscretePRV, RandomVariable, Threshold};
use crate::ring::{OrderKind, Phantom};

/// Largest binomial `n` accepted; keeps the coefficients exact in `f64`.
pub const MAX_BINOMIAL_N: u32 = 1000;
/// Series truncation stops once the tail bound of both components is below
/// this value.
pub const TAIL_TOL: f64 = 1e-12;
/// Half-width, in standard deviations, of the default normal path.
pub const NORMAL_HALF_WIDTH: f64 = 12.0;
/// Length, in mean lifetimes of the slower component, of the default
/// exponential path.
pub const EXPONENTIAL_LIFETIMES: f64 = 40.0;

/// How a density is scaled along its path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityForm {
    /// `f(z)` is the lifted classical density; integration multiplies by
    /// the tangent.
    #[default]
    PathMeasure,
    /// `f(z)` is the lifted classical density divided by the tangent, so
    /// the integrand is the classical density itself.
    TangentScaled,
}

#[derive(Debug, Clone)]
pub enum DistSpec {
    Bernoulli { p: Phantom },
    Binomial { n: u32, p: Phantom },
    /// Support `1, 2, ...`, truncated at `cutoff` terms at most.
    Geometric { p: Phantom, cutoff: usize },
    /// Support `0, 1, ...`, truncated at `cutoff + 1` terms at most.
    Poisson { lambda: Phantom, cutoff: usize },
    Exponential { lambda: Phantom, path: Option<Path>, form: DensityForm },
    Normal { mu: Phantom, sigma: Phantom, path: Option<Path>, form: DensityForm },
    StdNormal { path: Option<Path>, form: DensityForm },
}

impl DistSpec {
    pub fn bernoulli(p: Phantom) -> Self {
        DistSpec::Bernoulli { p }
    }

    pub fn binomial(n: u32, p: Phantom) -> Self {
        DistSpec::Binomial { n, p }
    }

    pub fn geometric(p: Phantom) -> Self {
        DistSpec::Geometric { p, cutoff: 100_000 }
    }

    pub fn poisson(lambda: Phantom) -> Self {
        DistSpec::Poisson { lambda, cutoff: 100_000 }
    }

    pub fn exponential(lambda: Phantom) -> Self {
        DistSpec::Exponential { lambda, path: None, form: DensityForm::PathMeasure }
    }

    pub fn normal(mu: Phantom, sigma: Phantom) -> Self {
        DistSpec::Normal { mu, sigma, path: None, form: DensityForm::PathMeasure }
    }

    pub fn std_normal() -> Self {
        DistSpec::StdNormal { path: None, form: DensityForm::PathMeasure }
    }

    /// Replaces the path of a continuous family. No effect on discrete ones.
    pub fn with_path(mut self, new_path: Path) -> Self {
        match &mut self {
            DistSpec::Exponential { path, .. }
            | DistSpec::Normal { path, .. }
            | DistSpec::StdNormal { path, .. } => *path = Some(new_path),
            _ => {}
        }
        self
    }

    pub fn with_form(mut self, new_form: DensityForm) -> Self {
        match &mut self {
            DistSpec::Exponential { form, .. }
            | DistSpec::Normal { form, .. }
            | DistSpec::StdNormal { form, .. } => *form = new_form,
            _ => {}
        }
        self
    }

    pub fn name(&self) -> &'static str {
        match self {
            DistSpec::Bernoulli { .. } => "bernoulli",
            DistSpec::Binomial { .. } => "binomial",
            DistSpec::Geometric { .. } => "geometric",
            DistSpec::Poisson { .. } => "poisson",
            DistSpec::Exponential { .. } => "exponential",
            DistSpec::Normal { .. } => "normal",
            DistSpec::StdNormal { .. } => "stdnormal",
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            DistSpec::Bernoulli { .. }
                | DistSpec::Binomial { .. }
                | DistSpec::Geometric { .. }
                | DistSpec::Poisson { .. }
        )
    }
}

/// A built random variable of either kind.
#[derive(Debug, Clone)]
pub enum Prv {
    Discrete(DiscretePRV),
    Continuous(ContinuousPRV),
}

impl Prv {
    pub fn as_discrete(&self) -> Option<&DiscretePRV> {
        match self {
            Prv::Discrete(x) => Some(x),
            Prv::Continuous(_) => None,
        }
    }

    pub fn as_continuous(&self) -> Option<&ContinuousPRV> {
        match self {
            Prv::Continuous(x) => Some(x),
            Prv::Discrete(_) => None,
        }
    }

    pub fn cdf(&self, z: impl Into<Threshold>, ord: OrderKind) -> Result<Phantom> {
        match self {
            Prv::Discrete(x) => x.cdf(z, ord),
            Prv::Continuous(x) => x.cdf(z, ord),
        }
    }

    fn inner(&self) -> &dyn RandomVariable {
        match self {
            Prv::Discrete(x) => x,
            Prv::Continuous(x) => x,
        }
    }
}

impl RandomVariable for Prv {
    fn moment(&self, n: u32) -> Result<Phantom> {
        self.inner().moment(n)
    }
    fn expect_fn(&self, g: &dyn Fn(Phantom) -> Phantom) -> Result<Phantom> {
        self.inner().expect_fn(g)
    }
    fn mgf(&self, zeta: Phantom) -> Result<Phantom> {
        self.inner().mgf(zeta)
    }
    fn variance(&self) -> Result<Phantom> {
        self.inner().variance()
    }
}

/// A built distribution with the mass lost to series truncation.
#[derive(Debug, Clone)]
pub struct BuiltDist {
    pub prv: Prv,
    /// `1 + p*0` minus the total mass, for truncated discrete families.
    pub residual: Option<Phantom>,
}

fn bad(msg: String) -> PhantomError {
    PhantomError::BadParameter(msg)
}

fn check_probability(p: Phantom, what: &str) -> Result<()> {
    if !in_restricted_zone(p, ZONE_TOL) {
        return Err(bad(format!(
            "{what} = {p} must lie in the probability zone and not be a zero divisor"
        )));
    }
    Ok(())
}

fn check_pseudo_positive(x: Phantom, what: &str) -> Result<()> {
    if !x.is_finite() || !x.is_pseudo_positive() {
        return Err(bad(format!("{what} = {x} must be pseudo positive")));
    }
    Ok(())
}

fn binomial_coefficient(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

fn build_binomial(n: u32, p: Phantom) -> Result<DiscretePRV> {
    let q = Phantom::ONE - p;
    let (mut re, red): (Vec<f64>, Vec<f64>) = (0..=n)
        .map(|k| {
            let c = binomial_coefficient(n, k);
            let term = |p: f64, q: f64| c * p.powi(k as i32) * q.powi((n - k) as i32);
            (term(p.re, q.re), term(p.reduction(), q.reduction()))
        })
        .unzip();
    absorb_rounding(&mut re);
    let mut probs: Vec<Phantom> = re.iter().zip(&red).map(|(&r, &h)| Phantom::from_components(r, h)).collect();
    // The stored phantom part is `red - re`, so the reductions seen by
    // component sums are `re + ph`; fix those rather than `red`.
    let mut seen: Vec<f64> = probs.iter().map(|p| p.reduction()).collect();
    if let Some(mode) = absorb_rounding(&mut seen) {
        probs[mode] = with_reduction(probs[mode].re, seen[mode]);
    }
    let support = probs.into_iter().enumerate().map(|(k, p)| (Phantom::real(k as f64), p)).collect();
    DiscretePRV::new(support)
}

/// Replaces the largest term by `1` minus the others, rounded once, so that
/// the correctly rounded sum of the terms is exactly one. Returns the index
/// of the replaced term.
fn absorb_rounding(terms: &mut [f64]) -> Option<usize> {
    let mode = (0..terms.len()).max_by(|&a, &b| terms[a].total_cmp(&terms[b]))?;
    let others = terms.iter().enumerate().filter(|&(k, _)| k != mode).map(|(_, t)| -t);
    terms[mode] = crate::randvar::exact_sum(std::iter::once(1.0).chain(others));
    Some(mode)
}

/// A phantom with real term `re` whose computed reduction is exactly `red`
/// when such a phantom part exists within a few ulps of `red - re`.
fn with_reduction(re: f64, red: f64) -> Phantom {
    let guess = red - re;
    let mut candidates = [guess; 9];
    for i in 1..=4 {
        candidates[2 * i - 1] = (0..i).fold(guess, |x, _| x.next_up());
        candidates[2 * i] = (0..i).fold(guess, |x, _| x.next_down());
    }
    let ph = candidates.into_iter().find(|&ph| re + ph == red).unwrap_or(guess);
    Phantom::new(re, ph)
}

/// Emits `(k, term_re, term_red)` until `cutoff` terms or until `tail`
/// reports a bound below [`TAIL_TOL`] for both components.
fn truncated_series(
    first_k: usize,
    cutoff: usize,
    mut next: impl FnMut(usize) -> (f64, f64),
    tail: impl Fn(usize, f64, f64) -> (f64, f64),
) -> Vec<(Phantom, Phantom)> {
    let mut out = Vec::new();
    for k in first_k..first_k + cutoff {
        let (tr, th) = next(k);
        out.push((Phantom::real(k as f64), Phantom::from_components(tr, th)));
        let (br, bh) = tail(k, tr, th);
        if br < TAIL_TOL && bh < TAIL_TOL {
            break;
        }
    }
    out
}

fn build_poisson(lambda: Phantom, cutoff: usize) -> Result<DiscretePRV> {
    let (lr, lh) = (lambda.re, lambda.reduction());
    let (mut tr, mut th) = ((-lr).exp(), (-lh).exp());
    let support = truncated_series(
        0,
        cutoff + 1,
        |k| {
            if k > 0 {
                tr *= lr / k as f64;
                th *= lh / k as f64;
            }
            (tr, th)
        },
        |k, tr, th| {
            let bound = |l: f64, t: f64| {
                let ratio = l / (k as f64 + 2.0);
                if ratio < 1.0 {
                    t * l / (k as f64 + 1.0) / (1.0 - ratio)
                } else {
                    f64::INFINITY
                }
            };
            (bound(lr, tr), bound(lh, th))
        },
    );
    DiscretePRV::subnormalized(support)
}

fn build_geometric(p: Phantom, cutoff: usize) -> Result<DiscretePRV> {
    let (pr, ph) = (p.re, p.reduction());
    let support = truncated_series(
        1,
        cutoff,
        |k| {
            let e = (k - 1) as i32;
            ((1.0 - pr).powi(e) * pr, (1.0 - ph).powi(e) * ph)
        },
        |k, _, _| ((1.0 - pr).powi(k as i32), (1.0 - ph).powi(k as i32)),
    );
    DiscretePRV::subnormalized(support)
}

/// Lifts a classical density of one real variable: real term from the real
/// parameters at `a`, reduction from the reduced parameters at `a + b`.
fn lifted(form: DensityForm, f_re: impl Fn(f64) -> f64, f_red: impl Fn(f64) -> f64, p: &PathPoint) -> Phantom {
    let f = Phantom::from_components(f_re(p.z.re), f_red(p.z.reduction()));
    match form {
        DensityForm::PathMeasure => f,
        DensityForm::TangentScaled => f.div(p.dz).unwrap_or(Phantom::ZERO),
    }
}

fn exp_density(l: f64) -> impl Fn(f64) -> f64 {
    move |x| if x >= 0.0 { l * (-l * x).exp() } else { 0.0 }
}

fn normal_density(m: f64, s: f64) -> impl Fn(f64) -> f64 {
    move |x| {
        let u = (x - m) / s;
        (-0.5 * u * u).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
    }
}

fn build_continuous(
    path: Path,
    form: DensityForm,
    density: impl Fn(&PathPoint) -> Phantom + Send + Sync + 'static,
) -> Result<ContinuousPRV> {
    let cfg = QuadratureConfig::default();
    match form {
        DensityForm::PathMeasure => ContinuousPRV::new(path, density, cfg),
        DensityForm::TangentScaled => ContinuousPRV::unnormalized(path, density, cfg),
    }
}

/// The default exponential path: the real axis from 0 to 40 mean lifetimes
/// of the slower component.
pub fn default_exponential_path(lambda: Phantom) -> Result<Path> {
    let slow = lambda.re.min(lambda.reduction());
    Path::real_line(0.0, EXPONENTIAL_LIFETIMES / slow)
}

/// The default normal path `t -> mu + sigma t` for `t` in `[-12, 12]`.
/// Its real term and reduction sweep twelve standard deviations either
/// side of their means.
pub fn default_normal_path(mu: Phantom, sigma: Phantom) -> Result<Path> {
    Path::line(mu, sigma, -NORMAL_HALF_WIDTH, NORMAL_HALF_WIDTH)
}

pub fn build(spec: &DistSpec) -> Result<BuiltDist> {
    match spec {
        DistSpec::Bernoulli { p } => {
            check_probability(*p, "p")?;
            let x = DiscretePRV::new(vec![(Phantom::ZERO, Phantom::ONE - *p), (Phantom::ONE, *p)])?;
            Ok(BuiltDist { prv: Prv::Discrete(x), residual: None })
        }
        DistSpec::Binomial { n, p } => {
            check_probability(*p, "p")?;
            if *n > MAX_BINOMIAL_N {
                return Err(bad(format!("n = {n} exceeds {MAX_BINOMIAL_N}")));
            }
            Ok(BuiltDist { prv: Prv::Discrete(build_binomial(*n, *p)?), residual: None })
        }
        DistSpec::Geometric { p, cutoff } => {
            check_probability(*p, "p")?;
            check_pseudo_positive(*p, "p")?;
            if *cutoff < 1 {
                return Err(bad("cutoff must be >= 1".into()));
            }
            let x = build_geometric(*p, *cutoff)?;
            let residual = Some(x.normalization_deficit());
            Ok(BuiltDist { prv: Prv::Discrete(x), residual })
        }
        DistSpec::Poisson { lambda, cutoff } => {
            check_pseudo_positive(*lambda, "lambda")?;
            if *cutoff < 1 {
                return Err(bad("cutoff must be >= 1".into()));
            }
            let x = build_poisson(*lambda, *cutoff)?;
            let residual = Some(x.normalization_deficit());
            Ok(BuiltDist { prv: Prv::Discrete(x), residual })
        }
        DistSpec::Exponential { lambda, path, form } => {
            check_pseudo_positive(*lambda, "lambda")?;
            let path = match path {
                Some(p) => p.clone(),
                None => default_exponential_path(*lambda)?,
            };
            let cut = path.truncation().unwrap_or(QuadratureConfig::default().infinite_truncation);
            if !path.is_pseudo_nonnegative_on_grid(1024, cut) {
                return Err(bad("exponential path leaves the pseudo nonnegative region".into()));
            }
            let (lr, lh) = (lambda.re, lambda.reduction());
            let form = *form;
            let x = build_continuous(path, form, move |p| {
                lifted(form, exp_density(lr), exp_density(lh), p)
            })?;
            Ok(BuiltDist { prv: Prv::Continuous(x), residual: None })
        }
        DistSpec::Normal { mu, sigma, path, form } => {
            if !mu.is_finite() {
                return Err(bad(format!("mu = {mu} must be finite")));
            }
            check_pseudo_positive(*sigma, "sigma")?;
            let path = match path {
                Some(p) => p.clone(),
                None => default_normal_path(*mu, *sigma)?,
            };
            let (mr, mh) = (mu.re, mu.reduction());
            let (sr, sh) = (sigma.re, sigma.reduction());
            let form = *form;
            let x = build_continuous(path, form, move |p| {
                lifted(form, normal_density(mr, sr), normal_density(mh, sh), p)
            })?;
            Ok(BuiltDist { prv: Prv::Continuous(x), residual: None })
        }
        DistSpec::StdNormal { path, form } => build(&DistSpec::Normal {
            mu: Phantom::ZERO,
            sigma: Phantom::ONE,
            path: path.clone(),
            form: *form,
        }),
    }
}

/// Analytic mean and variance, computed with ring operations.
pub fn closed_form_stats(spec: &DistSpec) -> Result<(Phantom, Phantom)> {
    match spec {
        DistSpec::Bernoulli { p } => {
            check_probability(*p, "p")?;
            Ok((*p, *p - *p * *p))
        }
        DistSpec::Binomial { n, p } => {
            check_probability(*p, "p")?;
            let n = f64::from(*n);
            Ok((*p * n, *p * (Phantom::ONE - *p) * n))
        }
        DistSpec::Geometric { p, .. } => {
            check_probability(*p, "p")?;
            check_pseudo_positive(*p, "p")?;
            let inv = p.inverse()?;
            Ok((inv, (Phantom::ONE - *p) * inv * inv))
        }
        DistSpec::Poisson { lambda, .. } => {
            check_pseudo_positive(*lambda, "lambda")?;
            Ok((*lambda, *lambda))
        }
        DistSpec::Exponential { lambda, .. } => {
            check_pseudo_positive(*lambda, "lambda")?;
            let inv = lambda.inverse()?;
            Ok((inv, inv * inv))
        }
        DistSpec::Normal { mu, sigma, .. } => {
            check_pseudo_positive(*sigma, "sigma")?;
            Ok((*mu, *sigma * *sigma))
        }
        DistSpec::StdNormal { .. } => Ok((Phantom::ZERO, Phantom::ONE)),
    }
}

/// Coefficients of `Y = u X + v` with `Y` standard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardization {
    pub u: Phantom,
    pub v: Phantom,
}

/// `u = 1/sigma` and `v = -mu/sigma` for a normal `DistSpec`.
pub fn standardize(spec: &DistSpec) -> Result<Standardization> {
    let (mu, sigma) = match spec {
        DistSpec::Normal { mu, sigma, .. } => (*mu, *sigma),
        DistSpec::StdNormal { .. } => (Phantom::ZERO, Phantom::ONE),
        other => return Err(bad(format!("cannot standardize a {} variable", other.name()))),
    };
    let u = sigma
        .inverse()
        .map_err(|_| PhantomError::DegenerateVariance(format!("sigma = {sigma}")))?;
    Ok(Standardization { u, v: -(mu * u) })
}

/// The standard phantom normal CDF along `path` (the real axis over
/// `[-12, 12]` when absent).
pub fn phi(z: impl Into<Threshold>, path: Option<Path>, ord: OrderKind, cfg: &QuadratureConfig) -> Result<Phantom> {
    let mut spec = DistSpec::std_normal();
    if let Some(p) = path {
        spec = spec.with_path(p);
    }
    let x = match build(&spec)?.prv {
        Prv::Continuous(x) => x.with_config(*cfg)?,
        Prv::Discrete(_) => unreachable!("the standard normal is continuous"),
    };
    x.cdf(z, ord)
}

/// Checks membership of the probability zone, exposed for callers that
/// validate user parameters.
pub fn is_probability(p: Phantom) -> bool {
    in_zone(p, ZONE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, ph: f64) -> Phantom {
        Phantom::new(re, ph)
    }

    fn discrete(spec: DistSpec) -> DiscretePRV {
        build(&spec).unwrap().prv.as_discrete().unwrap().clone()
    }

    #[test]
    fn binomial_two_half() {
        let x = discrete(DistSpec::binomial(2, z(0.5, 0.0)));
        assert!(x.pmf(Phantom::ONE).approx_eq(z(0.5, 0.0), 1e-15));
    }

    #[test]
    fn bernoulli_support() {
        let p = z(0.4, 0.2);
        let x = discrete(DistSpec::bernoulli(p));
        assert_eq!(x.pmf(Phantom::ONE), p);
        assert_eq!(x.pmf(Phantom::ZERO), Phantom::ONE - p);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            build(&DistSpec::poisson(z(-1.0, 0.0))),
            Err(PhantomError::BadParameter(_))
        ));
        assert!(build(&DistSpec::bernoulli(z(0.0, 0.5))).is_err());
        assert!(build(&DistSpec::bernoulli(z(0.7, 0.4))).is_err());
        assert!(build(&DistSpec::normal(Phantom::ZERO, z(1.0, -1.0))).is_err());
        assert!(build(&DistSpec::exponential(z(0.0, 1.0))).is_err());
    }

    #[test]
    fn truncated_series_residuals() {
        let b = build(&DistSpec::poisson(z(3.0, 1.5))).unwrap();
        let r = b.residual.unwrap();
        assert!(r.re.abs() < 1e-12 && r.reduction().abs() < 1e-12);
        let g = build(&DistSpec::geometric(z(0.3, 0.2))).unwrap();
        let r = g.residual.unwrap();
        assert!(r.re.abs() < 1e-12 && r.reduction().abs() < 1e-12);
        let short = build(&DistSpec::Poisson { lambda: z(3.0, 0.0), cutoff: 2 }).unwrap();
        assert!(short.residual.unwrap().re > 0.1);
    }

    #[test]
    fn closed_forms() {
        let (m, _) = closed_form_stats(&DistSpec::exponential(z(2.0, 2.0))).unwrap();
        assert_eq!(m, z(0.5, -0.25));
        let (mu, sigma) = (z(1.0, 0.5), z(2.0, 1.0));
        let (m, v) = closed_form_stats(&DistSpec::normal(mu, sigma)).unwrap();
        assert_eq!((m, v), (mu, sigma * sigma));
        let l = z(3.0, -1.0);
        assert_eq!(closed_form_stats(&DistSpec::poisson(l)).unwrap(), (l, l));
    }

    #[test]
    fn standardization() {
        let s = standardize(&DistSpec::std_normal()).unwrap();
        assert_eq!(s, Standardization { u: Phantom::ONE, v: Phantom::ZERO });
        let s = standardize(&DistSpec::normal(z(1.0, 1.0), z(2.0, 0.0))).unwrap();
        assert!(s.u.approx_eq(z(0.5, 0.0), 1e-15));
        assert!(s.v.approx_eq(z(-0.5, -0.5), 1e-15));
        assert!(matches!(
            standardize(&DistSpec::normal(Phantom::ZERO, z(1.0, -1.0))),
            Err(PhantomError::DegenerateVariance(_))
        ));
    }

    #[test]
    fn phi_values() {
        let cfg = QuadratureConfig::default();
        let half = phi(Phantom::ZERO, None, OrderKind::Lex, &cfg).unwrap();
        assert!(half.approx_eq(z(0.5, 0.0), 1e-9));
        let one = phi(Threshold::PosInfinity, None, OrderKind::Lex, &cfg).unwrap();
        assert!(one.approx_eq(Phantom::ONE, 1e-9));
        let q = phi(z(1.96, 0.0), None, OrderKind::Lex, &cfg).unwrap();
        assert!(q.approx_eq(z(0.975, 0.0), 2e-4));
    }

    #[test]
    fn tangent_scaled_form_matches_on_the_real_axis() {
        let spec = DistSpec::exponential(z(1.5, 0.0)).with_form(DensityForm::TangentScaled);
        let x = build(&spec).unwrap().prv;
        assert!(x.as_continuous().unwrap().normalization().unwrap().approx_eq(Phantom::ONE, 1e-9));
    }
}
