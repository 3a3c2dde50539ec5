use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::normal::std_normal_cdf;
use super::rng::{UniformStream, RNG_ALGORITHM};
use crate::error::{PhantomError, Result};
use crate::randvar::DiscretePRV;
use crate::ring::Phantom;

/// Which classical variable a phantom variable is sampled as.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selection {
    /// Real terms of the values under real terms of the probabilities.
    #[serde(rename = "re")]
    RealComponent,
    /// Reductions of the values under reduced probabilities.
    #[serde(rename = "red")]
    ReducedComponent,
    /// Value midpoints `a + b/2` under probabilities `re + ph/2`.
    #[serde(rename = "mid")]
    Midpoint,
}

impl Selection {
    pub fn as_str(self) -> &'static str {
        match self {
            Selection::RealComponent => "re",
            Selection::ReducedComponent => "red",
            Selection::Midpoint => "mid",
        }
    }
}

impl std::str::FromStr for Selection {
    type Err = PhantomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "re" => Ok(Selection::RealComponent),
            "red" => Ok(Selection::ReducedComponent),
            "mid" => Ok(Selection::Midpoint),
            other => Err(PhantomError::BadParameter(format!("unknown component {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub reps: usize,
    pub n: usize,
    pub selection: Selection,
}

impl SimConfig {
    pub fn new(seed: u64, reps: usize, n: usize, selection: Selection) -> Result<Self> {
        SimConfig { seed, reps, n, selection }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.reps < 1 || self.n < 1 {
            return Err(PhantomError::BadParameter(format!(
                "reps = {} and n = {} must both be at least 1",
                self.reps, self.n
            )));
        }
        Ok(self)
    }
}

/// A classical finite distribution drawn by inverse transform.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentLaw {
    values: Vec<f64>,
    cumulative: Vec<f64>,
    mean: f64,
    variance: f64,
}

impl ComponentLaw {
    /// The classical law `X` is sampled as under `selection`. `X` must have
    /// no zero-divisor probabilities.
    pub fn new(x: &DiscretePRV, selection: Selection) -> Result<Self> {
        if !x.is_strict() {
            return Err(PhantomError::InvalidVariable(
                "sampling needs a variable without zero-divisor probabilities".into(),
            ));
        }
        let pairs: Vec<(f64, f64)> = match selection {
            Selection::RealComponent => x.real_component(),
            Selection::ReducedComponent => x.reduced_component(),
            Selection::Midpoint => x
                .support()
                .iter()
                .map(|(v, p)| (v.re + 0.5 * v.ph, p.re + 0.5 * p.ph))
                .collect(),
        };
        let total: f64 = pairs.iter().map(|(_, p)| p).sum();
        if !(total > 0.0) {
            return Err(PhantomError::InvalidVariable("component probabilities sum to zero".into()));
        }
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(pairs.len());
        for (_, p) in &pairs {
            acc += p / total;
            cumulative.push(acc);
        }
        let mean = pairs.iter().map(|(v, p)| v * p).sum::<f64>() / total;
        let variance = pairs.iter().map(|(v, p)| (v - mean).powi(2) * p).sum::<f64>() / total;
        Ok(ComponentLaw { values: pairs.into_iter().map(|(v, _)| v).collect(), cumulative, mean, variance })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Values that carry positive probability.
    fn atoms(&self) -> impl Iterator<Item = f64> + '_ {
        let mut prev = 0.0;
        self.values.iter().zip(&self.cumulative).filter_map(move |(v, c)| {
            let keep = *c > prev;
            prev = *c;
            keep.then_some(*v)
        })
    }

    /// The inverse-CDF draw for a uniform `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let k = self.cumulative.partition_point(|c| *c <= u);
        self.values[k.min(self.values.len() - 1)]
    }

    /// The largest `h` with every atom on `v0 + h Z`, when one exists with
    /// tolerance `1e-9`. `None` for a single atom or no common span.
    pub fn lattice_span(&self) -> Option<f64> {
        let atoms: Vec<f64> = self.atoms().collect();
        let first = *atoms.first()?;
        let mut h = 0.0_f64;
        for v in &atoms[1..] {
            h = float_gcd(h, (v - first).abs())?;
        }
        (h > 0.0).then_some(h)
    }
}

fn float_gcd(a: f64, b: f64) -> Option<f64> {
    let tol = 1e-9 * a.max(b).max(1.0);
    let (mut a, mut b) = (a.max(b), a.min(b));
    for _ in 0..64 {
        if b <= tol {
            return Some(a);
        }
        (a, b) = (b, a % b);
    }
    None
}

/// A lazy stream of `n` classical samples for one repetition.
#[derive(Debug, Clone)]
pub struct SampleStream<'a> {
    law: &'a ComponentLaw,
    uniforms: UniformStream,
    left: usize,
}

impl Iterator for SampleStream<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        Some(self.law.quantile(self.uniforms.next_f64()))
    }
}

impl ComponentLaw {
    /// The samples of repetition `rep`. Repetition `r` reads ChaCha stream
    /// `r` of the seed, so repetitions never overlap.
    pub fn stream(&self, seed: u64, rep: usize, n: usize) -> SampleStream<'_> {
        SampleStream { law: self, uniforms: UniformStream::new(seed, rep as u64), left: n }
    }
}

/// Per-repetition sample streams of `X` under `cfg`.
pub fn sample_iid<'a>(law: &'a ComponentLaw, cfg: &SimConfig) -> Result<Vec<SampleStream<'a>>> {
    let cfg = cfg.validated()?;
    Ok((0..cfg.reps).map(|r| law.stream(cfg.seed, r, cfg.n)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltBin {
    pub bin: f64,
    pub empirical: f64,
    pub target: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Wlln,
    Clt,
    Slln,
}

impl Law {
    pub fn as_str(self) -> &'static str {
        match self {
            Law::Wlln => "wlln",
            Law::Clt => "clt",
            Law::Slln => "slln",
        }
    }
}

impl std::str::FromStr for Law {
    type Err = PhantomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wlln" => Ok(Law::Wlln),
            "clt" => Ok(Law::Clt),
            "slln" => Ok(Law::Slln),
            other => Err(PhantomError::BadParameter(format!("unknown law {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub law: Law,
    pub selection: Selection,
    pub rng: String,
    pub seed: u64,
    pub n: usize,
    pub reps: usize,
    /// Mean over repetitions of the sample mean at `n`.
    pub empirical_mean: f64,
    pub target_mean: f64,
    /// Mean over repetitions of `|M_n - target_mean|` at `n`.
    pub deviation: f64,
    /// Continuity-corrected Kolmogorov distance for lattice variables,
    /// the plain distance otherwise.
    pub ks_statistic: Option<f64>,
    /// The plain sup distance between the empirical CDF and the normal CDF.
    pub ks_raw: Option<f64>,
    /// Span of the standardized lattice, when the variable has one.
    pub lattice_span: Option<f64>,
    pub epsilon: Option<f64>,
    pub slln_fraction: Option<f64>,
    pub per_n_curve: Vec<CurvePoint>,
    pub clt_bins: Vec<CltBin>,
}

impl SimReport {
    fn base(law: Law, cfg: &SimConfig, target_mean: f64) -> Self {
        SimReport {
            law,
            selection: cfg.selection,
            rng: RNG_ALGORITHM.to_string(),
            seed: cfg.seed,
            n: cfg.n,
            reps: cfg.reps,
            empirical_mean: 0.0,
            target_mean,
            deviation: 0.0,
            ks_statistic: None,
            ks_raw: None,
            lattice_span: None,
            epsilon: None,
            slln_fraction: None,
            per_n_curve: Vec::new(),
            clt_bins: Vec::new(),
        }
    }
}

/// `1, 2, 4, ...` up to `n`, with `n` itself last.
pub fn octave_grid(n: usize) -> Vec<usize> {
    let mut grid: Vec<usize> = std::iter::successors(Some(1usize), |k| k.checked_mul(2))
        .take_while(|k| *k < n)
        .collect();
    grid.push(n);
    grid
}

struct RepTrace {
    /// `M_k - mu` at each grid point.
    deviations: Vec<f64>,
    within_window: bool,
}

/// Runs one repetition, accumulating `sum (x - mu) / k` so that a constant
/// variable has deviation exactly zero.
fn trace(law: &ComponentLaw, cfg: &SimConfig, rep: usize, grid: &[usize], epsilon: Option<f64>) -> RepTrace {
    let mu = law.mean();
    let n = cfg.n;
    let window_start = n - (n / 10).max(1) + 1;
    let mut sum = 0.0;
    let mut deviations = Vec::with_capacity(grid.len());
    let mut next = 0;
    let mut within_window = true;
    for (i, x) in law.stream(cfg.seed, rep, n).enumerate() {
        let k = i + 1;
        sum += x - mu;
        let dev = sum / k as f64;
        if let Some(eps) = epsilon {
            if k >= window_start && dev.abs() > eps {
                within_window = false;
            }
        }
        if grid[next] == k {
            deviations.push(dev);
            next += 1;
        }
    }
    RepTrace { deviations, within_window }
}

fn run_traces(law: &ComponentLaw, cfg: &SimConfig, epsilon: Option<f64>) -> (Vec<usize>, Vec<RepTrace>) {
    let grid = octave_grid(cfg.n);
    let traces = (0..cfg.reps)
        .into_par_iter()
        .map(|r| trace(law, cfg, r, &grid, epsilon))
        .collect();
    (grid, traces)
}

fn fill_curve(report: &mut SimReport, grid: &[usize], traces: &[RepTrace]) {
    let reps = traces.len() as f64;
    report.per_n_curve = grid
        .iter()
        .enumerate()
        .map(|(g, &n)| CurvePoint {
            n,
            deviation: traces.iter().map(|t| t.deviations[g].abs()).sum::<f64>() / reps,
        })
        .collect();
    let last = grid.len() - 1;
    report.deviation = report.per_n_curve[last].deviation;
    report.empirical_mean =
        report.target_mean + traces.iter().map(|t| t.deviations[last]).sum::<f64>() / reps;
}

/// Sample means of the selected component on an octave grid of `n`.
pub fn wlln_experiment(x: &DiscretePRV, cfg: &SimConfig) -> Result<SimReport> {
    let cfg = cfg.validated()?;
    let law = ComponentLaw::new(x, cfg.selection)?;
    let mut report = SimReport::base(Law::Wlln, &cfg, law.mean());
    let (grid, traces) = run_traces(&law, &cfg, None);
    fill_curve(&mut report, &grid, &traces);
    Ok(report)
}

/// Running means of the selected component; reports the fraction of
/// repetitions whose last 10% of running means stay within `epsilon` of the
/// component mean.
pub fn slln_experiment(x: &DiscretePRV, cfg: &SimConfig, epsilon: f64) -> Result<SimReport> {
    let cfg = cfg.validated()?;
    if !(epsilon >= 0.0) {
        return Err(PhantomError::BadParameter(format!("epsilon = {epsilon} must be nonnegative")));
    }
    let law = ComponentLaw::new(x, cfg.selection)?;
    let mut report = SimReport::base(Law::Slln, &cfg, law.mean());
    let (grid, traces) = run_traces(&law, &cfg, Some(epsilon));
    fill_curve(&mut report, &grid, &traces);
    report.epsilon = Some(epsilon);
    report.slln_fraction =
        Some(traces.iter().filter(|t| t.within_window).count() as f64 / traces.len() as f64);
    Ok(report)
}

/// Grid of the CDF comparison table written by the CLI.
pub const CLT_BIN_GRID: [f64; 25] = {
    let mut g = [0.0; 25];
    let mut i = 0;
    while i < 25 {
        g[i] = -3.0 + 0.25 * i as f64;
        i += 1;
    }
    g
};

/// Kolmogorov distances of sorted samples from the standard normal.
/// Returns `(corrected, raw)`; with `span = Some(h)` each atom `w` is
/// compared against `Phi(w +- h/2)`, the continuity-corrected normal mass.
/// Samples within `h * 1e-6` of each other count as one atom, absorbing the
/// rounding of the standardization.
pub fn ks_distances(sorted: &[f64], span: Option<f64>) -> (f64, f64) {
    let m = sorted.len() as f64;
    let half = span.map_or(0.0, |h| h / 2.0);
    let merge = span.map_or(0.0, |h| h * 1e-6);
    let (mut corrected, mut raw) = (0.0_f64, 0.0_f64);
    let mut i = 0;
    while i < sorted.len() {
        let w = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] - w <= merge {
            j += 1;
        }
        let (before, after) = (i as f64 / m, j as f64 / m);
        let phi = std_normal_cdf(w);
        raw = raw.max((after - phi).abs()).max((before - phi).abs());
        corrected = corrected
            .max((after - std_normal_cdf(w + half)).abs())
            .max((before - std_normal_cdf(w - half)).abs());
        i = j;
    }
    (corrected, raw)
}

/// `W_n = (S_n - n mu) / (sigma sqrt n)` for the selected component across
/// repetitions, compared with the standard normal CDF.
pub fn clt_experiment(x: &DiscretePRV, cfg: &SimConfig) -> Result<SimReport> {
    let cfg = cfg.validated()?;
    let law = ComponentLaw::new(x, cfg.selection)?;
    if !(law.variance() > 1e-15) {
        return Err(PhantomError::DegenerateVariance(format!(
            "the {} component has variance {}",
            cfg.selection.as_str(),
            law.variance()
        )));
    }
    let (mu, sigma) = (law.mean(), law.variance().sqrt());
    let scale = sigma * (cfg.n as f64).sqrt();
    let mut report = SimReport::base(Law::Clt, &cfg, mu);
    let (grid, traces) = run_traces(&law, &cfg, None);
    fill_curve(&mut report, &grid, &traces);
    let last = grid.len() - 1;
    let n = cfg.n as f64;
    let mut w: Vec<f64> = traces.iter().map(|t| t.deviations[last] * n / scale).collect();
    w.sort_by(f64::total_cmp);
    let span = law.lattice_span().map(|h| h / scale);
    let (corrected, raw) = ks_distances(&w, span);
    report.ks_statistic = Some(corrected);
    report.ks_raw = Some(raw);
    report.lattice_span = span;
    let m = w.len() as f64;
    report.clt_bins = CLT_BIN_GRID
        .iter()
        .map(|&b| CltBin {
            bin: b,
            empirical: w.partition_point(|v| *v <= b) as f64 / m,
            target: std_normal_cdf(b),
        })
        .collect();
    Ok(report)
}

/// Standardizes a phantom sum with ring arithmetic:
/// `(S_n - n mu) / (sigma sqrt n)`.
pub fn standardize_sum(s_n: Phantom, n: usize, mu: Phantom, sigma: Phantom) -> Result<Phantom> {
    let root_n = (n as f64).sqrt();
    let inv = (sigma * root_n)
        .inverse()
        .map_err(|_| PhantomError::DegenerateVariance(format!("sigma = {sigma}")))?;
    Ok((s_n - mu * n as f64) * inv)
}

/// `S_n` for both components driven by the same uniforms: draw `k` of the
/// real and reduced components share the `k`-th uniform of stream `rep`.
pub fn coupled_sum(x: &DiscretePRV, seed: u64, rep: usize, n: usize) -> Result<Phantom> {
    let re = ComponentLaw::new(x, Selection::RealComponent)?;
    let red = ComponentLaw::new(x, Selection::ReducedComponent)?;
    let (mut s_re, mut s_red) = (0.0, 0.0);
    for u in UniformStream::new(seed, rep as u64).take(n) {
        s_re += re.quantile(u);
        s_red += red.quantile(u);
    }
    Ok(Phantom::from_components(s_re, s_red))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli() -> DiscretePRV {
        let p = Phantom::new(0.4, 0.2);
        DiscretePRV::new(vec![(Phantom::ZERO, Phantom::ONE - p), (Phantom::ONE, p)]).unwrap()
    }

    fn cfg(reps: usize, n: usize, selection: Selection) -> SimConfig {
        SimConfig::new(42, reps, n, selection).unwrap()
    }

    #[test]
    fn component_laws() {
        let x = bernoulli();
        let re = ComponentLaw::new(&x, Selection::RealComponent).unwrap();
        assert!((re.mean() - 0.4).abs() < 1e-15 && (re.variance() - 0.24).abs() < 1e-15);
        let red = ComponentLaw::new(&x, Selection::ReducedComponent).unwrap();
        assert!((red.mean() - 0.6).abs() < 1e-15);
        let mid = ComponentLaw::new(&x, Selection::Midpoint).unwrap();
        assert!((mid.mean() - 0.5).abs() < 1e-15);
        assert_eq!(re.lattice_span(), Some(1.0));
        assert_eq!(ComponentLaw::new(&DiscretePRV::constant(Phantom::ONE), Selection::RealComponent)
            .unwrap()
            .lattice_span(), None);
    }

    #[test]
    fn constant_variable_is_exact() {
        let k = DiscretePRV::constant(Phantom::new(0.3, 0.1));
        let w = wlln_experiment(&k, &cfg(3, 1000, Selection::ReducedComponent)).unwrap();
        assert!(w.per_n_curve.iter().all(|p| p.deviation == 0.0));
        let s = slln_experiment(&k, &cfg(3, 1000, Selection::RealComponent), 0.0).unwrap();
        assert_eq!(s.slln_fraction, Some(1.0));
        assert!(matches!(
            clt_experiment(&k, &cfg(3, 10, Selection::RealComponent)),
            Err(PhantomError::DegenerateVariance(_))
        ));
    }

    #[test]
    fn zero_epsilon_fails_nondegenerate() {
        let s = slln_experiment(&bernoulli(), &cfg(5, 1000, Selection::RealComponent), 0.0).unwrap();
        assert_eq!(s.slln_fraction, Some(0.0));
    }

    #[test]
    fn single_rep_ks_is_defined() {
        let r = clt_experiment(&bernoulli(), &cfg(1, 30, Selection::RealComponent)).unwrap();
        let ks = r.ks_statistic.unwrap();
        assert!((0.0..=1.0).contains(&ks));
    }

    #[test]
    fn octave_grid_shape() {
        assert_eq!(octave_grid(1), vec![1]);
        assert_eq!(octave_grid(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(octave_grid(16), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn rejects_empty_configs() {
        assert!(SimConfig::new(1, 0, 5, Selection::Midpoint).is_err());
        assert!(SimConfig::new(1, 5, 0, Selection::Midpoint).is_err());
    }

    #[test]
    fn coupled_standardization_matches_components() {
        let x = bernoulli();
        let n = 30;
        let s = coupled_sum(&x, 7, 3, n).unwrap();
        let (mu, sigma) = (Phantom::from_components(0.4, 0.6), Phantom::from_components(0.24f64.sqrt(), 0.24f64.sqrt()));
        let w = standardize_sum(s, n, mu, sigma).unwrap();
        let scale = 0.24f64.sqrt() * (n as f64).sqrt();
        assert!((w.re - (s.re - 12.0) / scale).abs() < 1e-12);
        assert!((w.reduction() - (s.reduction() - 18.0) / scale).abs() < 1e-12);
    }
}
