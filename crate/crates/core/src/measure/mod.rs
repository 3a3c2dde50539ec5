//! Finite phantom probability spaces.
//!
//! A measure assigns a phantom weight to every outcome of a finite sample
//! space. Event probabilities are sums of weights, so additivity holds by
//! construction and validation only has to check the per-outcome zone
//! constraint, normalization, and (in strict mode) the absence of zero
//! divisors.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{PhantomError, Result};
use crate::ring::Phantom;

/// Tolerance for the probability-zone and normalization checks.
pub const ZONE_TOL: f64 = 1e-9;
/// Tolerance for phantom equality of event probabilities.
pub const EQ_TOL: f64 = 1e-10;

/// True when `re` lies in `[0, 1]` and `-re <= ph <= 1 - re`, up to `tol`.
/// Equivalently both `a` and `a + b` lie in `[0, 1]`.
pub fn in_zone(z: Phantom, tol: f64) -> bool {
    z.is_finite()
        && z.re >= -tol
        && z.re <= 1.0 + tol
        && z.ph >= -z.re - tol
        && z.ph <= 1.0 - z.re + tol
}

/// In the probability zone and not a nonzero zero divisor.
pub fn in_restricted_zone(z: Phantom, tol: f64) -> bool {
    in_zone(z, tol) && !z.is_zero_divisor()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMode {
    /// Weights must avoid nonzero zero divisors.
    Strict,
    /// Zero-divisor weights are allowed. Such measures can be stated and
    /// queried but not conditioned on.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    outcomes: Vec<String>,
}

impl SampleSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let outcomes: Vec<String> = labels.into_iter().map(Into::into).collect();
        if outcomes.is_empty() {
            return Err(PhantomError::InvalidMeasure("sample space is empty".into()));
        }
        let mut seen = HashSet::new();
        for o in &outcomes {
            if !seen.insert(o.as_str()) {
                return Err(PhantomError::InvalidMeasure(format!("duplicate outcome `{o}`")));
            }
        }
        Ok(SampleSpace { outcomes })
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| PhantomError::UnknownOutcome(label.to_string()))
    }

    pub fn event<S: AsRef<str>>(&self, labels: &[S]) -> Result<Event> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<BTreeSet<_>>>()
            .map(|members| Event { members })
    }

    pub fn full(&self) -> Event {
        Event { members: (0..self.len()).collect() }
    }
}

/// A set of outcomes, stored as indices into the sample space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Event {
    members: BTreeSet<usize>,
}

impl Event {
    pub fn empty() -> Self {
        Event::default()
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Event { members: indices.into_iter().collect() }
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, other: &Event) -> Event {
        Event { members: self.members.union(&other.members).copied().collect() }
    }

    pub fn intersection(&self, other: &Event) -> Event {
        Event { members: self.members.intersection(&other.members).copied().collect() }
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.members.is_disjoint(&other.members)
    }

    pub fn complement(&self, space: &SampleSpace) -> Event {
        Event { members: (0..space.len()).filter(|i| !self.contains(*i)).collect() }
    }
}

/// What kind of constraint a validation finding refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    NonFinite,
    /// Real term outside `[0, 1]`.
    RealTermRange,
    /// Phantom term outside `[-re, 1 - re]`.
    PhantomBound,
    /// Weights do not sum to `1 + p*0`.
    Normalization,
    /// A nonzero zero divisor in strict mode.
    ZeroDivisor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    /// The offending outcome, absent for whole-measure findings.
    pub outcome: Option<String>,
    pub kind: FindingKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub mode: MeasureMode,
    pub findings: Vec<Finding>,
}

/// A finite phantom probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct PhantomMeasure {
    space: SampleSpace,
    weights: Vec<Phantom>,
    mode: MeasureMode,
}

/// Result of collapsing a phantom measure onto one real measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealSelectionResult {
    pub probabilities: Vec<(String, f64)>,
    /// Total of the raw interpolated weights before renormalization.
    pub renormalization: f64,
}

/// Interpolation coordinates `u` in `[0, 1]`, one per outcome. Outcome `i`
/// receives the real weight `re_i + u_i * ph_i`, between its real term and
/// its reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSelection {
    u: Vec<f64>,
}

impl RealSelection {
    pub fn constant(u: f64, n: usize) -> Result<Self> {
        RealSelection::per_outcome(vec![u; n])
    }

    pub fn per_outcome(u: Vec<f64>) -> Result<Self> {
        if let Some(bad) = u.iter().find(|u| !(0.0..=1.0).contains(*u)) {
            return Err(PhantomError::BadParameter(format!("selection coordinate {bad} not in [0,1]")));
        }
        Ok(RealSelection { u })
    }

    pub fn coordinates(&self) -> &[f64] {
        &self.u
    }
}

impl PhantomMeasure {
    /// Builds and validates. Fails with the validation findings when the
    /// weights violate the axioms in the requested mode.
    pub fn new(space: SampleSpace, weights: Vec<Phantom>, mode: MeasureMode) -> Result<Self> {
        let m = PhantomMeasure::unchecked(space, weights, mode)?;
        let report = m.validate();
        if report.valid {
            Ok(m)
        } else {
            let msgs: Vec<String> = report.findings.iter().map(|f| f.message.clone()).collect();
            Err(PhantomError::InvalidMeasure(msgs.join("; ")))
        }
    }

    /// Builds without checking the axioms; only the shape is checked.
    pub fn unchecked(space: SampleSpace, weights: Vec<Phantom>, mode: MeasureMode) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(PhantomError::InvalidMeasure(format!(
                "{} weights for {} outcomes",
                weights.len(),
                space.len()
            )));
        }
        Ok(PhantomMeasure { space, weights, mode })
    }

    pub fn from_pairs<S: Into<String>>(
        pairs: impl IntoIterator<Item = (S, Phantom)>,
        mode: MeasureMode,
    ) -> Result<Self> {
        let (labels, weights): (Vec<String>, Vec<Phantom>) =
            pairs.into_iter().map(|(l, w)| (l.into(), w)).unzip();
        PhantomMeasure::new(SampleSpace::new(labels)?, weights, mode)
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Phantom] {
        &self.weights
    }

    pub fn mode(&self) -> MeasureMode {
        self.mode
    }

    pub fn weight(&self, label: &str) -> Result<Phantom> {
        Ok(self.weights[self.space.index_of(label)?])
    }

    pub fn event<S: AsRef<str>>(&self, labels: &[S]) -> Result<Event> {
        self.space.event(labels)
    }

    /// Checks every axiom and lists each violation.
    pub fn validate(&self) -> ValidationReport {
        let mut findings = Vec::new();
        for (label, &w) in self.space.outcomes.iter().zip(&self.weights) {
            let mut push = |kind, message: String| {
                findings.push(Finding { outcome: Some(label.clone()), kind, message })
            };
            if !w.is_finite() {
                push(FindingKind::NonFinite, format!("{label}: weight is not finite"));
                continue;
            }
            if w.re < -ZONE_TOL || w.re > 1.0 + ZONE_TOL {
                push(
                    FindingKind::RealTermRange,
                    format!("{label}: real term {} outside [0, 1]", w.re),
                );
            }
            if w.ph < -w.re - ZONE_TOL || w.ph > 1.0 - w.re + ZONE_TOL {
                push(
                    FindingKind::PhantomBound,
                    format!(
                        "{label}: phantom term {} outside [{}, {}]",
                        w.ph,
                        -w.re,
                        1.0 - w.re
                    ),
                );
            }
            if self.mode == MeasureMode::Strict && w.is_zero_divisor() {
                push(
                    FindingKind::ZeroDivisor,
                    format!("{label}: weight {w} is a zero divisor"),
                );
            }
        }
        let total: Phantom = self.weights.iter().sum();
        if total.is_finite() && !total.approx_eq(Phantom::ONE, ZONE_TOL) {
            findings.push(Finding {
                outcome: None,
                kind: FindingKind::Normalization,
                message: format!("weights sum to {total}, expected 1 + p*0"),
            });
        }
        ValidationReport { valid: findings.is_empty(), mode: self.mode, findings }
    }

    pub fn prob(&self, a: &Event) -> Result<Phantom> {
        a.indices()
            .map(|i| {
                self.weights
                    .get(i)
                    .copied()
                    .ok_or_else(|| PhantomError::UnknownOutcome(format!("#{i}")))
            })
            .sum()
    }

    pub fn prob_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Phantom> {
        self.prob(&self.event(labels)?)
    }

    pub fn complement_prob(&self, a: &Event) -> Result<Phantom> {
        Ok(Phantom::ONE - self.prob(a)?)
    }

    /// Inclusion-exclusion.
    pub fn union_prob(&self, a: &Event, b: &Event) -> Result<Phantom> {
        Ok(self.prob(a)? + self.prob(b)? - self.prob(&a.intersection(b))?)
    }

    fn require_strict(&self) -> Result<()> {
        match self.mode {
            MeasureMode::Strict => Ok(()),
            MeasureMode::Lenient => Err(PhantomError::InvalidMeasure(
                "conditioning requires a strict measure".into(),
            )),
        }
    }

    fn divide_by(&self, num: Phantom, den: Phantom) -> Result<Phantom> {
        num.div(den)
            .map_err(|_| PhantomError::ConditioningDegenerate(den.to_string()))
    }

    /// `P(A | B) = P(A n B) / P(B)`.
    pub fn conditional(&self, a: &Event, b: &Event) -> Result<Phantom> {
        self.require_strict()?;
        self.divide_by(self.prob(&a.intersection(b))?, self.prob(b)?)
    }

    fn check_partition(&self, partition: &[Event]) -> Result<()> {
        if partition.is_empty() {
            return Err(PhantomError::BadPartition("no blocks".into()));
        }
        let mut covered = BTreeSet::new();
        for (k, block) in partition.iter().enumerate() {
            for i in block.indices() {
                if i >= self.space.len() {
                    return Err(PhantomError::UnknownOutcome(format!("#{i}")));
                }
                if !covered.insert(i) {
                    return Err(PhantomError::BadPartition(format!(
                        "outcome `{}` appears in more than one block (block {k})",
                        self.space.outcomes[i]
                    )));
                }
            }
        }
        if covered.len() != self.space.len() {
            return Err(PhantomError::BadPartition("blocks do not cover the space".into()));
        }
        Ok(())
    }

    fn weighted_terms(&self, partition: &[Event], b: &Event) -> Result<Vec<Phantom>> {
        self.check_partition(partition)?;
        partition
            .iter()
            .map(|a| Ok(self.prob(a)? * self.conditional(b, a)?))
            .collect()
    }

    /// `sum_i P(A_i) P(B | A_i)` over a partition.
    pub fn total_probability(&self, partition: &[Event], b: &Event) -> Result<Phantom> {
        Ok(self.weighted_terms(partition, b)?.into_iter().sum())
    }

    /// Posterior probability of block `i` given `B`.
    pub fn bayes(&self, partition: &[Event], b: &Event, i: usize) -> Result<Phantom> {
        let terms = self.weighted_terms(partition, b)?;
        let num = *terms
            .get(i)
            .ok_or_else(|| PhantomError::BadPartition(format!("no block {i}")))?;
        let den: Phantom = terms.iter().sum();
        self.divide_by(num, den)
    }

    /// `P(A n B) = P(A) P(B)` within [`EQ_TOL`].
    pub fn independent(&self, a: &Event, b: &Event) -> Result<bool> {
        let joint = self.prob(&a.intersection(b))?;
        Ok(joint.approx_eq(self.prob(a)? * self.prob(b)?, EQ_TOL))
    }

    /// The outcome-wise mixture `sum_i z_i P_i`.
    pub fn compound(measures: &[PhantomMeasure], coeffs: &[Phantom]) -> Result<PhantomMeasure> {
        if measures.is_empty() || measures.len() != coeffs.len() {
            return Err(PhantomError::BadCoefficients(format!(
                "{} measures with {} coefficients",
                measures.len(),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !in_zone(**c, ZONE_TOL)) {
            return Err(PhantomError::BadCoefficients(format!("{c} is outside the probability zone")));
        }
        let total: Phantom = coeffs.iter().sum();
        if !total.approx_eq(Phantom::ONE, ZONE_TOL) {
            return Err(PhantomError::BadCoefficients(format!("coefficients sum to {total}")));
        }
        let space = measures[0].space.clone();
        if measures.iter().any(|m| m.space != space) {
            return Err(PhantomError::BadCoefficients("measures live on different spaces".into()));
        }
        let mode = if measures.iter().all(|m| m.mode == MeasureMode::Strict) {
            MeasureMode::Strict
        } else {
            MeasureMode::Lenient
        };
        let weights = (0..space.len())
            .map(|i| measures.iter().zip(coeffs).map(|(m, &z)| z * m.weights[i]).sum())
            .collect();
        PhantomMeasure::new(space, weights, mode)
    }

    /// Collapses onto one real probability vector: outcome `i` gets
    /// `re_i + u_i ph_i`, then the vector is renormalized to sum to one.
    pub fn select_real(&self, sel: &RealSelection) -> Result<RealSelectionResult> {
        if sel.u.len() != self.weights.len() {
            return Err(PhantomError::BadParameter(format!(
                "{} selection coordinates for {} outcomes",
                sel.u.len(),
                self.weights.len()
            )));
        }
        let raw: Vec<f64> = self
            .weights
            .iter()
            .zip(&sel.u)
            .map(|(w, u)| w.re + u * w.ph)
            .collect();
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return Err(PhantomError::BadParameter("selected weights sum to zero".into()));
        }
        Ok(RealSelectionResult {
            probabilities: self
                .space
                .outcomes
                .iter()
                .cloned()
                .zip(raw.iter().map(|r| r / total))
                .collect(),
            renormalization: total,
        })
    }

    /// Per-outcome real terms, a classical probability vector.
    pub fn real_part(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.re).collect()
    }

    /// Per-outcome reductions, a classical probability vector.
    pub fn reduced_part(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.reduction()).collect()
    }
}
