#![allow(dead_code)]

use phantom_core::measure::{MeasureMode, PhantomMeasure};
use phantom_core::randvar::DiscretePRV;
use phantom_core::Phantom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn phantom_in(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Phantom {
    Phantom::new(r.random_range(lo..hi), r.random_range(lo..hi))
}

/// A probability vector with strictly positive entries.
fn simplex(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// `n` phantom probabilities in the restricted zone summing to `1 + p*0`:
/// independent real-term and reduced probability vectors.
pub fn phantom_probabilities(r: &mut ChaCha8Rng, n: usize) -> Vec<Phantom> {
    let re = simplex(r, n);
    let red = simplex(r, n);
    let mut p: Vec<Phantom> = re.iter().zip(&red).map(|(a, b)| Phantom::from_components(*a, *b)).collect();
    let total: Phantom = p.iter().sum();
    p[0] += Phantom::ONE - total;
    p
}

pub fn random_measure(r: &mut ChaCha8Rng, n: usize) -> PhantomMeasure {
    let labels: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    PhantomMeasure::from_pairs(labels.into_iter().zip(phantom_probabilities(r, n)), MeasureMode::Strict)
        .expect("generated measure validates")
}

pub fn random_prv(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DiscretePRV {
    let probs = phantom_probabilities(r, n);
    let mut values: Vec<Phantom> = Vec::with_capacity(n);
    while values.len() < n {
        let v = phantom_in(r, lo, hi);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    DiscretePRV::new(values.into_iter().zip(probs).collect()).expect("generated variable validates")
}
