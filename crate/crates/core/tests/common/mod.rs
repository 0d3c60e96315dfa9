#![allow(dead_code)]

use multiaffine::quantum::BipartiteState;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random two-qubit pure state.
pub fn random_two_qubit(rng: &mut impl Rng) -> BipartiteState {
    let amps = (0..4)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    BipartiteState::normalized(2, 2, amps).expect("nonzero draw")
}

/// Random product of two random qubit states.
pub fn random_separable(rng: &mut impl Rng) -> BipartiteState {
    let mut qubit = || {
        multiaffine::quantum::PureState::normalized(
            (0..2)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect(),
        )
        .expect("nonzero draw")
    };
    let (a, b) = (qubit(), qubit());
    BipartiteState::product(&a, &b)
}

pub fn random_probabilities(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}
