//! Shared inputs for the benchmarks.

use gqc_core::{haar_random_pure, DensityMatrix, NoisyStateSpec, StateVector};

/// Seeded Haar-random `n`-qubit state.
pub fn random_qubits(n: usize, seed: u64) -> StateVector {
    haar_random_pure(&vec![2; n], seed).expect("valid dims")
}

/// Noisy `|W_3⟩` at visibility `p`.
pub fn noisy_w(p: f64) -> DensityMatrix {
    let base = gqc_core::w_state(3).expect("n >= 2");
    gqc_core::noisy_state(&NoisyStateSpec { base, visibility: p }).expect("p in [0, 1]")
}
