//! Constructors for the state families used throughout the crate, plus
//! seeded Haar-random states and unitaries.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::sync::atomic::{AtomicU8, Ordering};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::tensor::{DensityMatrix, StateVector, C64};

/// Seeded generator used for every random construction in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn zeros(len: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); len]
}

/// `|W_n⟩`: equal superposition of the Hamming-weight-one qubit strings.
pub fn w_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return domain(format!("W state needs n >= 2, got {n}"));
    }
    let mut amps = zeros(1 << n);
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        amps[1 << k] = a;
    }
    StateVector::new(amps, vec![2; n])
}

/// `|GHZ_n⟩ = (|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return domain(format!("GHZ state needs n >= 2, got {n}"));
    }
    let mut amps = zeros(1 << n);
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps, vec![2; n])
}

/// A pure state mixed with white noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoisyStateSpec {
    pub base: StateVector,
    /// Weight of `|base⟩⟨base|`, in `[0, 1]`.
    pub visibility: f64,
}

/// `v·|base⟩⟨base| + (1 - v)·𝕀/D` with `D` the total dimension.
pub fn noisy_state(spec: &NoisyStateSpec) -> Result<DensityMatrix> {
    let v = spec.visibility;
    if !(0.0..=1.0).contains(&v) {
        return domain(format!("visibility {v} outside [0, 1]"));
    }
    let noise = DensityMatrix::maximally_mixed(spec.base.local_dims().to_vec())?;
    noise.mix(&spec.base.projector(), v)
}

/// Bit per family, set once its endpoint warning has been logged.
static ENDPOINT_WARNED: AtomicU8 = AtomicU8::new(0);

fn check_angle(theta: f64, family: &str, bit: u8) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return domain(format!("{family}: theta {theta} outside [0, pi/2]"));
    }
    if (theta == 0.0 || theta == FRAC_PI_2) && ENDPOINT_WARNED.fetch_or(bit, Ordering::Relaxed) & bit == 0 {
        log::warn!("{family}: theta = {theta} is an endpoint of the open family interval");
    }
    Ok(())
}

/// Class I: `(cosθ|000⟩ + sinθ|001⟩)/√2 + |111⟩/√2`.
pub fn class1(theta: f64) -> Result<StateVector> {
    check_angle(theta, "class1", 1)?;
    let mut amps = zeros(8);
    amps[0b000] = C64::new(theta.cos() * FRAC_1_SQRT_2, 0.0);
    amps[0b001] = C64::new(theta.sin() * FRAC_1_SQRT_2, 0.0);
    amps[0b111] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps, vec![2; 3])
}

/// Class II: `cosθ|000⟩ + sinθ|111⟩`.
pub fn class2(theta: f64) -> Result<StateVector> {
    check_angle(theta, "class2", 2)?;
    let mut amps = zeros(8);
    amps[0b000] = C64::new(theta.cos(), 0.0);
    amps[0b111] = C64::new(theta.sin(), 0.0);
    StateVector::new(amps, vec![2; 3])
}

/// `cosθ|φ₁⟩ + sinθ|0111⟩` with `|φ₁⟩ = cos(2π/3)|0100⟩ + sin(2π/3)|1000⟩`.
pub fn four_qubit_family(theta: f64) -> Result<StateVector> {
    check_angle(theta, "four_qubit", 4)?;
    let phase = 2.0 * PI / 3.0;
    let mut amps = zeros(16);
    amps[0b0100] = C64::new(theta.cos() * phase.cos(), 0.0);
    amps[0b1000] = C64::new(theta.cos() * phase.sin(), 0.0);
    amps[0b0111] = C64::new(theta.sin(), 0.0);
    StateVector::new(amps, vec![2; 4])
}

/// Tensor product of single- or multi-party factors, in order.
pub fn product_state(factors: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Shape("product of zero factors".into()))?;
    let mut amps = first.amplitudes().to_vec();
    let mut dims = first.local_dims().to_vec();
    for f in rest {
        amps = amps
            .iter()
            .flat_map(|a| f.amplitudes().iter().map(move |b| a * b))
            .collect();
        dims.extend_from_slice(f.local_dims());
    }
    StateVector::normalized(amps, dims)
}

/// Product of qubit basis states from a bit string such as `"010"`.
pub fn product_from_bits(bits: &str) -> Result<StateVector> {
    let digits: Vec<usize> = bits
        .chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Format(format!("bit string contains {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if digits.is_empty() {
        return Err(Error::Format("empty bit string".into()));
    }
    StateVector::basis(&digits, vec![2; digits.len()])
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state from normalized complex Gaussian amplitudes.
pub fn haar_random_pure_with(local_dims: &[usize], rng: &mut impl Rng) -> Result<StateVector> {
    let total: usize = local_dims.iter().product();
    let amps = (0..total).map(|_| gaussian(rng)).collect();
    StateVector::normalized(amps, local_dims.to_vec())
}

/// Deterministic per `seed`.
pub fn haar_random_pure(local_dims: &[usize], seed: u64) -> Result<StateVector> {
    haar_random_pure_with(local_dims, &mut seeded_rng(seed))
}

/// Haar-random `d×d` unitary: QR of a Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn haar_random_unitary(d: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..d {
        let diag = r[(k, k)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Random mixed state `G G† / Tr(G G†)` with `G` a `D×rank` Ginibre matrix.
pub fn random_density(local_dims: &[usize], rank: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    let total: usize = local_dims.iter().product();
    if rank == 0 || rank > total {
        return domain(format!("rank {rank} outside 1..={total}"));
    }
    let g = DMatrix::from_fn(total, rank, |_, _| gaussian(rng));
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    // symmetrize away rounding so validation sees an exactly Hermitian matrix
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(m, local_dims.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_bipartitions;
    use crate::tensor::{schmidt, trace_power, fidelity_with_pure, PartialTrace};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn w_and_ghz_layout() {
        let w2 = w_state(2).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(close(w2.amplitudes()[1].re, h, 1e-15) && close(w2.amplitudes()[2].re, h, 1e-15));
        let w3 = w_state(3).unwrap();
        let nonzero: Vec<usize> = (0..8).filter(|&i| w3.amplitudes()[i].norm() > 0.0).collect();
        assert_eq!(nonzero, vec![1, 2, 4]);
        let ghz3 = ghz_state(3).unwrap();
        assert!(close(ghz3.amplitudes()[0].re, h, 1e-15) && close(ghz3.amplitudes()[7].re, h, 1e-15));
        assert!(w_state(1).is_err() && ghz_state(0).is_err());
    }

    #[test]
    fn ghz_and_w_reductions() {
        let eig = w_state(3).unwrap().partial_trace(&[1]).unwrap().eigenvalues().unwrap();
        assert!(close(eig[0], 2.0 / 3.0, 1e-12) && close(eig[1], 1.0 / 3.0, 1e-12));
        for n in 2..=5 {
            let ghz = ghz_state(n).unwrap();
            for cut in enumerate_bipartitions(n).unwrap() {
                let s = schmidt(&ghz, &cut).unwrap();
                assert_eq!(s.rank, 2);
                assert!(close(s.squared_coefficients[0], 0.5, 1e-12));
                assert!(close(s.squared_coefficients[1], 0.5, 1e-12));
            }
        }
    }

    #[test]
    fn noisy_state_limits() {
        let w = w_state(3).unwrap();
        let pure = noisy_state(&NoisyStateSpec { base: w.clone(), visibility: 1.0 }).unwrap();
        assert!(close(trace_power(&pure, 2.0).unwrap(), 1.0, 1e-12));
        let mixed = noisy_state(&NoisyStateSpec { base: w.clone(), visibility: 0.0 }).unwrap();
        assert!(close(trace_power(&mixed, 2.0).unwrap(), 0.125, 1e-12));
        let half = noisy_state(&NoisyStateSpec { base: w.clone(), visibility: 0.5 }).unwrap();
        assert!(close(fidelity_with_pure(&half, &w).unwrap(), 9.0 / 16.0, 1e-14));
        assert!(noisy_state(&NoisyStateSpec { base: w, visibility: 1.5 }).is_err());
    }

    #[test]
    fn class_states() {
        let g = class2(std::f64::consts::FRAC_PI_4).unwrap();
        assert!((g.inner(&ghz_state(3).unwrap()).unwrap().norm() - 1.0).abs() < 1e-14);
        let theta = 0.37;
        for cut in enumerate_bipartitions(3).unwrap() {
            let s = schmidt(&class2(theta).unwrap(), &cut).unwrap();
            assert!(close(s.squared_coefficients[0], theta.cos().powi(2), 1e-12));
            assert!(close(s.squared_coefficients[1], theta.sin().powi(2), 1e-12));
        }
        // Class I at θ = π/2 factorizes as a Bell pair on {0,1} times |1⟩ on party 2
        let c1 = class1(FRAC_PI_2).unwrap();
        let cut = "0,1|2".parse().unwrap();
        assert_eq!(schmidt(&c1, &cut).unwrap().rank, 1);
        assert!(class1(-0.1).is_err() && class2(2.0).is_err());
    }

    #[test]
    fn four_qubit_amplitudes() {
        let psi = four_qubit_family(std::f64::consts::FRAC_PI_4).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(close(psi.amplitudes()[0b0100].re, -0.5 * h, 1e-15));
        assert!(close(psi.amplitudes()[0b1000].re, 3f64.sqrt() / 2.0 * h, 1e-15));
        assert!(close(psi.amplitudes()[0b0111].re, h, 1e-15));
        let end = four_qubit_family(FRAC_PI_2).unwrap();
        for cut in enumerate_bipartitions(4).unwrap() {
            assert_eq!(schmidt(&end, &cut).unwrap().rank, 1);
        }
        // θ = 0: parties 2,3 sit in |00⟩
        let start = four_qubit_family(0.0).unwrap();
        assert_eq!(schmidt(&start, &"0,1|2,3".parse().unwrap()).unwrap().rank, 1);
    }

    #[test]
    fn products() {
        let zero = StateVector::basis(&[0], vec![2]).unwrap();
        let plus = StateVector::normalized(vec![C64::new(1.0, 0.0); 2], vec![2]).unwrap();
        let zz = product_state(&[zero.clone(), zero]).unwrap();
        assert_eq!(zz.amplitudes()[0], C64::new(1.0, 0.0));
        let pp = product_state(&[plus.clone(), plus]).unwrap();
        assert!(pp.amplitudes().iter().all(|a| close(a.re, 0.5, 1e-15)));
        let bits = product_from_bits("011").unwrap();
        assert_eq!(bits.amplitudes()[3], C64::new(1.0, 0.0));
        assert!(product_from_bits("01x").is_err());
        assert!(product_state(&[]).is_err());
    }

    #[test]
    fn haar_states_are_seeded() {
        let a = haar_random_pure(&[2, 3, 2], 11).unwrap();
        let b = haar_random_pure(&[2, 3, 2], 11).unwrap();
        let c = haar_random_pure(&[2, 3, 2], 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let norm: f64 = a.amplitudes().iter().map(|x| x.norm_sqr()).sum();
        assert!(close(norm, 1.0, 1e-12));
    }

    // Lubkin: E[Tr ρ_A²] = (d_A + d_B) / (d_A d_B + 1) = 4/5 for two qubits.
    #[test]
    fn haar_mean_reduced_purity() {
        let mut rng = seeded_rng(2024);
        let samples = 1000;
        let mean: f64 = (0..samples)
            .map(|_| {
                let psi = haar_random_pure_with(&[2, 2], &mut rng).unwrap();
                trace_power(&psi.partial_trace(&[0]).unwrap(), 2.0).unwrap()
            })
            .sum::<f64>()
            / samples as f64;
        assert!(close(mean, 0.8, 0.03), "mean purity {mean}");
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = seeded_rng(5);
        for d in [2, 3, 4] {
            let u = haar_random_unitary(d, &mut rng);
            let id = &u * u.adjoint();
            assert!((id - DMatrix::<C64>::identity(d, d)).norm() < 1e-12);
        }
    }

    #[test]
    fn random_density_is_valid() {
        let mut rng = seeded_rng(9);
        let rho = random_density(&[2, 3], 4, &mut rng).unwrap();
        assert_eq!(rho.eigenvalues().unwrap().iter().filter(|&&l| l > 1e-10).count(), 4);
        assert!(random_density(&[2], 3, &mut rng).is_err());
    }
}
