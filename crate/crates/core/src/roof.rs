//! Stochastic upper estimate of the mixed-state GqC convex roof.
//!
//! Every ensemble `{√p_i |ψ_i⟩}` of `ρ` is `U·(√λ_j |e_j⟩)` for some isometry
//! `U`, so the search runs over random unitaries applied to the scaled
//! eigenvectors. The result is a heuristic, never a certificate.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::measures::{check_q, CutProfile};
use crate::states::{haar_random_unitary, seeded_rng};
use crate::tensor::{DensityMatrix, StateVector, C64, SCHMIDT_THRESHOLD};

/// Ensemble members with smaller weight are dropped.
const MIN_WEIGHT: f64 = 1e-14;
const INITIAL_STEP: f64 = 0.5;
const STEP_DECAY: f64 = 0.97;
/// Independent random starts drawn before refinement.
const RESTARTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofEstimate {
    pub upper: f64,
    pub ensemble_size: usize,
    pub iterations: usize,
    pub seed: u64,
}

struct Ensemble<'a> {
    /// Columns are `√λ_j |e_j⟩`.
    scaled: DMatrix<C64>,
    local_dims: &'a [usize],
    q: f64,
}

impl Ensemble<'_> {
    /// `Σ p_i GqC(ψ_i)` for the ensemble `U[:, :r]·scaled†`.
    fn average(&self, u: &DMatrix<C64>) -> Result<f64> {
        let r = self.scaled.ncols();
        let mixed = &self.scaled * u.columns(0, r).transpose();
        let mut total = 0.0;
        for col in mixed.column_iter() {
            let p: f64 = col.iter().map(|a| a.norm_sqr()).sum();
            if p < MIN_WEIGHT {
                continue;
            }
            let psi = StateVector::normalized(col.iter().copied().collect(), self.local_dims.to_vec())?;
            total += p * CutProfile::new(&psi)?.gqc(self.q)?.aggregate;
        }
        Ok(total)
    }
}

/// Unitary close to the identity: Q factor of `I + step·G` with `G` Ginibre.
fn near_identity(k: usize, step: f64, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(k, k, |i, j| {
        let z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * step;
        if i == j {
            z + 1.0
        } else {
            z
        }
    });
    g.qr().q()
}

/// Upper estimate of the mixed-state GqC of `ρ`.
///
/// Draws random unitary mixings of the eigen-decomposition, then refines the
/// best one by multiplying with near-identity unitaries, keeping only strict
/// decreases. The step shrinks geometrically per iteration. Deterministic in
/// `seed`.
pub fn mixed_gqc_upper_estimate(
    rho: &DensityMatrix,
    q: f64,
    ensemble_size: usize,
    iterations: usize,
    seed: u64,
) -> Result<RoofEstimate> {
    check_q(q)?;
    let eig: Vec<(f64, Vec<C64>)> = rho
        .eigen_decomposition()?
        .into_iter()
        .filter(|(l, _)| *l > SCHMIDT_THRESHOLD)
        .collect();
    let rank = eig.len();
    if ensemble_size < rank {
        return domain(format!("ensemble_size {ensemble_size} is below the rank {rank} of rho"));
    }
    let estimate = |upper| RoofEstimate { upper, ensemble_size, iterations, seed };

    if rank == 1 {
        let psi = StateVector::normalized(eig[0].1.clone(), rho.local_dims().to_vec())?;
        return Ok(estimate(CutProfile::new(&psi)?.gqc(q)?.aggregate));
    }

    let dim = rho.dim();
    let scaled = DMatrix::from_fn(dim, rank, |i, j| eig[j].1[i] * eig[j].0.sqrt());
    let ensemble = Ensemble { scaled, local_dims: rho.local_dims(), q };
    let mut rng = seeded_rng(seed);

    // the eigen-ensemble itself is the first candidate
    let mut best_u = DMatrix::<C64>::identity(ensemble_size, ensemble_size);
    let mut best = ensemble.average(&best_u)?;
    for _ in 0..RESTARTS {
        let u = haar_random_unitary(ensemble_size, &mut rng);
        let value = ensemble.average(&u)?;
        if value < best {
            best = value;
            best_u = u;
        }
    }

    let mut step = INITIAL_STEP;
    for _ in 0..iterations {
        let candidate = near_identity(ensemble_size, step, &mut rng) * &best_u;
        let value = ensemble.average(&candidate)?;
        if value < best {
            best = value;
            best_u = candidate;
        }
        step *= STEP_DECAY;
    }
    Ok(estimate(best.max(0.0)))
}
