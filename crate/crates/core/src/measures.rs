//! Pure-state entanglement measures built from bipartite Schmidt data:
//! `F_q`, the q-concurrence `C_q`, its geometric mean over all bipartitions
//! (GqC), the concurrence, GMC and GGM.
//!
//! Concurrence is taken as `sqrt(2 (1 - Tr ρ_S²))`, so `C = sqrt(2 C_2)`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::partitions::{enumerate_bipartitions_capped, Bipartition, DEFAULT_PARTY_CAP};
use crate::tensor::{schmidt, trace_power, DensityMatrix, SchmidtDecomposition, StateVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    GqC,
    Gmc,
    Ggm,
    Cq,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::GqC => "GqC",
            MeasureKind::Gmc => "GMC",
            MeasureKind::Ggm => "GGM",
            MeasureKind::Cq => "Cq",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutValue {
    pub cut: Bipartition,
    pub value: f64,
}

/// Per-bipartition values and their aggregate.
///
/// GqC aggregates by geometric mean, GMC by minimum; GGM reports
/// `1 - s_max` per cut and aggregates by minimum. `extremal_cut` is the cut
/// attaining a min/max aggregate (first in canonical order on ties).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: MeasureKind,
    pub q: Option<f64>,
    pub per_cut: Vec<CutValue>,
    pub aggregate: f64,
    pub extremal_cut: Option<Bipartition>,
}

impl MeasureReport {
    /// Rows of `measure, q, cut, value, aggregate`.
    pub fn csv_rows(&self) -> Vec<[String; 5]> {
        let q = self.q.map(crate::sweep::format_sig).unwrap_or_default();
        self.per_cut
            .iter()
            .map(|cv| {
                [
                    self.measure.to_string(),
                    q.clone(),
                    cv.cut.to_string(),
                    crate::sweep::format_sig(cv.value),
                    crate::sweep::format_sig(self.aggregate),
                ]
            })
            .collect()
    }

    pub fn value_at(&self, cut: &Bipartition) -> Option<f64> {
        self.per_cut.iter().find(|cv| &cv.cut == cut).map(|cv| cv.value)
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if !(q >= 2.0 && q.is_finite()) {
        return domain(format!("q must be a finite real >= 2, got {q}"));
    }
    Ok(())
}

/// `F_q(ρ) = 1 - Tr ρ^q`.
pub fn f_q(rho: &DensityMatrix, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok((1.0 - trace_power(rho, q)?).max(0.0))
}

/// Largest `F_q` on a `d`-dimensional system: `1 - d^(1-q)`.
pub fn max_fq(d: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    if d < 2 {
        return domain(format!("dimension must be >= 2, got {d}"));
    }
    Ok(1.0 - (d as f64).powf(1.0 - q))
}

fn cq_from_schmidt(s: &SchmidtDecomposition, q: f64) -> f64 {
    (1.0 - s.power_sum(q)).max(0.0)
}

/// `C_q` of a pure state across one bipartition.
pub fn q_concurrence_pure(psi: &StateVector, cut: &Bipartition, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(cq_from_schmidt(&schmidt(psi, cut)?, q))
}

/// Concurrence `sqrt(2 C_2)` across one bipartition.
pub fn concurrence_pure(psi: &StateVector, cut: &Bipartition) -> Result<f64> {
    Ok((2.0 * q_concurrence_pure(psi, cut, 2.0)?).sqrt())
}

/// Geometric mean in log space; any nonpositive entry gives exactly 0.
pub fn geometric_mean(values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|&v| !(v > 0.0)) {
        return 0.0;
    }
    let log_sum: f64 = values.iter().map(|v| v.ln()).sum();
    (log_sum / values.len() as f64).exp()
}

/// Schmidt data of a pure state for every canonical bipartition.
///
/// Computing this once lets every measure and every `q` share the same
/// decompositions.
#[derive(Debug, Clone)]
pub struct CutProfile {
    cuts: Vec<Bipartition>,
    schmidt: Vec<SchmidtDecomposition>,
    local_dims: Vec<usize>,
}

impl CutProfile {
    pub fn new(psi: &StateVector) -> Result<Self> {
        Self::with_cap(psi, DEFAULT_PARTY_CAP)
    }

    pub fn with_cap(psi: &StateVector, cap: usize) -> Result<Self> {
        let cuts = enumerate_bipartitions_capped(psi.parties(), cap)?;
        let schmidt = cuts.par_iter().map(|c| schmidt(psi, c)).collect::<Result<Vec<_>>>()?;
        Ok(Self { cuts, schmidt, local_dims: psi.local_dims().to_vec() })
    }

    pub fn cuts(&self) -> &[Bipartition] {
        &self.cuts
    }

    pub fn schmidt(&self) -> &[SchmidtDecomposition] {
        &self.schmidt
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    /// `max_α s_1^(α)`.
    pub fn max_leading_coefficient(&self) -> f64 {
        self.schmidt.iter().map(|s| s.leading()).fold(0.0, f64::max)
    }

    /// `max_α m_α`.
    pub fn max_rank(&self) -> usize {
        self.schmidt.iter().map(|s| s.rank).max().unwrap_or(1)
    }

    pub fn q_concurrences(&self, q: f64) -> Result<Vec<f64>> {
        check_q(q)?;
        Ok(self.schmidt.iter().map(|s| cq_from_schmidt(s, q)).collect())
    }

    fn report(
        &self,
        measure: MeasureKind,
        q: Option<f64>,
        values: Vec<f64>,
        aggregate: f64,
        extremal: Option<usize>,
    ) -> MeasureReport {
        MeasureReport {
            measure,
            q,
            per_cut: self
                .cuts
                .iter()
                .zip(values)
                .map(|(cut, value)| CutValue { cut: cut.clone(), value })
                .collect(),
            aggregate,
            extremal_cut: extremal.map(|k| self.cuts[k].clone()),
        }
    }

    pub fn gqc(&self, q: f64) -> Result<MeasureReport> {
        let values = self.q_concurrences(q)?;
        let aggregate = geometric_mean(&values);
        Ok(self.report(MeasureKind::GqC, Some(q), values, aggregate, None))
    }

    pub fn gmc(&self) -> MeasureReport {
        let values: Vec<f64> = self.schmidt.iter().map(|s| (2.0 * cq_from_schmidt(s, 2.0)).sqrt()).collect();
        let k = argmin(&values);
        let aggregate = values[k];
        self.report(MeasureKind::Gmc, None, values, aggregate, Some(k))
    }

    pub fn ggm(&self) -> MeasureReport {
        let values: Vec<f64> = self
            .schmidt
            .iter()
            .map(|s| if s.rank <= 1 { 0.0 } else { (1.0 - s.leading()).max(0.0) })
            .collect();
        let k = argmin(&values);
        let aggregate = values[k];
        self.report(MeasureKind::Ggm, None, values, aggregate, Some(k))
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = k;
        }
    }
    best
}

/// Geometric mean of `C_q` over all bipartitions.
pub fn gqc_pure(psi: &StateVector, q: f64) -> Result<MeasureReport> {
    check_q(q)?;
    CutProfile::new(psi)?.gqc(q)
}

/// Minimum concurrence over all bipartitions.
pub fn gmc_pure(psi: &StateVector) -> Result<MeasureReport> {
    Ok(CutProfile::new(psi)?.gmc())
}

/// `1 - max_α s_1^(α)` over all bipartitions.
pub fn ggm_pure(psi: &StateVector) -> Result<MeasureReport> {
    Ok(CutProfile::new(psi)?.ggm())
}

/// Party-wise tensor product of two n-party states.
///
/// Party `i` of the result is the pair (party `i` of `a`, party `i` of `b`)
/// with local dimension `d_a,i · d_b,i`, so the result stays n-partite.
pub fn tensor_partywise(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let n = a.parties();
    if b.parties() != n {
        return Err(crate::error::Error::Shape(format!(
            "party counts differ: {n} vs {}",
            b.parties()
        )));
    }
    let (da, db) = (a.local_dims(), b.local_dims());
    let dims: Vec<usize> = da.iter().zip(db).map(|(x, y)| x * y).collect();
    let digits = |mut idx: usize, d: &[usize]| {
        let mut out = vec![0; d.len()];
        for p in (0..d.len()).rev() {
            out[p] = idx % d[p];
            idx /= d[p];
        }
        out
    };
    let total: usize = dims.iter().product();
    let mut amps = vec![C64::new(0.0, 0.0); total];
    for (ia, &x) in a.amplitudes().iter().enumerate() {
        let ga = digits(ia, da);
        for (ib, &y) in b.amplitudes().iter().enumerate() {
            let gb = digits(ib, db);
            let idx = (0..n).fold(0, |acc, p| acc * dims[p] + ga[p] * db[p] + gb[p]);
            amps[idx] = x * y;
        }
    }
    StateVector::normalized(amps, dims)
}
