//! Dense linear algebra over multi-party Hilbert spaces.
//!
//! Amplitudes are stored row-major over parties with party 0 the most
//! significant digit: for local dimensions `[d0, d1, d2]` the basis state
//! `|i j k⟩` sits at index `(i * d1 + j) * d2 + k`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::partitions::Bipartition;

pub type C64 = Complex64;

/// Tolerance on `Σ|a|² = 1`, trace and Hermiticity checks.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are treated as rounding noise and clamped.
pub const PSD_TOLERANCE: f64 = 1e-8;
/// Squared Schmidt coefficients above this count toward the Schmidt rank.
pub const SCHMIDT_THRESHOLD: f64 = 1e-10;

fn check_dims(local_dims: &[usize]) -> Result<usize> {
    if local_dims.is_empty() {
        return Err(Error::Shape("at least one party is required".into()));
    }
    if let Some(d) = local_dims.iter().find(|&&d| d < 2) {
        return Err(Error::Shape(format!("local dimension {d} < 2")));
    }
    local_dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::Shape("total dimension overflows".into()))
}

/// A normalized pure state on `local_dims.len()` parties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::StateFile", into = "crate::io::StateFile")]
pub struct StateVector {
    amplitudes: Vec<C64>,
    local_dims: Vec<usize>,
}

impl StateVector {
    /// Wraps `amplitudes`, which must already be normalized.
    pub fn new(amplitudes: Vec<C64>, local_dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&local_dims)?;
        if amplitudes.len() != total {
            return Err(Error::Shape(format!(
                "{} amplitudes for total dimension {total}",
                amplitudes.len()
            )));
        }
        let norm = norm_sqr(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, local_dims })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>, local_dims: Vec<usize>) -> Result<Self> {
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm * norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes, local_dims)
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(digits: &[usize], local_dims: Vec<usize>) -> Result<Self> {
        if digits.len() != local_dims.len() {
            return Err(Error::Shape(format!(
                "{} digits for {} parties",
                digits.len(),
                local_dims.len()
            )));
        }
        let total = check_dims(&local_dims)?;
        let mut index = 0;
        for (&x, &d) in digits.iter().zip(&local_dims) {
            if x >= d {
                return Err(Error::Shape(format!("digit {x} out of range for dimension {d}")));
            }
            index = index * d + x;
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); total];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::new(amplitudes, local_dims)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn parties(&self) -> usize {
        self.local_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        same_dims(&self.local_dims, &other.local_dims)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        let v = &self.amplitudes;
        let entries = DMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj());
        DensityMatrix { entries, local_dims: self.local_dims.clone() }
    }

    /// Coefficient matrix with rows indexed by the parties in `rows`
    /// (ascending) and columns by the remaining parties.
    fn coefficient_matrix(&self, rows: &[usize]) -> DMatrix<C64> {
        let layout = SplitLayout::new(&self.local_dims, rows);
        let mut m = DMatrix::zeros(layout.dim_in, layout.dim_out);
        for (idx, &(r, c)) in layout.pairs.iter().enumerate() {
            m[(r, c)] = self.amplitudes[idx];
        }
        m
    }

    /// Applies a `d×d` unitary to one party.
    pub fn apply_local(&self, party: usize, unitary: &DMatrix<C64>) -> Result<StateVector> {
        let d = *self
            .local_dims
            .get(party)
            .ok_or_else(|| Error::Shape(format!("party {party} out of range")))?;
        if unitary.nrows() != d || unitary.ncols() != d {
            return Err(Error::Shape(format!("expected a {d}x{d} operator")));
        }
        let stride: usize = self.local_dims[party + 1..].iter().product();
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (idx, slot) in out.iter_mut().enumerate() {
            let digit = (idx / stride) % d;
            let base = idx - digit * stride;
            *slot = (0..d).map(|k| unitary[(digit, k)] * self.amplitudes[base + k * stride]).sum();
        }
        StateVector::normalized(out, self.local_dims.clone())
    }
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn same_dims(a: &[usize], b: &[usize]) -> Result<()> {
    if a != b {
        return Err(Error::Shape(format!("local dimensions {a:?} vs {b:?}")));
    }
    Ok(())
}

/// Maps each joint index to `(index within kept parties, index within the rest)`.
struct SplitLayout {
    dim_in: usize,
    dim_out: usize,
    pairs: Vec<(usize, usize)>,
}

impl SplitLayout {
    fn new(local_dims: &[usize], keep: &[usize]) -> Self {
        let total: usize = local_dims.iter().product();
        let kept: Vec<bool> = (0..local_dims.len()).map(|p| keep.contains(&p)).collect();
        let dim_in: usize = local_dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
        let dim_out = total / dim_in;
        let mut pairs = Vec::with_capacity(total);
        let mut digits = vec![0usize; local_dims.len()];
        for _ in 0..total {
            let (mut r, mut c) = (0, 0);
            for (p, &x) in digits.iter().enumerate() {
                if kept[p] {
                    r = r * local_dims[p] + x;
                } else {
                    c = c * local_dims[p] + x;
                }
            }
            pairs.push((r, c));
            // odometer increment, last party fastest
            for p in (0..digits.len()).rev() {
                digits[p] += 1;
                if digits[p] < local_dims[p] {
                    break;
                }
                digits[p] = 0;
            }
        }
        Self { dim_in, dim_out, pairs }
    }
}

/// A Hermitian, unit-trace, positive semi-definite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
    local_dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>, local_dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&local_dims)?;
        if entries.nrows() != total || entries.ncols() != total {
            return Err(Error::Shape(format!(
                "{}x{} matrix for total dimension {total}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let asym = max_asymmetry(&entries);
        if asym > NORM_TOLERANCE {
            return Err(Error::NotHermitian(asym));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > NORM_TOLERANCE || trace.im.abs() > NORM_TOLERANCE {
            return Err(Error::InvalidTrace(trace.re));
        }
        let rho = Self { entries, local_dims };
        rho.eigenvalues()?;
        Ok(rho)
    }

    /// `(1 - w)·σ + w·ρ` for two density matrices on the same space.
    pub fn mix(&self, other: &DensityMatrix, weight_other: f64) -> Result<DensityMatrix> {
        same_dims(&self.local_dims, &other.local_dims)?;
        if !(0.0..=1.0).contains(&weight_other) {
            return domain(format!("mixing weight {weight_other} outside [0, 1]"));
        }
        let entries = &self.entries * C64::from(1.0 - weight_other) + &other.entries * C64::from(weight_other);
        Ok(Self { entries, local_dims: self.local_dims.clone() })
    }

    /// `Σ w_i ρ_i`; weights must be nonnegative and sum to one.
    pub fn convex_combination(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let (_, first) = parts.first().ok_or_else(|| Error::Shape("empty mixture".into()))?;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > NORM_TOLERANCE {
            return domain("mixture weights must be a probability vector");
        }
        let mut entries = DMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            same_dims(&first.local_dims, &rho.local_dims)?;
            entries += &rho.entries * C64::from(*w);
        }
        Ok(Self { entries, local_dims: first.local_dims.clone() })
    }

    pub fn maximally_mixed(local_dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&local_dims)?;
        let entries = DMatrix::identity(total, total) * C64::from(1.0 / total as f64);
        Ok(Self { entries, local_dims })
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Spectrum in decreasing order, see [`hermitian_eigenvalues`].
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.entries)
    }

    /// Eigenpairs `(λ_i, |e_i⟩)` in decreasing eigenvalue order, with clamped eigenvalues.
    pub fn eigen_decomposition(&self) -> Result<Vec<(f64, Vec<C64>)>> {
        let eig = self.entries.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<C64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &l)| (l, eig.eigenvectors.column(k).iter().copied().collect()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        for (l, _) in pairs.iter_mut() {
            *l = clamp_eigenvalue(*l)?;
        }
        Ok(pairs)
    }
}

fn max_asymmetry(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn clamp_eigenvalue(l: f64) -> Result<f64> {
    if l < -PSD_TOLERANCE || !l.is_finite() {
        return Err(Error::NotPsd(l));
    }
    Ok(l.max(0.0))
}

/// Raw real spectrum of a Hermitian matrix, decreasing, without clamping.
pub fn hermitian_spectrum(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let asym = max_asymmetry(m);
    if asym > NORM_TOLERANCE {
        return Err(Error::NotHermitian(asym));
    }
    let mut spectrum: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    spectrum.sort_by(|a, b| b.total_cmp(a));
    Ok(spectrum)
}

/// Decreasing spectrum of a positive semi-definite Hermitian matrix.
///
/// Values in `[-1e-8, 0)` are clamped to zero; anything more negative is a
/// [`Error::NotPsd`].
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    hermitian_spectrum(m)?.into_iter().map(clamp_eigenvalue).collect()
}

/// Sum of singular values of a Hermitian matrix.
pub fn trace_norm(m: &DMatrix<C64>) -> Result<f64> {
    Ok(hermitian_spectrum(m)?.iter().map(|l| l.abs()).sum())
}

/// `‖ρ - σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(&rho.local_dims, &sigma.local_dims)?;
    trace_norm(&(&rho.entries - &sigma.entries))
}

/// `Tr ρ^q = Σ λ_i^q` over the clamped spectrum, for `q >= 1`.
pub fn trace_power(rho: &DensityMatrix, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return domain(format!("trace power needs q >= 1, got {q}"));
    }
    Ok(rho.eigenvalues()?.iter().map(|l| l.powf(q)).sum())
}

/// `⟨φ|ρ|φ⟩`.
pub fn fidelity_with_pure(rho: &DensityMatrix, phi: &StateVector) -> Result<f64> {
    same_dims(&rho.local_dims, &phi.local_dims)?;
    let v = &phi.amplitudes;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..v.len() {
        let row: C64 = (0..v.len()).map(|j| rho.entries[(i, j)] * v[j]).sum();
        acc += v[i].conj() * row;
    }
    Ok(acc.re)
}

/// Trace norm of `|ψ1⟩⟨ψ1| - |ψ2⟩⟨ψ2|`, i.e. `2·sqrt(1 - |⟨ψ1|ψ2⟩|²)`.
pub fn state_distance(psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    for psi in [psi1, psi2] {
        let norm = norm_sqr(&psi.amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
    }
    let overlap = psi1.inner(psi2)?.norm_sqr().min(1.0);
    Ok(2.0 * (1.0 - overlap).max(0.0).sqrt())
}

fn validate_keep(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= n {
        return Err(Error::InvalidPartition(format!(
            "kept parties {keep:?} must be a nonempty proper subset of 0..{n}"
        )));
    }
    if let Some(p) = keep.iter().find(|&&p| p >= n) {
        return Err(Error::InvalidPartition(format!("party {p} out of range for n = {n}")));
    }
    Ok(keep)
}

/// Reduction of a state onto a subset of its parties.
pub trait PartialTrace {
    /// Traces out every party not in `keep`.
    fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix>;
}

impl PartialTrace for StateVector {
    fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = validate_keep(keep, self.parties())?;
        let m = self.coefficient_matrix(&keep);
        let entries = &m * m.adjoint();
        let local_dims = keep.iter().map(|&p| self.local_dims[p]).collect();
        Ok(DensityMatrix { entries, local_dims })
    }
}

impl PartialTrace for DensityMatrix {
    fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = validate_keep(keep, self.local_dims.len())?;
        let layout = SplitLayout::new(&self.local_dims, &keep);
        let mut joint = vec![0usize; self.dim()];
        for (idx, &(r, c)) in layout.pairs.iter().enumerate() {
            joint[r * layout.dim_out + c] = idx;
        }
        let mut entries = DMatrix::zeros(layout.dim_in, layout.dim_in);
        for a in 0..layout.dim_in {
            for b in 0..layout.dim_in {
                entries[(a, b)] = (0..layout.dim_out)
                    .map(|c| self.entries[(joint[a * layout.dim_out + c], joint[b * layout.dim_out + c])])
                    .sum();
            }
        }
        let local_dims = keep.iter().map(|&p| self.local_dims[p]).collect();
        Ok(DensityMatrix { entries, local_dims })
    }
}

/// Free-function form of [`PartialTrace::partial_trace`].
pub fn partial_trace<S: PartialTrace + ?Sized>(state: &S, keep: &[usize]) -> Result<DensityMatrix> {
    state.partial_trace(keep)
}

/// Squared Schmidt coefficients of a pure state across a bipartition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtDecomposition {
    /// Non-increasing, summing to one.
    pub squared_coefficients: Vec<f64>,
    /// Number of squared coefficients above [`SCHMIDT_THRESHOLD`].
    pub rank: usize,
}

impl SchmidtDecomposition {
    /// Largest squared coefficient.
    pub fn leading(&self) -> f64 {
        self.squared_coefficients[0]
    }

    /// `Σ s_i^q`, taken as exactly 1 for a product split.
    pub fn power_sum(&self, q: f64) -> f64 {
        if self.rank <= 1 {
            return 1.0;
        }
        self.squared_coefficients.iter().map(|s| s.powf(q)).sum()
    }
}

/// Schmidt data of `psi` across `cut`, from the singular values of the
/// coefficient matrix.
pub fn schmidt(psi: &StateVector, cut: &Bipartition) -> Result<SchmidtDecomposition> {
    if cut.parties() != psi.parties() {
        return Err(Error::InvalidPartition(format!(
            "cut over {} parties applied to a {}-party state",
            cut.parties(),
            psi.parties()
        )));
    }
    let norm = norm_sqr(&psi.amplitudes);
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    let m = psi.coefficient_matrix(cut.block());
    let mut squared: Vec<f64> = m.singular_values().iter().map(|s| s * s).collect();
    squared.sort_by(|a, b| b.total_cmp(a));
    let rank = squared.iter().filter(|&&s| s > SCHMIDT_THRESHOLD).count().max(1);
    Ok(SchmidtDecomposition { squared_coefficients: squared, rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn bell() -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(vec![c(h), c(0.0), c(0.0), c(h)], vec![2, 2]).unwrap()
    }

    // Direct loop over basis labels, independent of `SplitLayout`.
    fn brute_force_reduce(psi: &StateVector, keep: &[usize]) -> DMatrix<C64> {
        let dims = psi.local_dims();
        let n = dims.len();
        let digits_of = |mut idx: usize| {
            let mut out = vec![0; n];
            for p in (0..n).rev() {
                out[p] = idx % dims[p];
                idx /= dims[p];
            }
            out
        };
        let sub = |digits: &[usize], parties: &[usize]| {
            parties.iter().fold(0, |acc, &p| acc * dims[p] + digits[p])
        };
        let rest: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
        let dk: usize = keep.iter().map(|&p| dims[p]).product();
        let mut out = DMatrix::zeros(dk, dk);
        for i in 0..psi.dim() {
            for j in 0..psi.dim() {
                let (di, dj) = (digits_of(i), digits_of(j));
                if sub(&di, &rest) == sub(&dj, &rest) {
                    out[(sub(&di, keep), sub(&dj, keep))] += psi.amplitudes()[i] * psi.amplitudes()[j].conj();
                }
            }
        }
        out
    }

    fn w3() -> StateVector {
        let a = c(1.0 / 3f64.sqrt());
        let mut v = vec![c(0.0); 8];
        v[4] = a;
        v[2] = a;
        v[1] = a;
        StateVector::new(v, vec![2, 2, 2]).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            StateVector::new(vec![c(1.0), c(1.0)], vec![2]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(StateVector::new(vec![c(1.0)], vec![2]), Err(Error::Shape(_))));
        assert!(matches!(StateVector::new(vec![c(1.0)], vec![1]), Err(Error::Shape(_))));
        let s = StateVector::normalized(vec![c(3.0), c(4.0)], vec![2]).unwrap();
        assert!(close(s.amplitudes()[0].re, 0.6, 1e-15));
        let b = StateVector::basis(&[1, 0, 2], vec![2, 2, 3]).unwrap();
        assert_eq!(b.amplitudes()[8], c(1.0));
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let rho = bell().partial_trace(&[0]).unwrap();
        assert!(close(rho.entries()[(0, 0)].re, 0.5, 1e-15));
        assert!(close(rho.entries()[(1, 1)].re, 0.5, 1e-15));
        assert!(rho.entries()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn w3_single_party_reduction() {
        let rho = w3().partial_trace(&[0]).unwrap();
        assert_eq!(rho.entries(), &brute_force_reduce(&w3(), &[0]));
        let eig = rho.eigenvalues().unwrap();
        assert!(close(eig[0], 2.0 / 3.0, 1e-12) && close(eig[1], 1.0 / 3.0, 1e-12));
    }

    #[test]
    fn product_reduction_is_pure() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |0⟩ ⊗ |+⟩
        let psi = StateVector::new(vec![c(h), c(h), c(0.0), c(0.0)], vec![2, 2]).unwrap();
        let rho = psi.partial_trace(&[1]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(rho.entries()[(i, j)].re, 0.5, 1e-15));
            }
        }
        assert!(close(trace_power(&rho, 2.0).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn density_partial_trace_matches_state_route() {
        let psi = StateVector::normalized(
            (0..12).map(|k| C64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos())).collect(),
            vec![2, 3, 2],
        )
        .unwrap();
        let rho = psi.projector();
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let a = psi.partial_trace(&keep).unwrap();
            let b = rho.partial_trace(&keep).unwrap();
            assert!((a.entries() - b.entries()).norm() < 1e-13);
            assert!((a.entries() - brute_force_reduce(&psi, &keep)).norm() < 1e-13);
            assert_eq!(a.local_dims(), b.local_dims());
        }
    }

    #[test]
    fn partial_trace_errors() {
        assert!(matches!(bell().partial_trace(&[]), Err(Error::InvalidPartition(_))));
        assert!(matches!(bell().partial_trace(&[0, 1]), Err(Error::InvalidPartition(_))));
        assert!(matches!(bell().partial_trace(&[3]), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn eigenvalue_examples() {
        let half = DMatrix::identity(2, 2) * c(0.5);
        assert_eq!(hermitian_eigenvalues(&half).unwrap(), vec![0.5, 0.5]);
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0 / 3.0), c(2.0 / 3.0)]));
        let eig = hermitian_eigenvalues(&diag).unwrap();
        assert!(close(eig[0], 2.0 / 3.0, 1e-15) && close(eig[1], 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn eigenvalue_clamping_and_errors() {
        let tiny = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-5e-9)]));
        assert_eq!(hermitian_eigenvalues(&tiny).unwrap(), vec![1.0, 0.0]);
        let negative = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.1), c(-0.1)]));
        assert!(matches!(hermitian_eigenvalues(&negative), Err(Error::NotPsd(_))));
        let skew = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(hermitian_eigenvalues(&skew), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn w4_half_cut_spectrum() {
        let a = c(0.5);
        let mut v = vec![c(0.0); 16];
        for idx in [8, 4, 2, 1] {
            v[idx] = a;
        }
        let w4 = StateVector::new(v, vec![2; 4]).unwrap();
        let eig = w4.partial_trace(&[0, 1]).unwrap().eigenvalues().unwrap();
        let expect = [0.5, 0.5, 0.0, 0.0];
        for (e, x) in eig.iter().zip(expect) {
            assert!(close(*e, x, 1e-12));
        }
    }

    #[test]
    fn trace_power_examples() {
        assert!(close(trace_power(&bell().projector(), 3.7).unwrap(), 1.0, 1e-12));
        let mixed = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        assert!(close(trace_power(&mixed, 2.0).unwrap(), 0.5, 1e-15));
        let diag = DensityMatrix::new(
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0 / 3.0), c(1.0 / 3.0)])),
            vec![2],
        )
        .unwrap();
        assert!(close(trace_power(&diag, 3.0).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(matches!(trace_power(&diag, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn density_validation() {
        let bad_trace = DMatrix::identity(2, 2) * c(0.6);
        assert!(matches!(DensityMatrix::new(bad_trace, vec![2]), Err(Error::InvalidTrace(_))));
        let not_psd = DMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(matches!(DensityMatrix::new(not_psd, vec![2]), Err(Error::NotPsd(_))));
        assert!(matches!(
            DensityMatrix::new(DMatrix::identity(2, 2) * c(0.5), vec![2, 2]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn fidelity_examples() {
        assert!(close(fidelity_with_pure(&w3().projector(), &w3()).unwrap(), 1.0, 1e-14));
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2, 2]).unwrap();
        assert!(close(fidelity_with_pure(&mixed, &w3()).unwrap(), 0.125, 1e-15));
        let p = 0.3;
        let noisy = mixed.mix(&w3().projector(), p).unwrap();
        assert!(close(fidelity_with_pure(&noisy, &w3()).unwrap(), p + (1.0 - p) / 8.0, 1e-14));
        assert!(matches!(fidelity_with_pure(&mixed, &bell()), Err(Error::Shape(_))));
    }

    #[test]
    fn distance_examples() {
        let zero = StateVector::basis(&[0], vec![2]).unwrap();
        let one = StateVector::basis(&[1], vec![2]).unwrap();
        let plus = StateVector::normalized(vec![c(1.0), c(1.0)], vec![2]).unwrap();
        assert_eq!(state_distance(&zero, &zero).unwrap(), 0.0);
        assert!(close(state_distance(&zero, &one).unwrap(), 2.0, 1e-15));
        assert!(close(state_distance(&zero, &plus).unwrap(), 2f64.sqrt(), 1e-12));
        // agrees with the trace norm of the projector difference
        let direct = trace_distance(&zero.projector(), &plus.projector()).unwrap();
        assert!(close(direct, 2f64.sqrt(), 1e-12));
    }

    #[test]
    fn schmidt_examples() {
        let cut = Bipartition::new(&[0], 3).unwrap();
        let s = schmidt(&w3(), &cut).unwrap();
        assert_eq!(s.rank, 2);
        assert!(close(s.squared_coefficients[0], 2.0 / 3.0, 1e-12));
        assert!(close(s.squared_coefficients[1], 1.0 / 3.0, 1e-12));
        let product = StateVector::basis(&[0, 1, 0], vec![2; 3]).unwrap();
        for cut in crate::partitions::enumerate_bipartitions(3).unwrap() {
            let s = schmidt(&product, &cut).unwrap();
            assert_eq!(s.rank, 1);
            assert!(close(s.leading(), 1.0, 1e-15));
            assert_eq!(s.power_sum(2.5), 1.0);
        }
        let wrong = Bipartition::new(&[0], 2).unwrap();
        assert!(matches!(schmidt(&w3(), &wrong), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn local_unitary_application() {
        // X on party 1 maps |00⟩+|11⟩ to |01⟩+|10⟩
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let out = bell().apply_local(1, &x).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(out.amplitudes()[1].re, h, 1e-15) && close(out.amplitudes()[2].re, h, 1e-15));
        assert!(out.amplitudes()[0].norm() < 1e-15);
    }
}
