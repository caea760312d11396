//! Closed forms for W and GHZ states, fidelity-based lower bounds for mixed
//! states, continuity bounds for pure states, and a numerical convex-hull
//! check of the curve behind the lower bounds.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::{check_q, CutProfile};
use crate::partitions::Bipartition;
use crate::tensor::{fidelity_with_pure, schmidt, DensityMatrix, StateVector};

/// Witnesses whose leading squared Schmidt coefficient falls below this are rejected.
pub const MIN_WITNESS_S1: f64 = 1e-12;

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `ln(2^(n-1) - 1)`, stable for large `n`.
fn ln_cut_count(n: usize) -> f64 {
    let e = (n - 1) as f64;
    e * std::f64::consts::LN_2 + (-(2f64.powf(-e))).ln_1p()
}

/// `C_q` of `|W_n⟩` across a cut with `k` parties on one side:
/// `1 - (k/n)^q - ((n-k)/n)^q`.
pub fn closed_form_w(n: usize, k: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    if n < 2 || k == 0 || 2 * k > n {
        return domain(format!("closed_form_w needs n >= 2 and 1 <= k <= n/2, got n = {n}, k = {k}"));
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(1.0 - (kf / nf).powf(q) - ((nf - kf) / nf).powf(q))
}

/// `C_q` of `|GHZ_n⟩` across any cut: `1 - 2^(1-q)`.
pub fn closed_form_ghz(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(1.0 - 2f64.powf(1.0 - q))
}

/// GqC of `|W_n⟩` from the per-cut closed forms, evaluated in log space.
pub fn gqc_w_closed(n: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    if n < 2 {
        return domain(format!("gqc_w_closed needs n >= 2, got {n}"));
    }
    let ln_c = ln_cut_count(n);
    let mut log_mean = 0.0;
    for k in 1..=n / 2 {
        // the middle cut of an even n is counted from both sides
        let ln_mult = if 2 * k == n { ln_binomial(n, k) - std::f64::consts::LN_2 } else { ln_binomial(n, k) };
        log_mean += (ln_mult - ln_c).exp() * closed_form_w(n, k, q)?.ln();
    }
    Ok(log_mean.exp())
}

/// GqC of `|GHZ_n⟩`: every cut carries the same value.
pub fn gqc_ghz_closed(n: usize, q: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("gqc_ghz_closed needs n >= 2, got {n}"));
    }
    closed_form_ghz(q)
}

/// `GqC(W_n) / GqC(GHZ_n)` from closed forms.
pub fn w_ghz_ratio(n: usize, q: f64) -> Result<f64> {
    Ok(gqc_w_closed(n, q)? / gqc_ghz_closed(n, q)?)
}

/// Slope of the line through `(1/m, 0)` and `(1, 1 - m^(1-q))`:
/// `(m^(q-1) - 1) / (m^(q-2) (m - 1))`.
pub fn chord_coefficient(m: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    if m < 2 {
        return domain(format!("chord coefficient needs m >= 2, got {m}"));
    }
    let mf = m as f64;
    Ok((mf.powf(q - 1.0) - 1.0) / (mf.powf(q - 2.0) * (mf - 1.0)))
}

/// A fidelity-based lower bound together with every input that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub value: f64,
    /// `⟨φ|ρ|φ⟩`.
    pub witness_fidelity: f64,
    /// Leading squared Schmidt coefficient of the witness.
    pub s1: f64,
    pub m: usize,
    /// `max(fidelity / (s1 m), 1/m)`, clipped to at most 1.
    pub lambda: f64,
    pub q: f64,
    /// How `m` was chosen: `"smaller_block_dimension"` or `"max_schmidt_rank"`.
    pub m_rule: String,
    /// Schmidt rank of the witness (maximized over cuts for the multipartite bound).
    pub witness_rank: usize,
}

/// Evaluates `coeff(m, q)·(Λ - 1/m)` for given witness data.
pub fn bound_from_fidelity(fidelity: f64, s1: f64, m: usize, q: f64) -> Result<(f64, f64)> {
    if !(MIN_WITNESS_S1..=1.0 + 1e-12).contains(&s1) {
        return Err(Error::DegenerateWitness(format!("leading squared Schmidt coefficient {s1}")));
    }
    let coeff = chord_coefficient(m, q)?;
    let floor = 1.0 / m as f64;
    let lambda = (fidelity / (s1 * m as f64)).max(floor).min(1.0);
    Ok((coeff * (lambda - floor), lambda))
}

fn check_witness(rho: &DensityMatrix, witness: &StateVector) -> Result<f64> {
    fidelity_with_pure(rho, witness)
}

/// Lower bound on the bipartite `C_q(ρ)` across `cut`.
///
/// `s1` is the witness's leading squared Schmidt coefficient across the cut
/// and `m` the smaller of the two block dimensions.
pub fn lower_bound_bipartite(
    rho: &DensityMatrix,
    witness: &StateVector,
    cut: &Bipartition,
    q: f64,
) -> Result<BoundCertificate> {
    check_q(q)?;
    let fidelity = check_witness(rho, witness)?;
    let data = schmidt(witness, cut)?;
    let (dim_s, dim_rest) = cut.dims(witness.local_dims());
    let m = dim_s.min(dim_rest);
    let (value, lambda) = bound_from_fidelity(fidelity, data.leading(), m, q)?;
    Ok(BoundCertificate {
        value,
        witness_fidelity: fidelity,
        s1: data.leading(),
        m,
        lambda,
        q,
        m_rule: "smaller_block_dimension".into(),
        witness_rank: data.rank,
    })
}

/// Lower bound on the mixed-state GqC of `ρ`.
///
/// `s1` and `m` are the largest leading squared Schmidt coefficient and the
/// largest Schmidt rank of the witness over all bipartitions.
pub fn lower_bound_multipartite(rho: &DensityMatrix, witness: &StateVector, q: f64) -> Result<BoundCertificate> {
    check_q(q)?;
    let fidelity = check_witness(rho, witness)?;
    let profile = CutProfile::new(witness)?;
    lower_bound_multipartite_with(fidelity, &profile, q)
}

/// Same as [`lower_bound_multipartite`] with a precomputed witness profile.
pub fn lower_bound_multipartite_with(fidelity: f64, witness: &CutProfile, q: f64) -> Result<BoundCertificate> {
    let s1 = witness.max_leading_coefficient();
    let m = witness.max_rank();
    if m < 2 {
        return Err(Error::DegenerateWitness("witness is a product state across every cut".into()));
    }
    let (value, lambda) = bound_from_fidelity(fidelity, s1, m, q)?;
    Ok(BoundCertificate {
        value,
        witness_fidelity: fidelity,
        s1,
        m,
        lambda,
        q,
        m_rule: "max_schmidt_rank".into(),
        witness_rank: m,
    })
}

fn check_curve_args(m: usize, q: f64) -> Result<()> {
    check_q(q)?;
    if m < 2 {
        return domain(format!("m must be >= 2, got {m}"));
    }
    Ok(())
}

/// Minimal `C_q` over pure states with fidelity parameter `λ`:
/// `L(t(λ))` with `t(λ) = (√λ + √((m-1)(1-λ)))² / m` and
/// `L(t) = 1 - t^q - (1-t)^q / (m-1)^(q-1)`.
pub fn r_curve(lambda: f64, m: usize, q: f64) -> Result<f64> {
    check_curve_args(m, q)?;
    let mf = m as f64;
    let lo = 1.0 / mf;
    if !(lambda >= lo - 1e-12 && lambda <= 1.0 + 1e-12) {
        return domain(format!("lambda {lambda} outside [1/{m}, 1]"));
    }
    let lambda = lambda.clamp(lo, 1.0);
    let root = lambda.sqrt() + ((mf - 1.0) * (1.0 - lambda)).sqrt();
    let t = (root * root / mf).clamp(lo, 1.0);
    let rest = (1.0 - t).max(0.0);
    Ok(1.0 - t.powf(q) - rest.powf(q) / (mf - 1.0).powf(q - 1.0))
}

/// Lower convex envelope of [`r_curve`] sampled on `[1/m, 1]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexHullReport {
    pub m: usize,
    pub q: f64,
    pub grid_size: usize,
    /// Envelope vertices `(λ, R)`, left to right.
    pub vertices: Vec<(f64, f64)>,
    /// Slope between the envelope's two endpoints.
    pub secant_slope: f64,
    /// Largest `chord(λ) - envelope(λ)` over the grid, where chord is
    /// `chord_coefficient(m, q)·(λ - 1/m)`.
    pub max_gap_below_chord: f64,
    /// Largest `envelope(λ) - chord(λ)` over the grid.
    pub max_gap_above_chord: f64,
}

impl ConvexHullReport {
    pub fn left(&self) -> (f64, f64) {
        self.vertices[0]
    }

    pub fn right(&self) -> (f64, f64) {
        *self.vertices.last().expect("hull has two endpoints")
    }

    /// Piecewise-linear envelope value.
    pub fn envelope_at(&self, lambda: f64) -> f64 {
        let v = &self.vertices;
        let k = v.partition_point(|p| p.0 < lambda).clamp(1, v.len() - 1);
        let ((x0, y0), (x1, y1)) = (v[k - 1], v[k]);
        y0 + (y1 - y0) * (lambda - x0) / (x1 - x0)
    }

    /// True when the envelope is the single chord segment within `tol`.
    pub fn matches_chord(&self, tol: f64) -> bool {
        let coeff = chord_coefficient(self.m, self.q).unwrap_or(f64::NAN);
        (self.secant_slope - coeff).abs() <= tol
            && self.max_gap_below_chord <= tol
            && self.max_gap_above_chord <= tol
    }
}

/// Samples `R` on `grid_size` equally spaced points of `[1/m, 1]` and builds
/// the lower convex hull with a monotone chain.
pub fn convex_hull_oracle(m: usize, q: f64, grid_size: usize) -> Result<ConvexHullReport> {
    check_curve_args(m, q)?;
    if grid_size < 64 {
        return domain(format!("grid_size must be >= 64, got {grid_size}"));
    }
    let lo = 1.0 / m as f64;
    let step = (1.0 - lo) / (grid_size - 1) as f64;
    let points: Vec<(f64, f64)> = (0..grid_size)
        .map(|i| {
            let x = if i + 1 == grid_size { 1.0 } else { lo + i as f64 * step };
            r_curve(x, m, q).map(|y| (x, y))
        })
        .collect::<Result<_>>()?;

    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless a -> b -> p turns counter-clockwise
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let (first, last) = (hull[0], hull[hull.len() - 1]);
    let secant_slope = (last.1 - first.1) / (last.0 - first.0);
    let coeff = chord_coefficient(m, q)?;
    let mut report = ConvexHullReport {
        m,
        q,
        grid_size,
        vertices: hull,
        secant_slope,
        max_gap_below_chord: 0.0,
        max_gap_above_chord: 0.0,
    };
    for &(x, _) in &points {
        let gap = coeff * (x - lo) - report.envelope_at(x);
        report.max_gap_below_chord = report.max_gap_below_chord.max(gap);
        report.max_gap_above_chord = report.max_gap_above_chord.max(-gap);
    }
    Ok(report)
}

/// `d[(1 + ε/d)^q - 1]`: bound on `|C_q(ψ1) - C_q(ψ2)|` for states whose
/// projectors are within trace distance `ε`.
pub fn continuity_bound_bipartite(d: usize, epsilon: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if d < 1 || !(epsilon >= 0.0) {
        return domain(format!("need d >= 1 and epsilon >= 0, got d = {d}, epsilon = {epsilon}"));
    }
    let df = d as f64;
    Ok(df * ((1.0 + epsilon / df).powf(q) - 1.0))
}

/// `[Σ_{i=1}^{(n-1)/2} C(n,i) d^i ((1 + ε/d^i)^q - 1)]^(1/c)` for odd `n`,
/// with `c = 2^(n-1) - 1`. Even `n` is rejected.
pub fn continuity_bound_multipartite(n: usize, d: usize, epsilon: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if n < 3 || n.is_multiple_of(2) {
        return domain(format!("multipartite continuity bound is stated for odd n >= 3, got {n}"));
    }
    if d < 2 || !(epsilon >= 0.0) {
        return domain(format!("need d >= 2 and epsilon >= 0, got d = {d}, epsilon = {epsilon}"));
    }
    let df = d as f64;
    let sum: f64 = (1..=(n - 1) / 2)
        .map(|i| {
            let di = df.powi(i as i32);
            ln_binomial(n, i).exp() * di * ((1.0 + epsilon / di).powf(q) - 1.0)
        })
        .sum();
    Ok(sum.powf((-ln_cut_count(n)).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::gqc_pure;
    use crate::states::{ghz_state, noisy_state, w_state, NoisyStateSpec};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn w_and_ghz_closed_forms() {
        assert!(close(closed_form_w(3, 1, 2.0).unwrap(), 4.0 / 9.0, 1e-15));
        assert!(close(closed_form_w(4, 2, 3.0).unwrap(), 0.75, 1e-15));
        for q in [2.0, 3.3, 7.0] {
            assert!(close(closed_form_w(6, 3, q).unwrap(), 1.0 - 2f64.powf(1.0 - q), 1e-15));
        }
        assert!(closed_form_w(4, 3, 2.0).is_err() && closed_form_w(4, 0, 2.0).is_err());
        assert!(close(closed_form_ghz(2.0).unwrap(), 0.5, 1e-15));
        assert!(close(closed_form_ghz(3.0).unwrap(), 0.75, 1e-15));
        let mut prev = 0.0;
        for q in [2.0, 4.0, 8.0, 16.0, 32.0] {
            let v = closed_form_ghz(q).unwrap();
            assert!(v > prev && v < 1.0);
            prev = v;
        }
    }

    #[test]
    fn gqc_closed_small_n() {
        assert!(close(gqc_w_closed(3, 2.0).unwrap(), 4.0 / 9.0, 1e-14));
        assert!(close(gqc_ghz_closed(3, 2.0).unwrap(), 0.5, 1e-15));
        let w4 = ((9.0f64 / 16.0).powi(4) * 0.75f64.powi(3)).powf(1.0 / 7.0);
        assert!(close(gqc_w_closed(4, 3.0).unwrap(), w4, 1e-14));
        // log-space evaluation survives very large n
        let big = gqc_w_closed(400, 3.0).unwrap();
        assert!(big.is_finite() && big > 0.7 && big < 0.75);
    }

    #[test]
    fn closed_forms_match_numerics() {
        for n in 3..=9 {
            for q in [2.0, 3.0, 4.5] {
                let numeric = gqc_pure(&w_state(n).unwrap(), q).unwrap().aggregate;
                assert!(close(numeric, gqc_w_closed(n, q).unwrap(), 1e-9), "n = {n}, q = {q}");
            }
        }
    }

    #[test]
    fn chord_coefficient_values() {
        assert!(close(chord_coefficient(2, 2.0).unwrap(), 1.0, 1e-15));
        // m = 2: 2 - 2^(2-q)
        for q in [2.5, 3.0, 12.0] {
            assert!(close(chord_coefficient(2, q).unwrap(), 2.0 - 2f64.powf(2.0 - q), 1e-14));
        }
        assert!(chord_coefficient(1, 2.0).is_err());
    }

    #[test]
    fn bipartite_bound_on_ghz_is_tight() {
        let ghz = ghz_state(3).unwrap();
        let cut = Bipartition::new(&[0], 3).unwrap();
        let cert = lower_bound_bipartite(&ghz.projector(), &ghz, &cut, 2.0).unwrap();
        assert_eq!(cert.m, 2);
        assert!(close(cert.s1, 0.5, 1e-12));
        assert!(close(cert.lambda, 1.0, 1e-12));
        assert!(close(cert.value, 0.5, 1e-12));
    }

    #[test]
    fn bipartite_bound_on_noisy_w() {
        let w = w_state(3).unwrap();
        let cut = Bipartition::new(&[0], 3).unwrap();
        for p in [0.0, 0.3, 13.0 / 21.0, 0.7, 1.0] {
            let rho = noisy_state(&NoisyStateSpec { base: w.clone(), visibility: p }).unwrap();
            let cert = lower_bound_bipartite(&rho, &w, &cut, 2.0).unwrap();
            let expected = (3.0 * (7.0 * p + 1.0) / 32.0).max(0.5) - 0.5;
            assert!(close(cert.value, expected, 1e-12), "p = {p}");
            assert!(close(cert.s1, 2.0 / 3.0, 1e-12));
        }
        let mixed = DensityMatrix::maximally_mixed(vec![2; 3]).unwrap();
        let cert = lower_bound_bipartite(&mixed, &w, &cut, 3.0).unwrap();
        assert!(close(cert.lambda, 0.5, 1e-15) && cert.value == 0.0);
    }

    #[test]
    fn multipartite_bound_on_noisy_ghz() {
        let ghz = ghz_state(3).unwrap();
        for c in [0.2, 3.0 / 7.0, 0.6, 1.0] {
            let rho = noisy_state(&NoisyStateSpec { base: ghz.clone(), visibility: c }).unwrap();
            for q in [2.0, 3.0, 7.5] {
                let cert = lower_bound_multipartite(&rho, &ghz, q).unwrap();
                let coeff = (2f64.powf(q - 1.0) - 1.0) / 2f64.powf(q - 2.0);
                let expected = coeff * (((7.0 * c + 1.0) / 8.0).max(0.5) - 0.5);
                assert!(close(cert.value, expected, 1e-12), "c = {c}, q = {q}");
                assert_eq!(cert.m, 2);
            }
        }
    }

    #[test]
    fn chord_bound_can_exceed_exact_value() {
        // the envelope of R lies below the chord, so a mismatched witness can overshoot
        let psi = StateVector::new(
            vec![crate::tensor::C64::new(0.9f64.sqrt(), 0.0), 0.0.into(), 0.0.into(), crate::tensor::C64::new(0.1f64.sqrt(), 0.0)],
            vec![2, 2],
        )
        .unwrap();
        let bell = ghz_state(2).unwrap();
        let cut = Bipartition::new(&[0], 2).unwrap();
        let cert = lower_bound_bipartite(&psi.projector(), &bell, &cut, 2.0).unwrap();
        let exact = crate::measures::q_concurrence_pure(&psi, &cut, 2.0).unwrap();
        assert!(close(cert.witness_fidelity, 0.8, 1e-12));
        assert!(close(cert.value, 0.3, 1e-12));
        assert!(close(exact, 0.18, 1e-12));
        assert!(close(r_curve(0.8, 2, 2.0).unwrap(), 0.18, 1e-12));
    }

    #[test]
    fn product_witness_is_degenerate() {
        let prod = crate::states::product_from_bits("010").unwrap();
        let rho = prod.projector();
        assert!(matches!(lower_bound_multipartite(&rho, &prod, 2.0), Err(Error::DegenerateWitness(_))));
        assert!(matches!(bound_from_fidelity(0.5, 0.0, 2, 2.0), Err(Error::DegenerateWitness(_))));
    }

    #[test]
    fn r_curve_endpoints() {
        for m in [2usize, 3, 4] {
            for q in [2.0, 2.5, 5.0] {
                assert!(close(r_curve(1.0 / m as f64, m, q).unwrap(), 0.0, 1e-12));
                let top = 1.0 - (m as f64).powf(1.0 - q);
                assert!(close(r_curve(1.0, m, q).unwrap(), top, 1e-12));
            }
        }
        assert!(r_curve(0.2, 2, 2.0).is_err());
        assert!(r_curve(1.1, 2, 2.0).is_err());
    }

    #[test]
    fn r_curve_two_qubit_square() {
        // m = 2, q = 2: t(λ) = 1/2 + sqrt(λ(1-λ)), so R = 2(λ - 1/2)²
        for lambda in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let r = r_curve(lambda, 2, 2.0).unwrap();
            assert!(close(r, 2.0 * (lambda - 0.5f64).powi(2), 1e-12));
        }
    }

    #[test]
    fn hull_secant_picks_the_chord_normalization() {
        for m in [2usize, 3, 4] {
            for q in [2.0, 2.5, 3.0, 5.0, 12.0] {
                let hull = convex_hull_oracle(m, q, 2001).unwrap();
                let mf = m as f64;
                let alternative = (mf.powf(q) - 1.0) / (mf.powf(q - 1.0) * (mf - 1.0));
                let coeff = chord_coefficient(m, q).unwrap();
                assert!(close(hull.secant_slope, coeff, 1e-9));
                let (hit, miss) = ((hull.secant_slope - coeff).abs(), (hull.secant_slope - alternative).abs());
                assert!(hit * 100.0 < miss, "m = {m}, q = {q}");
                assert!(close(hull.left().0, 1.0 / mf, 1e-15) && close(hull.right().0, 1.0, 1e-15));
            }
        }
    }

    #[test]
    fn hull_of_a_convex_curve_is_the_curve() {
        // R is convex for m = 2, q = 2, so the envelope follows it and lies below the chord
        let hull = convex_hull_oracle(2, 2.0, 201).unwrap();
        assert_eq!(hull.vertices.len(), 201);
        assert!(close(hull.envelope_at(0.75), 0.125, 1e-12));
        assert!(close(hull.max_gap_below_chord, 0.125, 1e-12));
        assert!(!hull.matches_chord(1e-6));
    }

    #[test]
    fn hull_rejects_small_grids() {
        assert!(convex_hull_oracle(2, 2.0, 10).is_err());
    }

    #[test]
    fn continuity_bound_values() {
        assert_eq!(continuity_bound_bipartite(2, 0.0, 2.0).unwrap(), 0.0);
        assert!(close(continuity_bound_bipartite(2, 0.1, 2.0).unwrap(), 0.205, 1e-14));
        assert_eq!(continuity_bound_multipartite(3, 2, 0.0, 2.0).unwrap(), 0.0);
        let v = continuity_bound_multipartite(3, 2, 0.1, 2.0).unwrap();
        assert!(close(v, 0.615f64.powf(1.0 / 3.0), 1e-14));
        assert!(close(v, 0.8504, 5e-5));
        assert!(continuity_bound_multipartite(4, 2, 0.1, 2.0).is_err());
        assert!(continuity_bound_bipartite(2, -0.1, 2.0).is_err());
    }
}
