//! Seeded randomized property suites.
//!
//! Each property draws its instances from its own generator, derived from the
//! suite seed and the property name, so reports are reproducible and
//! independent of which other properties run.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{continuity_bound_bipartite, continuity_bound_multipartite, lower_bound_multipartite_with};
use crate::error::{Error, Result};
use crate::io::{DensityFile, StateFile};
use crate::measures::{concurrence_pure, f_q, max_fq, q_concurrence_pure, tensor_partywise, CutProfile};
use crate::partitions::enumerate_bipartitions;
use crate::states::{
    class1, four_qubit_family, ghz_state, haar_random_pure_with, haar_random_unitary, product_from_bits,
    product_state, random_density, seeded_rng, w_state, SeededRng,
};
use crate::sweep::format_sig;
use crate::tensor::{state_distance, DensityMatrix, PartialTrace, StateVector, C64};

/// Slack allowed on every inequality.
pub const DEFAULT_SLACK: f64 = 1e-9;
/// Counterexamples kept per property.
const MAX_COUNTEREXAMPLES: usize = 3;
pub const CONTINUITY_EPSILONS: [f64; 3] = [0.01, 0.05, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma1,
    Subadditivity,
    Soundness,
    Continuity,
    Theorem1,
    Symmetry,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] =
        ["lemma1", "subadditivity", "soundness", "continuity", "theorem1", "symmetry", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Subadditivity => "subadditivity",
            Suite::Soundness => "soundness",
            Suite::Continuity => "continuity",
            Suite::Theorem1 => "theorem1",
            Suite::Symmetry => "symmetry",
            Suite::All => "all",
        }
    }

    /// Default instance count per property.
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Soundness => 500,
            _ => 200,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemma1" => Suite::Lemma1,
            "subadditivity" => Suite::Subadditivity,
            "soundness" => Suite::Soundness,
            "continuity" => Suite::Continuity,
            "theorem1" => Suite::Theorem1,
            "symmetry" => Suite::Symmetry,
            "all" => Suite::All,
            other => return Err(Error::Format(format!("unknown suite {other:?}; expected one of {:?}", Suite::NAMES))),
        })
    }
}

/// The offending input of a violated property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub instance: usize,
    pub detail: String,
    pub states: Vec<StateFile>,
    pub densities: Vec<DensityFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub instances: usize,
    pub violations: usize,
    /// Smallest `allowed - observed` seen; negative beyond the slack means a violation.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropReport {
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    pub slack: f64,
    pub properties: Vec<PropertyResult>,
    pub counterexamples: Vec<Counterexample>,
}

impl PropReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.violations == 0)
    }

    pub fn total_violations(&self) -> usize {
        self.properties.iter().map(|p| p.violations).sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {} seed {} samples {} slack {}\n",
            self.suite,
            self.seed,
            self.samples,
            format_sig(self.slack)
        );
        for p in &self.properties {
            out.push_str(&format!(
                "{} {} instances={} violations={} worst_margin={}\n",
                if p.violations == 0 { "PASS" } else { "FAIL" },
                p.name,
                p.instances,
                p.violations,
                format_sig(p.worst_margin)
            ));
        }
        out.push_str(if self.passed() { "result PASS\n" } else { "result FAIL\n" });
        out
    }

    pub fn counterexamples_json(&self) -> String {
        serde_json::to_string_pretty(&self.counterexamples).expect("counterexamples serialize")
    }
}

/// Accumulates one property's checks.
struct Tally<'a> {
    result: PropertyResult,
    slack: f64,
    sink: &'a mut Vec<Counterexample>,
    kept: usize,
}

impl<'a> Tally<'a> {
    fn new(name: &str, slack: f64, sink: &'a mut Vec<Counterexample>) -> Self {
        Tally {
            result: PropertyResult { name: name.into(), instances: 0, violations: 0, worst_margin: f64::INFINITY },
            slack,
            sink,
            kept: 0,
        }
    }

    /// Records `observed ≤ allowed` (up to the slack).
    fn le(&mut self, observed: f64, allowed: f64, witness: impl FnOnce() -> (String, Vec<StateVector>, Vec<DensityMatrix>)) {
        let margin = allowed - observed;
        self.record(margin, margin >= -self.slack, witness);
    }

    /// Records `observed > floor` with no slack.
    fn gt(&mut self, observed: f64, floor: f64, witness: impl FnOnce() -> (String, Vec<StateVector>, Vec<DensityMatrix>)) {
        let margin = observed - floor;
        self.record(margin, margin > 0.0, witness);
    }

    /// Records `|a - b| ≤ tol`.
    fn eq(&mut self, a: f64, b: f64, tol: f64, witness: impl FnOnce() -> (String, Vec<StateVector>, Vec<DensityMatrix>)) {
        let margin = tol - (a - b).abs();
        self.record(margin, margin >= 0.0, witness);
    }

    fn record(&mut self, margin: f64, ok: bool, witness: impl FnOnce() -> (String, Vec<StateVector>, Vec<DensityMatrix>)) {
        self.result.instances += 1;
        if !(margin >= self.result.worst_margin) {
            self.result.worst_margin = margin;
        }
        if ok {
            return;
        }
        self.result.violations += 1;
        if self.kept < MAX_COUNTEREXAMPLES {
            self.kept += 1;
            let (detail, states, densities) = witness();
            self.sink.push(Counterexample {
                property: self.result.name.clone(),
                instance: self.result.instances - 1,
                detail,
                states: states.into_iter().map(StateFile::from).collect(),
                densities: densities.iter().map(DensityFile::from).collect(),
            });
        }
    }

    fn finish(self) -> PropertyResult {
        let mut r = self.result;
        if r.instances == 0 {
            r.worst_margin = 0.0;
        }
        r
    }
}

/// FNV-1a, used to give every property its own stream.
fn stream_seed(seed: u64, name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325 ^ seed, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn rng_for(seed: u64, name: &str) -> SeededRng {
    seeded_rng(stream_seed(seed, name))
}

fn random_q(rng: &mut impl Rng) -> f64 {
    rng.random_range(2.0..6.0)
}

fn random_mixed(rng: &mut impl Rng, dims: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    let rank = rng.random_range(1..=total);
    random_density(dims, rank, rng)
}

fn random_weights(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

fn no_states(detail: String) -> (String, Vec<StateVector>, Vec<DensityMatrix>) {
    (detail, Vec::new(), Vec::new())
}

struct Ctx {
    seed: u64,
    samples: usize,
    slack: f64,
    properties: Vec<PropertyResult>,
    counterexamples: Vec<Counterexample>,
}

impl Ctx {
    fn run(&mut self, name: &str, body: impl FnOnce(&mut Tally, &mut SeededRng, usize) -> Result<()>) -> Result<()> {
        let mut rng = rng_for(self.seed, name);
        let mut tally = Tally::new(name, self.slack, &mut self.counterexamples);
        body(&mut tally, &mut rng, self.samples)?;
        let result = tally.finish();
        log::debug!("{name}: {} instances, {} violations", result.instances, result.violations);
        self.properties.push(result);
        Ok(())
    }
}

fn lemma1(ctx: &mut Ctx) -> Result<()> {
    ctx.run("lemma1.nonnegativity", |t, rng, samples| {
        for _ in 0..samples {
            let d = rng.random_range(2..=6);
            let rho = random_mixed(rng, &[d])?;
            let q = random_q(rng);
            let v = f_q(&rho, q)?;
            t.le(-v, 0.0, || (format!("q = {q}, F_q = {v}"), vec![], vec![rho.clone()]));
        }
        Ok(())
    })?;
    let bipartite = |rng: &mut SeededRng| -> Result<(DensityMatrix, DensityMatrix, DensityMatrix, f64)> {
        let dims = [rng.random_range(2..=3), rng.random_range(2..=3)];
        let rho = random_mixed(rng, &dims)?;
        let (a, b) = (rho.partial_trace(&[0])?, rho.partial_trace(&[1])?);
        Ok((rho, a, b, random_q(rng)))
    };
    ctx.run("lemma1.subadditivity_upper", |t, rng, samples| {
        for _ in 0..samples {
            let (rho, a, b, q) = bipartite(rng)?;
            let (fab, fa, fb) = (f_q(&rho, q)?, f_q(&a, q)?, f_q(&b, q)?);
            t.le(fab, fa + fb, || (format!("q = {q}: F(AB) = {fab}, F(A) + F(B) = {}", fa + fb), vec![], vec![rho.clone()]));
        }
        Ok(())
    })?;
    ctx.run("lemma1.subadditivity_lower", |t, rng, samples| {
        for _ in 0..samples {
            let (rho, a, b, q) = bipartite(rng)?;
            let (fab, fa, fb) = (f_q(&rho, q)?, f_q(&a, q)?, f_q(&b, q)?);
            t.le((fa - fb).abs(), fab, || (format!("q = {q}: |F(A) - F(B)| = {}, F(AB) = {fab}", (fa - fb).abs()), vec![], vec![rho.clone()]));
        }
        Ok(())
    })?;
    let ensemble = |rng: &mut SeededRng| -> Result<(Vec<f64>, Vec<DensityMatrix>, DensityMatrix, f64)> {
        let d = rng.random_range(2..=4);
        let k = rng.random_range(2..=4);
        let weights = random_weights(rng, k);
        let parts: Vec<DensityMatrix> = (0..k).map(|_| random_mixed(rng, &[d])).collect::<Result<_>>()?;
        let pairs: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(parts.iter()).collect();
        let mix = DensityMatrix::convex_combination(&pairs)?;
        Ok((weights, parts, mix, random_q(rng)))
    };
    ctx.run("lemma1.concavity", |t, rng, samples| {
        for _ in 0..samples {
            let (w, parts, mix, q) = ensemble(rng)?;
            let avg: f64 = w.iter().zip(&parts).map(|(p, r)| Ok(p * f_q(r, q)?)).sum::<Result<f64>>()?;
            let fm = f_q(&mix, q)?;
            t.le(avg, fm, || no_states(format!("q = {q}: average {avg} > F(mix) {fm}")));
        }
        Ok(())
    })?;
    ctx.run("lemma1.quasiconvexity", |t, rng, samples| {
        for _ in 0..samples {
            let (w, parts, mix, q) = ensemble(rng)?;
            let pq: f64 = w.iter().map(|p| p.powf(q)).sum();
            let rhs: f64 = w.iter().zip(&parts).map(|(p, r)| Ok(p.powf(q) * f_q(r, q)?)).sum::<Result<f64>>()? + 1.0 - pq;
            let fm = f_q(&mix, q)?;
            t.le(fm, rhs, || (format!("q = {q}: F(mix) {fm} > {rhs}"), vec![], parts.clone()));
        }
        Ok(())
    })?;
    ctx.run("lemma1.quasiconvexity_orthogonal_equality", |t, rng, samples| {
        for _ in 0..samples {
            let d = rng.random_range(2..=5);
            let k = rng.random_range(2..=d);
            let u = haar_random_unitary(d, rng);
            let weights = random_weights(rng, k);
            let q = random_q(rng);
            let states: Vec<StateVector> =
                (0..k).map(|j| StateVector::normalized(u.column(j).iter().copied().collect(), vec![d])).collect::<Result<_>>()?;
            let projectors: Vec<DensityMatrix> = states.iter().map(StateVector::projector).collect();
            let pairs: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(projectors.iter()).collect();
            let fm = f_q(&DensityMatrix::convex_combination(&pairs)?, q)?;
            let pq: f64 = weights.iter().map(|p| p.powf(q)).sum();
            let rhs: f64 =
                weights.iter().zip(&projectors).map(|(p, r)| Ok(p.powf(q) * f_q(r, q)?)).sum::<Result<f64>>()? + 1.0 - pq;
            let slack = t.slack;
            t.eq(fm, rhs, slack, || (format!("q = {q}: F(mix) {fm} != {rhs}"), states.clone(), vec![]));
        }
        Ok(())
    })
}

fn random_qubits(rng: &mut impl Rng, n: usize) -> Result<StateVector> {
    haar_random_pure_with(&vec![2; n], rng)
}

fn subadditivity(ctx: &mut Ctx) -> Result<()> {
    ctx.run("subadditivity.cut_tensor", |t, rng, samples| {
        for _ in 0..samples {
            let (a, b) = (random_qubits(rng, 3)?, random_qubits(rng, 3)?);
            let ab = tensor_partywise(&a, &b)?;
            let q = random_q(rng);
            for cut in enumerate_bipartitions(3)? {
                let (ca, cb, cab) = (q_concurrence_pure(&a, &cut, q)?, q_concurrence_pure(&b, &cut, q)?, q_concurrence_pure(&ab, &cut, q)?);
                t.le(cab, ca + cb, || (format!("cut {cut}, q = {q}: {cab} > {ca} + {cb}"), vec![a.clone(), b.clone()], vec![]));
            }
        }
        Ok(())
    })?;
    ctx.run("subadditivity.cut_tensor_identity", |t, rng, samples| {
        for _ in 0..samples {
            let (a, b) = (random_qubits(rng, 3)?, random_qubits(rng, 3)?);
            let ab = tensor_partywise(&a, &b)?;
            let q = random_q(rng);
            for cut in enumerate_bipartitions(3)? {
                let (ca, cb, cab) = (q_concurrence_pure(&a, &cut, q)?, q_concurrence_pure(&b, &cut, q)?, q_concurrence_pure(&ab, &cut, q)?);
                let expected = ca + cb - ca * cb;
                let slack = t.slack;
                t.eq(cab, expected, slack, || (format!("cut {cut}, q = {q}: {cab} != {expected}"), vec![a.clone(), b.clone()], vec![]));
            }
        }
        Ok(())
    })?;
    ctx.run("subadditivity.gqc_tensor", |t, rng, samples| {
        for _ in 0..samples {
            let (a, b) = (random_qubits(rng, 3)?, random_qubits(rng, 3)?);
            let q = random_q(rng);
            let ga = CutProfile::new(&a)?.gqc(q)?.aggregate;
            let gb = CutProfile::new(&b)?.gqc(q)?.aggregate;
            let gab = CutProfile::new(&tensor_partywise(&a, &b)?)?.gqc(q)?.aggregate;
            t.le(gab, ga + gb, || (format!("q = {q}: {gab} > {ga} + {gb}"), vec![a.clone(), b.clone()], vec![]));
        }
        Ok(())
    })
}

fn soundness(ctx: &mut Ctx) -> Result<()> {
    for q in [2.0, 3.0, 4.5] {
        ctx.run(&format!("soundness.pure_witness_q{}", format_sig(q)), |t, rng, samples| {
            for _ in 0..samples {
                let psi = random_qubits(rng, 3)?;
                let profile = CutProfile::new(&psi)?;
                let exact = profile.gqc(q)?.aggregate;
                let cert = lower_bound_multipartite_with(1.0, &profile, q)?;
                t.le(cert.value, exact, || (format!("bound {} > GqC {exact}", cert.value), vec![psi.clone()], vec![]));
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// `cos a |ψ⟩ + sin a |φ⊥⟩` with `2 sin a = distance`.
fn perturb(psi: &StateVector, distance: f64, rng: &mut impl Rng) -> Result<StateVector> {
    let phi = haar_random_pure_with(psi.local_dims(), rng)?;
    let overlap = psi.inner(&phi)?;
    let orth: Vec<C64> = phi.amplitudes().iter().zip(psi.amplitudes()).map(|(p, s)| p - s * overlap).collect();
    let orth = StateVector::normalized(orth, psi.local_dims().to_vec())?;
    let a = (distance / 2.0).asin();
    let amps = psi.amplitudes().iter().zip(orth.amplitudes()).map(|(s, o)| s * a.cos() + o * a.sin()).collect();
    StateVector::normalized(amps, psi.local_dims().to_vec())
}

fn continuity(ctx: &mut Ctx) -> Result<()> {
    for eps in CONTINUITY_EPSILONS {
        let tag = format_sig(eps);
        let pairs = |rng: &mut SeededRng| -> Result<(StateVector, StateVector, f64, f64)> {
            let a = random_qubits(rng, 3)?;
            let b = perturb(&a, eps * rng.random_range(0.05..=1.0), rng)?;
            let dist = state_distance(&a, &b)?;
            let q = [2.0, 3.0, 4.5][rng.random_range(0..3)];
            Ok((a, b, dist, q))
        };
        ctx.run(&format!("continuity.bipartite_eps{tag}"), |t, rng, samples| {
            for _ in 0..samples {
                let (a, b, dist, q) = pairs(rng)?;
                for cut in enumerate_bipartitions(3)? {
                    let (ds, dr) = cut.dims(a.local_dims());
                    let bound = continuity_bound_bipartite(ds.min(dr), dist, q)?;
                    let delta = (q_concurrence_pure(&a, &cut, q)? - q_concurrence_pure(&b, &cut, q)?).abs();
                    t.le(delta, bound, || (format!("cut {cut}, q = {q}, distance {dist}: {delta} > {bound}"), vec![a.clone(), b.clone()], vec![]));
                }
            }
            Ok(())
        })?;
        ctx.run(&format!("continuity.multipartite_eps{tag}"), |t, rng, samples| {
            for _ in 0..samples {
                let (a, b, dist, q) = pairs(rng)?;
                let bound = continuity_bound_multipartite(3, 2, dist, q)?;
                let delta = (CutProfile::new(&a)?.gqc(q)?.aggregate - CutProfile::new(&b)?.gqc(q)?.aggregate).abs();
                t.le(delta, bound, || (format!("q = {q}, distance {dist}: {delta} > {bound}"), vec![a.clone(), b.clone()], vec![]));
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// Biseparable or fully product states from the factories.
fn biseparable_instance(rng: &mut impl Rng, k: usize) -> Result<StateVector> {
    let n = rng.random_range(3..=5);
    match k % 4 {
        0 => {
            let bits: String = (0..n).map(|_| if rng.random_bool(0.5) { '1' } else { '0' }).collect();
            product_from_bits(&bits)
        }
        1 => {
            // entangled block on the first parties times a product of the rest
            let split = rng.random_range(2..n);
            let mut factors = vec![haar_random_pure_with(&vec![2; split], rng)?];
            for _ in split..n {
                factors.push(haar_random_pure_with(&[2], rng)?);
            }
            product_state(&factors)
        }
        2 => {
            let split = rng.random_range(1..n);
            product_state(&[haar_random_pure_with(&vec![2; split], rng)?, haar_random_pure_with(&vec![2; n - split], rng)?])
        }
        _ => {
            if rng.random_bool(0.5) {
                class1(std::f64::consts::FRAC_PI_2)
            } else {
                four_qubit_family(if rng.random_bool(0.5) { 0.0 } else { std::f64::consts::FRAC_PI_2 })
            }
        }
    }
}

fn theorem1(ctx: &mut Ctx) -> Result<()> {
    ctx.run("theorem1.biseparable_vanishes", |t, rng, samples| {
        for k in 0..samples {
            let psi = biseparable_instance(rng, k)?;
            let q = random_q(rng);
            let g = CutProfile::new(&psi)?.gqc(q)?.aggregate;
            t.le(g, 1e-12, || (format!("q = {q}: GqC = {g}"), vec![psi.clone()], vec![]));
        }
        Ok(())
    })?;
    ctx.run("theorem1.gme_positive", |t, rng, samples| {
        for k in 0..samples {
            let n = 3 + k % 4;
            let psi = match k % 3 {
                0 => ghz_state(n)?,
                1 => w_state(n)?,
                _ => random_qubits(rng, n)?,
            };
            let q = random_q(rng);
            let g = CutProfile::new(&psi)?.gqc(q)?.aggregate;
            t.gt(g, 1e-6, || (format!("q = {q}: GqC = {g}"), vec![psi.clone()], vec![]));
        }
        Ok(())
    })?;
    ctx.run("theorem1.ghz3_maximal", |t, _, _| {
        let ghz = ghz_state(3)?;
        for q in [2.0, 3.0, 5.0] {
            let g = CutProfile::new(&ghz)?.gqc(q)?.aggregate;
            let top = max_fq(2, q)?;
            t.eq(g, top, 1e-10, || (format!("q = {q}: {g} != {top}"), vec![ghz.clone()], vec![]));
        }
        Ok(())
    })
}

fn random_local_dims(rng: &mut impl Rng) -> Vec<usize> {
    let n = rng.random_range(2..=4);
    (0..n).map(|_| rng.random_range(2..=3)).collect()
}

fn symmetry(ctx: &mut Ctx) -> Result<()> {
    ctx.run("symmetry.local_unitary_invariance", |t, rng, samples| {
        for _ in 0..samples {
            let dims = random_local_dims(rng);
            let psi = haar_random_pure_with(&dims, rng)?;
            let mut rotated = psi.clone();
            for (party, &d) in dims.iter().enumerate() {
                rotated = rotated.apply_local(party, &haar_random_unitary(d, rng))?;
            }
            let q = random_q(rng);
            let before = CutProfile::new(&psi)?.gqc(q)?;
            let after = CutProfile::new(&rotated)?.gqc(q)?;
            for (x, y) in before.per_cut.iter().zip(&after.per_cut) {
                t.eq(x.value, y.value, 1e-9, || (format!("cut {}, q = {q}", x.cut), vec![psi.clone(), rotated.clone()], vec![]));
            }
        }
        Ok(())
    })?;
    ctx.run("symmetry.cut_symmetry", |t, rng, samples| {
        for _ in 0..samples {
            let dims = random_local_dims(rng);
            let psi = haar_random_pure_with(&dims, rng)?;
            let q = random_q(rng);
            for cut in enumerate_bipartitions(dims.len())? {
                let s = f_q(&psi.partial_trace(cut.block())?, q)?;
                let sbar = f_q(&psi.partial_trace(&cut.complement())?, q)?;
                t.eq(s, sbar, 1e-10, || (format!("cut {cut}, q = {q}: {s} vs {sbar}"), vec![psi.clone()], vec![]));
            }
        }
        Ok(())
    })?;
    ctx.run("symmetry.gmc_concurrence_consistency", |t, rng, samples| {
        for _ in 0..samples {
            let dims = random_local_dims(rng);
            let psi = haar_random_pure_with(&dims, rng)?;
            let gmc = CutProfile::new(&psi)?.gmc().aggregate;
            let direct = enumerate_bipartitions(dims.len())?
                .iter()
                .map(|c| concurrence_pure(&psi, c))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            t.eq(gmc, direct, 1e-12, || (format!("{gmc} vs {direct}"), vec![psi.clone()], vec![]));
        }
        Ok(())
    })
}

/// Runs `suite` with `samples` instances per property (per ε for continuity).
pub fn run_suite(suite: Suite, seed: u64, samples: usize, slack: f64) -> Result<PropReport> {
    let mut ctx = Ctx { seed, samples, slack, properties: Vec::new(), counterexamples: Vec::new() };
    let all = suite == Suite::All;
    if all || suite == Suite::Lemma1 {
        lemma1(&mut ctx)?;
    }
    if all || suite == Suite::Subadditivity {
        subadditivity(&mut ctx)?;
    }
    if all || suite == Suite::Soundness {
        soundness(&mut ctx)?;
    }
    if all || suite == Suite::Continuity {
        continuity(&mut ctx)?;
    }
    if all || suite == Suite::Theorem1 {
        theorem1(&mut ctx)?;
    }
    if all || suite == Suite::Symmetry {
        symmetry(&mut ctx)?;
    }
    Ok(PropReport { suite, seed, samples, slack, properties: ctx.properties, counterexamples: ctx.counterexamples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("lemma2".parse::<Suite>().is_err());
    }

    #[test]
    fn stream_seeds_differ() {
        assert_ne!(stream_seed(1, "a"), stream_seed(1, "b"));
        assert_ne!(stream_seed(1, "a"), stream_seed(2, "a"));
    }

    #[test]
    fn small_suites_pass_and_repeat() {
        for suite in [Suite::Lemma1, Suite::Subadditivity, Suite::Theorem1, Suite::Symmetry] {
            let a = run_suite(suite, 3, 10, DEFAULT_SLACK).unwrap();
            assert!(a.passed(), "{}", a.to_text());
            let b = run_suite(suite, 3, 10, DEFAULT_SLACK).unwrap();
            assert_eq!(a.to_text(), b.to_text());
        }
    }

    #[test]
    fn violations_are_recorded() {
        let mut sink = Vec::new();
        let mut t = Tally::new("demo", 1e-9, &mut sink);
        t.le(1.0, 0.5, || no_states("too big".into()));
        t.le(0.5, 1.0, || no_states(String::new()));
        let r = t.finish();
        assert_eq!((r.instances, r.violations), (2, 1));
        assert_eq!(r.worst_margin, -0.5);
        assert_eq!(sink.len(), 1);
        assert_eq!(sink[0].detail, "too big");
    }
}
