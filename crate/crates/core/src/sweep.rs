//! Parameter sweeps, figure tables, and the ordering / figure-7 scans.
//!
//! Every table is computed row-parallel and written in grid order, so the
//! output bytes depend only on the inputs.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{gqc_ghz_closed, gqc_w_closed, lower_bound_multipartite_with};
use crate::error::{domain, Error, Result};
use crate::measures::{check_q, CutProfile, MeasureKind};
use crate::partitions::{Bipartition, DEFAULT_PARTY_CAP};
use crate::roof::mixed_gqc_upper_estimate;
use crate::states::{class1, class2, four_qubit_family, ghz_state, noisy_state, w_state, NoisyStateSpec};
use crate::tensor::{fidelity_with_pure, StateVector};

/// Significant digits in every CSV number.
pub const CSV_DIGITS: usize = 12;
/// Default smoothness threshold for second differences.
pub const SMOOTHNESS_THRESHOLD: f64 = 1e-3;
pub const COLLISION_TOLERANCE: f64 = 1e-6;
pub const DISTINCT_TOLERANCE: f64 = 1e-3;

/// `%g`-style rendering with 12 significant digits and trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", CSV_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..CSV_DIGITS as i32).contains(&exp) {
        let decimals = (CSV_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

/// Quotes a field holding commas (cut labels).
fn quoted(s: &str) -> String {
    format!("\"{s}\"")
}

/// `steps` equally spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return domain(format!("grid needs at least 2 steps, got {steps}"));
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { stop } else { start + i as f64 * h }).collect())
}

/// `count` interior points `θ_i = (i+1)(π/2)/(count+1)` of `(0, π/2)`.
pub fn open_theta_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| (i + 1) as f64 * FRAC_PI_2 / (count + 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    WNoise,
    GhzNoise,
    Class1,
    Class2,
    FourQubit,
    WVsGhz,
}

impl SweepFamily {
    pub const ALL: [SweepFamily; 6] = [
        SweepFamily::WNoise,
        SweepFamily::GhzNoise,
        SweepFamily::Class1,
        SweepFamily::Class2,
        SweepFamily::FourQubit,
        SweepFamily::WVsGhz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepFamily::WNoise => "w_noise",
            SweepFamily::GhzNoise => "ghz_noise",
            SweepFamily::Class1 => "class1",
            SweepFamily::Class2 => "class2",
            SweepFamily::FourQubit => "four_qubit",
            SweepFamily::WVsGhz => "w_vs_ghz",
        }
    }

    /// Closed parameter domain.
    fn domain(self) -> (f64, f64) {
        match self {
            SweepFamily::WNoise | SweepFamily::GhzNoise => (0.0, 1.0),
            SweepFamily::Class1 | SweepFamily::Class2 | SweepFamily::FourQubit => (0.0, FRAC_PI_2),
            SweepFamily::WVsGhz => (2.0, f64::INFINITY),
        }
    }
}

impl fmt::Display for SweepFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown family {s:?}")))
    }
}

/// One-parameter pure-state families used by the ordering scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaFamily {
    Class1,
    Class2,
    FourQubit,
}

impl ThetaFamily {
    pub fn state(self, theta: f64) -> Result<StateVector> {
        match self {
            ThetaFamily::Class1 => class1(theta),
            ThetaFamily::Class2 => class2(theta),
            ThetaFamily::FourQubit => four_qubit_family(theta),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThetaFamily::Class1 => "class1",
            ThetaFamily::Class2 => "class2",
            ThetaFamily::FourQubit => "four_qubit",
        }
    }
}

impl FromStr for ThetaFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "class1" => Ok(ThetaFamily::Class1),
            "class2" => Ok(ThetaFamily::Class2),
            "four_qubit" => Ok(ThetaFamily::FourQubit),
            other => Err(Error::Format(format!("unknown theta family {other:?}"))),
        }
    }
}

/// Settings for the optional roof upper estimate column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoofSettings {
    pub ensemble_size: usize,
    pub iterations: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub start: f64,
    pub stop: f64,
    /// Ignored for `w_vs_ghz`, whose grid is the integer range `start..=stop`.
    pub steps: usize,
    pub q_list: Vec<f64>,
    pub roof: Option<RoofSettings>,
    pub max_parties: usize,
}

impl SweepSpec {
    pub fn new(family: SweepFamily, start: f64, stop: f64, steps: usize, q_list: Vec<f64>) -> Self {
        SweepSpec { family, start, stop, steps, q_list, roof: None, max_parties: DEFAULT_PARTY_CAP }
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        let (lo, hi) = self.family.domain();
        if !(self.start >= lo && self.stop <= hi && self.start <= self.stop) {
            return domain(format!(
                "{} grid [{}, {}] outside its domain [{lo}, {hi}]",
                self.family, self.start, self.stop
            ));
        }
        if self.q_list.is_empty() {
            return domain("q list is empty");
        }
        for &q in &self.q_list {
            check_q(q)?;
        }
        if self.family == SweepFamily::WVsGhz {
            if self.start.fract() != 0.0 || self.stop.fract() != 0.0 || self.stop - self.start < 1.0 {
                return domain("w_vs_ghz needs an integer range with at least 2 values");
            }
            return Ok((self.start as usize..=self.stop as usize).map(|n| n as f64).collect());
        }
        linear_grid(self.start, self.stop, self.steps)
    }
}

/// One sweep row; `exact_if_pure` and `roof_upper` are empty when not computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: SweepFamily,
    pub param: f64,
    pub q: f64,
    pub fidelity: f64,
    pub s1: f64,
    pub m: usize,
    pub lambda: f64,
    pub bound: f64,
    pub exact_if_pure: Option<f64>,
    pub roof_upper: Option<f64>,
}

pub const SWEEP_HEADER: [&str; 10] =
    ["family", "param", "q", "fidelity", "s1", "m", "lambda", "bound", "exact_if_pure", "roof_upper"];

impl SweepRow {
    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
        vec![
            self.family.to_string(),
            format_sig(self.param),
            format_sig(self.q),
            format_sig(self.fidelity),
            format_sig(self.s1),
            self.m.to_string(),
            format_sig(self.lambda),
            format_sig(self.bound),
            opt(self.exact_if_pure),
            opt(self.roof_upper),
        ]
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = csv_line(&SWEEP_HEADER.map(String::from));
    for row in rows {
        out.push_str(&csv_line(&row.fields()));
    }
    out
}

fn sweep_point(spec: &SweepSpec, param: f64) -> Result<Vec<SweepRow>> {
    let (witness, rho) = match spec.family {
        SweepFamily::WNoise | SweepFamily::GhzNoise => {
            let base = if spec.family == SweepFamily::WNoise { w_state(3)? } else { ghz_state(3)? };
            let rho = noisy_state(&NoisyStateSpec { base: base.clone(), visibility: param })?;
            (base, Some(rho))
        }
        SweepFamily::Class1 => (class1(param)?, None),
        SweepFamily::Class2 => (class2(param)?, None),
        SweepFamily::FourQubit => (four_qubit_family(param)?, None),
        SweepFamily::WVsGhz => (w_state(param as usize)?, None),
    };
    let profile = CutProfile::with_cap(&witness, spec.max_parties)?;
    let fidelity = match &rho {
        Some(rho) => fidelity_with_pure(rho, &witness)?,
        None => 1.0,
    };
    let pure = rho.is_none() || param == 1.0;
    spec.q_list
        .iter()
        .map(|&q| {
            let cert = lower_bound_multipartite_with(fidelity, &profile, q)?;
            let exact_if_pure = if pure { Some(profile.gqc(q)?.aggregate) } else { None };
            let roof_upper = match (&rho, spec.roof) {
                (Some(rho), Some(r)) => {
                    Some(mixed_gqc_upper_estimate(rho, q, r.ensemble_size, r.iterations, r.seed)?.upper)
                }
                (None, Some(_)) => exact_if_pure,
                _ => None,
            };
            Ok(SweepRow {
                family: spec.family,
                param,
                q,
                fidelity,
                s1: cert.s1,
                m: cert.m,
                lambda: cert.lambda,
                bound: cert.value,
                exact_if_pure,
                roof_upper,
            })
        })
        .collect()
}

/// Rows in grid-major, q-minor order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let grid = spec.grid()?;
    let nested: Vec<Vec<SweepRow>> = grid.par_iter().map(|&p| sweep_point(spec, p)).collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// A rendered figure table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = csv_line(&self.header);
        for row in &self.rows {
            out.push_str(&csv_line(row));
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

fn sweep_table(rows: &[SweepRow]) -> Table {
    Table {
        header: SWEEP_HEADER.iter().map(|s| s.to_string()).collect(),
        rows: rows.iter().map(SweepRow::fields).collect(),
    }
}

/// Overrides for the built-in figure defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub q_list: Option<Vec<f64>>,
    pub grid: Option<usize>,
}

pub const FIGURE_IDS: [u8; 6] = [1, 2, 3, 4, 5, 7];

/// Figure 1: noisy W bound over `p = 0, 0.01, …, 1` at `q = 2`.
pub fn figure1(opts: &FigureOptions) -> Result<Vec<SweepRow>> {
    let q_list = opts.q_list.clone().unwrap_or_else(|| vec![2.0]);
    run_sweep(&SweepSpec::new(SweepFamily::WNoise, 0.0, 1.0, opts.grid.unwrap_or(101), q_list))
}

/// Figure 2: noisy GHZ bound over `c = 0, 0.01, …, 1` and `q = 2, 2.5, …, 12`.
pub fn figure2(opts: &FigureOptions) -> Result<Vec<SweepRow>> {
    let q_list = opts.q_list.clone().unwrap_or_else(|| (0..=20).map(|k| 2.0 + 0.5 * k as f64).collect());
    run_sweep(&SweepSpec::new(SweepFamily::GhzNoise, 0.0, 1.0, opts.grid.unwrap_or(101), q_list))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    pub q: f64,
    pub gqc_w: f64,
    pub gqc_ghz: f64,
    pub ratio: f64,
}

/// Figure 3: closed-form `GqC(W_n)`, `GqC(GHZ_n)` and their ratio for `n = 5..=21`.
pub fn figure3(opts: &FigureOptions) -> Result<Vec<RatioRow>> {
    let q_list = opts.q_list.clone().unwrap_or_else(|| vec![3.0]);
    let last = 4 + opts.grid.unwrap_or(17);
    let mut rows = Vec::new();
    for n in 5..=last {
        for &q in &q_list {
            let (w, g) = (gqc_w_closed(n, q)?, gqc_ghz_closed(n, q)?);
            rows.push(RatioRow { n, q, gqc_w: w, gqc_ghz: g, ratio: w / g });
        }
    }
    Ok(rows)
}

/// Per-θ values of GqC, GMC and GGM, with the GMC argmin and GGM argmax cuts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint {
    pub theta: f64,
    pub gqc: f64,
    pub gmc: f64,
    pub ggm: f64,
    pub gmc_cut: Bipartition,
    pub ggm_cut: Bipartition,
}

pub fn theta_scan(family: ThetaFamily, q: f64, grid: &[f64]) -> Result<Vec<ThetaPoint>> {
    check_q(q)?;
    grid.par_iter()
        .map(|&theta| {
            let profile = CutProfile::new(&family.state(theta)?)?;
            let (gmc, ggm) = (profile.gmc(), profile.ggm());
            Ok(ThetaPoint {
                theta,
                gqc: profile.gqc(q)?.aggregate,
                gmc: gmc.aggregate,
                ggm: ggm.aggregate,
                gmc_cut: gmc.extremal_cut.expect("gmc reports its cut"),
                ggm_cut: ggm.extremal_cut.expect("ggm reports its cut"),
            })
        })
        .collect()
}

/// Figures 4 and 5: Class I and Class II on a shared θ grid at `q = 4`.
/// Figure 4 pairs GqC with GMC, figure 5 with GGM.
pub fn figure_classes(id: u8, opts: &FigureOptions) -> Result<Table> {
    let other = match id {
        4 => MeasureKind::Gmc,
        5 => MeasureKind::Ggm,
        _ => return domain(format!("class figure id must be 4 or 5, got {id}")),
    };
    let q = single_q(opts, 4.0)?;
    let grid = open_theta_grid(opts.grid.unwrap_or(200));
    let a = theta_scan(ThetaFamily::Class1, q, &grid)?;
    let b = theta_scan(ThetaFamily::Class2, q, &grid)?;
    let pick = |p: &ThetaPoint| if other == MeasureKind::Gmc { p.gmc } else { p.ggm };
    let tag = if other == MeasureKind::Gmc { "gmc" } else { "ggm" };
    Ok(Table {
        header: ["theta", "q", "class1_gqc", &format!("class1_{tag}"), "class2_gqc", &format!("class2_{tag}")]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: a
            .iter()
            .zip(&b)
            .map(|(x, y)| {
                vec![format_sig(x.theta), format_sig(q), format_sig(x.gqc), format_sig(pick(x)), format_sig(y.gqc), format_sig(pick(y))]
            })
            .collect(),
    })
}

fn single_q(opts: &FigureOptions, default: f64) -> Result<f64> {
    match opts.q_list.as_deref() {
        None => Ok(default),
        Some([q]) => Ok(*q),
        Some(other) => domain(format!("this figure takes a single q, got {} values", other.len())),
    }
}

/// Figure 7: the four-qubit family on a 400-point θ grid at `q = 3`.
pub fn figure7(opts: &FigureOptions) -> Result<Vec<ThetaPoint>> {
    let q = single_q(opts, 3.0)?;
    theta_scan(ThetaFamily::FourQubit, q, &open_theta_grid(opts.grid.unwrap_or(400)))
}

fn theta_table(points: &[ThetaPoint], q: f64) -> Table {
    Table {
        header: ["theta", "q", "gqc", "gmc", "ggm", "gmc_argmin", "ggm_argmax"].iter().map(|s| s.to_string()).collect(),
        rows: points
            .iter()
            .map(|p| {
                vec![
                    format_sig(p.theta),
                    format_sig(q),
                    format_sig(p.gqc),
                    format_sig(p.gmc),
                    format_sig(p.ggm),
                    quoted(&p.gmc_cut.to_string()),
                    quoted(&p.ggm_cut.to_string()),
                ]
            })
            .collect(),
    }
}

/// Renders any figure as a table.
pub fn figure_table(id: u8, opts: &FigureOptions) -> Result<Table> {
    match id {
        1 => Ok(sweep_table(&figure1(opts)?)),
        2 => Ok(sweep_table(&figure2(opts)?)),
        3 => Ok(Table {
            header: ["n", "q", "gqc_w", "gqc_ghz", "ratio"].iter().map(|s| s.to_string()).collect(),
            rows: figure3(opts)?
                .iter()
                .map(|r| {
                    vec![r.n.to_string(), format_sig(r.q), format_sig(r.gqc_w), format_sig(r.gqc_ghz), format_sig(r.ratio)]
                })
                .collect(),
        }),
        4 | 5 => figure_classes(id, opts),
        7 => Ok(theta_table(&figure7(opts)?, single_q(opts, 3.0)?)),
        other => domain(format!("unknown figure id {other}; expected one of 1, 2, 3, 4, 5, 7")),
    }
}

/// `Δ²_i = v[i+1] - 2 v[i] + v[i-1]` for interior points.
pub fn second_differences(values: &[f64]) -> Vec<f64> {
    values.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect()
}

/// Indices `i` of second differences that change sign against `i-1` with
/// either side larger than `threshold` in magnitude.
pub fn kinks(values: &[f64], threshold: f64) -> Vec<usize> {
    let d2 = second_differences(values);
    (1..d2.len())
        .filter(|&i| d2[i] * d2[i - 1] < 0.0 && d2[i].abs().max(d2[i - 1].abs()) > threshold)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgminSwitch {
    pub index: usize,
    pub theta: f64,
    pub from: Bipartition,
    pub to: Bipartition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig7Analysis {
    pub grid: usize,
    pub q: f64,
    /// Grid steps where the GMC minimizing cut changes.
    pub gmc_argmin_switches: Vec<ArgminSwitch>,
    /// Second-difference sign changes of GqC above the threshold.
    pub gqc_kinks: Vec<usize>,
    pub gqc_max_abs_second_difference: f64,
    pub gmc_kinks: Vec<usize>,
    /// First pair `(i, j)`, `i < j`, with GGM within `COLLISION_TOLERANCE`
    /// and GqC further apart than `DISTINCT_TOLERANCE`.
    pub ggm_collision: Option<(usize, usize)>,
}

impl Fig7Analysis {
    /// All three figure-7 claims hold on this grid.
    pub fn passes(&self) -> bool {
        !self.gmc_argmin_switches.is_empty() && self.gqc_kinks.is_empty() && self.ggm_collision.is_some()
    }
}

pub fn analyze_theta_points(points: &[ThetaPoint], q: f64, threshold: f64) -> Fig7Analysis {
    let gqc: Vec<f64> = points.iter().map(|p| p.gqc).collect();
    let gmc: Vec<f64> = points.iter().map(|p| p.gmc).collect();
    let gmc_argmin_switches = points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].gmc_cut != w[1].gmc_cut)
        .map(|(i, w)| ArgminSwitch {
            index: i + 1,
            theta: w[1].theta,
            from: w[0].gmc_cut.clone(),
            to: w[1].gmc_cut.clone(),
        })
        .collect();
    let mut ggm_collision = None;
    'outer: for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i].ggm - points[j].ggm).abs() < COLLISION_TOLERANCE
                && (points[i].gqc - points[j].gqc).abs() > DISTINCT_TOLERANCE
            {
                ggm_collision = Some((i, j));
                break 'outer;
            }
        }
    }
    Fig7Analysis {
        grid: points.len(),
        q,
        gmc_argmin_switches,
        gqc_kinks: kinks(&gqc, threshold),
        gqc_max_abs_second_difference: second_differences(&gqc).iter().fold(0.0, |a, d| a.max(d.abs())),
        gmc_kinks: kinks(&gmc, threshold),
        ggm_collision,
    }
}

pub fn analyze_figure7(opts: &FigureOptions) -> Result<Fig7Analysis> {
    let q = single_q(opts, 3.0)?;
    Ok(analyze_theta_points(&figure7(opts)?, q, SMOOTHNESS_THRESHOLD))
}

/// A grid pair whose GqC order disagrees with the comparison measure's order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReversalPair {
    pub theta_a: f64,
    pub theta_b: f64,
    pub gqc_a: f64,
    pub gqc_b: f64,
    pub other_a: f64,
    pub other_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingScan {
    pub family_a: ThetaFamily,
    pub family_b: ThetaFamily,
    pub q: f64,
    pub grid: usize,
    pub measure: MeasureKind,
    pub reversals: Vec<ReversalPair>,
}

impl OrderingScan {
    pub fn to_csv(&self) -> String {
        let mut out = csv_line(
            &["measure", "theta_a", "theta_b", "gqc_a", "gqc_b", "other_a", "other_b"].map(String::from),
        );
        for r in &self.reversals {
            out.push_str(&csv_line(&[
                self.measure.to_string(),
                format_sig(r.theta_a),
                format_sig(r.theta_b),
                format_sig(r.gqc_a),
                format_sig(r.gqc_b),
                format_sig(r.other_a),
                format_sig(r.other_b),
            ]));
        }
        out
    }
}

/// Pairs `(θ_a, θ_b)` from the two families' grids where GqC ranks the
/// states one way and `measure` the other. Differences within `tolerance`
/// count as ties and never reverse.
pub fn ordering_scan(
    family_a: ThetaFamily,
    family_b: ThetaFamily,
    q: f64,
    grid: usize,
    measure: MeasureKind,
    tolerance: f64,
) -> Result<OrderingScan> {
    if grid < 2 {
        return domain(format!("grid needs at least 2 points, got {grid}"));
    }
    let thetas = open_theta_grid(grid);
    let a = theta_scan(family_a, q, &thetas)?;
    let b = theta_scan(family_b, q, &thetas)?;
    let other = |p: &ThetaPoint| match measure {
        MeasureKind::Gmc => p.gmc,
        MeasureKind::Ggm => p.ggm,
        MeasureKind::GqC | MeasureKind::Cq => p.gqc,
    };
    let mut reversals = Vec::new();
    for x in &a {
        for y in &b {
            let (dg, dm) = (x.gqc - y.gqc, other(x) - other(y));
            if dg.abs() > tolerance && dm.abs() > tolerance && (dg > 0.0) != (dm > 0.0) {
                reversals.push(ReversalPair {
                    theta_a: x.theta,
                    theta_b: y.theta,
                    gqc_a: x.gqc,
                    gqc_b: y.gqc,
                    other_a: other(x),
                    other_b: other(y),
                });
            }
        }
    }
    Ok(OrderingScan { family_a, family_b, q, grid, measure, reversals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_sig_examples() {
        assert_eq!(format_sig(2.0), "2");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(4.0 / 9.0), "0.444444444444");
        assert_eq!(format_sig(0.25), "0.25");
        assert_eq!(format_sig(12.5), "12.5");
        assert_eq!(format_sig(1.0 / 3.0 * 1e-7), "3.33333333333e-8");
        assert_eq!(format_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_sig(0.99999999999999), "1");
        assert_eq!(format_sig(-1.5e-3), "-0.0015");
        assert_eq!(format_sig(1.5e-4), "0.00015");
        assert_eq!(format_sig(1.5e-5), "1.5e-5");
        assert_eq!(format_sig(f64::NAN), "nan");
    }

    #[test]
    fn grids() {
        let g = linear_grid(0.0, 1.0, 101).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[100], 1.0);
        assert!((g[61] - 0.61).abs() < 1e-15);
        assert!(linear_grid(0.0, 1.0, 1).is_err());
        let t = open_theta_grid(3);
        assert!((t[1] - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn sweep_validates_domain() {
        let bad = SweepSpec::new(SweepFamily::WNoise, 0.0, 1.5, 10, vec![2.0]);
        assert!(run_sweep(&bad).is_err());
        let bad_q = SweepSpec::new(SweepFamily::Class1, 0.1, 1.0, 10, vec![1.0]);
        assert!(run_sweep(&bad_q).is_err());
        let ns = SweepSpec::new(SweepFamily::WVsGhz, 3.0, 5.0, 0, vec![2.0]);
        assert_eq!(ns.grid().unwrap(), vec![3.0, 4.0, 5.0]);
        assert_eq!("four_qubit".parse::<SweepFamily>().unwrap(), SweepFamily::FourQubit);
        assert!("nope".parse::<SweepFamily>().is_err());
    }

    #[test]
    fn figure1_values() {
        let rows = figure1(&FigureOptions::default()).unwrap();
        assert_eq!(rows.len(), 101);
        for r in &rows {
            let expected = (3.0 * (7.0 * r.param + 1.0) / 32.0).max(0.5) - 0.5;
            assert!((r.bound - expected).abs() < 1e-12);
        }
        assert!((rows[100].bound - 0.25).abs() < 1e-12);
        assert!(rows[61].bound == 0.0 && rows[62].bound > 0.0);
        assert!(rows[100].exact_if_pure.is_some() && rows[50].exact_if_pure.is_none());
    }

    #[test]
    fn figure3_ratio_increases() {
        let rows = figure3(&FigureOptions::default()).unwrap();
        assert_eq!(rows.len(), 17);
        assert!(rows.windows(2).all(|w| w[1].ratio > w[0].ratio));
    }

    #[test]
    fn sweep_csv_layout() {
        let spec = SweepSpec::new(SweepFamily::GhzNoise, 0.0, 1.0, 3, vec![2.0, 3.0]);
        let csv = sweep_csv(&run_sweep(&spec).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "family,param,q,fidelity,s1,m,lambda,bound,exact_if_pure,roof_upper");
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[5], "ghz_noise,1,2,1,0.5,2,1,0.5,0.5,");
    }

    #[test]
    fn kink_detection() {
        let v: Vec<f64> = (0..50).map(|i| (i as f64 - 25.0).abs() * 0.1).collect();
        assert_eq!(kinks(&v, 1e-3), Vec::<usize>::new());
        let zigzag = [0.0, 1.0, 0.0, 1.0, 0.0];
        assert_eq!(kinks(&zigzag, 1e-3), vec![1, 2]);
        let smooth: Vec<f64> = (0..100).map(|i| (i as f64 * 0.01).sin()).collect();
        assert!(kinks(&smooth, 1e-3).is_empty());
    }

    #[test]
    fn self_ordering_scan_is_empty() {
        let scan = ordering_scan(ThetaFamily::Class2, ThetaFamily::Class2, 4.0, 20, MeasureKind::GqC, 1e-12).unwrap();
        assert!(scan.reversals.is_empty());
    }
}
