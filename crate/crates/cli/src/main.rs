use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gqc_core::bounds::{lower_bound_bipartite, lower_bound_multipartite};
use gqc_core::io::{parse_density_or_state, parse_state};
use gqc_core::propcheck::{run_suite, Suite};
use gqc_core::roof::mixed_gqc_upper_estimate;
use gqc_core::states::{class1, class2, four_qubit_family, ghz_state, haar_random_pure, product_from_bits, w_state};
use gqc_core::sweep::{
    figure_table, ordering_scan, run_sweep, sweep_csv, FigureOptions, RoofSettings, SweepFamily, SweepSpec,
    ThetaFamily,
};
use gqc_core::{
    noisy_state, Bipartition, CutProfile, DensityMatrix, Error, MeasureKind, MeasureReport, NoisyStateSpec,
    StateVector,
};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "gqc", version, about = "Geometric mean of q-concurrence and related entanglement measures")]
struct Cli {
    /// Comma-separated q values (each >= 2).
    #[arg(long, global = true, value_delimiter = ',')]
    q: Option<Vec<f64>>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 14)]
    max_parties: usize,

    /// Slack for property checks and tie tolerance for ordering scans.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// GqC, GMC and GGM of a pure state with the per-cut table.
    Measure {
        #[command(flatten)]
        state: StateSource,
        /// Print JSON reports instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Fidelity-based lower bound (and optional roof upper estimate) for a mixed state.
    Bound(BoundArgs),
    /// Emit the CSV table behind a figure (1, 2, 3, 4, 5 or 7).
    Figure {
        id: u8,
        /// Override the default grid size.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Parameter sweep over a state family.
    Sweep(SweepArgs),
    /// Run a randomized property suite.
    Propcheck {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
        /// Instances per property; defaults to the suite's own count.
        #[arg(long)]
        samples: Option<usize>,
        /// Where to write counterexamples when a property fails.
        #[arg(long)]
        counterexamples: Option<PathBuf>,
    },
    /// Pairs of states whose GqC order disagrees with GMC or GGM.
    OrderingScan {
        #[arg(long, default_value = "class1")]
        class_a: FamilyArg,
        #[arg(long, default_value = "class2")]
        class_b: FamilyArg,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Comparison::Both)]
        measure: Comparison,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct StateSource {
    #[arg(long, value_name = "N")]
    ghz: Option<usize>,
    #[arg(long, value_name = "N")]
    w: Option<usize>,
    /// Qubit basis product such as 010.
    #[arg(long, value_name = "BITS")]
    product: Option<String>,
    #[arg(long, value_name = "THETA")]
    class1: Option<f64>,
    #[arg(long, value_name = "THETA")]
    class2: Option<f64>,
    #[arg(long, value_name = "THETA")]
    four_qubit: Option<f64>,
    /// Seeded Haar-random N-qubit state.
    #[arg(long, value_name = "N")]
    haar: Option<usize>,
    /// JSON state file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

impl StateSource {
    fn load(&self, seed: u64) -> gqc_core::Result<(String, StateVector)> {
        if let Some(n) = self.ghz {
            return Ok((format!("ghz_{n}"), ghz_state(n)?));
        }
        if let Some(n) = self.w {
            return Ok((format!("w_{n}"), w_state(n)?));
        }
        if let Some(bits) = &self.product {
            return Ok((format!("product_{bits}"), product_from_bits(bits)?));
        }
        if let Some(t) = self.class1 {
            return Ok((format!("class1({t})"), class1(t)?));
        }
        if let Some(t) = self.class2 {
            return Ok((format!("class2({t})"), class2(t)?));
        }
        if let Some(t) = self.four_qubit {
            return Ok((format!("four_qubit({t})"), four_qubit_family(t)?));
        }
        if let Some(n) = self.haar {
            return Ok((format!("haar_{n}(seed {seed})"), haar_random_pure(&vec![2; n], seed)?));
        }
        let path = self.file.as_ref().expect("clap requires one source");
        Ok((path.display().to_string(), parse_state(path)?))
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Density matrix or state file; a state file is used as its projector.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["ghz_noise", "w_noise"])]
    rho: Option<PathBuf>,
    /// Noisy 3-qubit GHZ state at this visibility.
    #[arg(long, value_name = "C")]
    ghz_noise: Option<f64>,
    /// Noisy 3-qubit W state at this visibility.
    #[arg(long, value_name = "P", conflicts_with = "ghz_noise")]
    w_noise: Option<f64>,
    /// Witness state file; defaults to the noise family's base state.
    #[arg(long, value_name = "PATH")]
    witness: Option<PathBuf>,
    /// Bound a single bipartition, e.g. "0|1,2".
    #[arg(long)]
    cut: Option<String>,
    /// Also run the roof upper estimate with this many ensemble members.
    #[arg(long)]
    roof_ensemble: Option<usize>,
    #[arg(long, default_value_t = 200)]
    roof_iterations: usize,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    family: FamilyName,
    #[arg(long)]
    start: f64,
    #[arg(long)]
    stop: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long)]
    roof_ensemble: Option<usize>,
    #[arg(long, default_value_t = 100)]
    roof_iterations: usize,
}

#[derive(Debug, Clone)]
struct FamilyName(SweepFamily);

impl std::str::FromStr for FamilyName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(FamilyName).map_err(|e: Error| e.to_string())
    }
}

#[derive(Debug, Clone)]
struct FamilyArg(ThetaFamily);

impl std::str::FromStr for FamilyArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(FamilyArg).map_err(|e: Error| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Comparison {
    Gmc,
    Ggm,
    Both,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Core(Error),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type CliResult<T> = Result<T, Failure>;

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn q_list(cli: &Cli, default: &[f64]) -> Vec<f64> {
    cli.q.clone().unwrap_or_else(|| default.to_vec())
}

fn fmt(x: f64) -> String {
    gqc_core::sweep::format_sig(x)
}

fn cmd_measure(cli: &Cli, state: &StateSource, json: bool) -> CliResult<()> {
    let (label, psi) = state.load(cli.seed)?;
    let profile = CutProfile::with_cap(&psi, cli.max_parties)?;
    let mut reports: Vec<MeasureReport> = q_list(cli, &[2.0]).iter().map(|&q| profile.gqc(q)).collect::<Result<_, _>>()?;
    reports.push(profile.gmc());
    reports.push(profile.ggm());

    if json {
        let text = serde_json::to_string_pretty(&reports).map_err(Error::from)? + "\n";
        return emit(cli.out.as_deref(), &text);
    }
    let mut text = format!("state {label} local_dims {:?}\n", psi.local_dims());
    for r in &reports {
        let q = r.q.map(|q| format!(" q={}", fmt(q))).unwrap_or_default();
        let cut = r.extremal_cut.as_ref().map(|c| format!(" at {c}")).unwrap_or_default();
        text.push_str(&format!("{}{q}: {}{cut}\n", r.measure, fmt(r.aggregate)));
    }
    text.push_str("measure,q,cut,value,aggregate\n");
    for r in &reports {
        for row in r.csv_rows() {
            text.push_str(&format!("{},{},\"{}\",{},{}\n", row[0], row[1], row[2], row[3], row[4]));
        }
    }
    emit(cli.out.as_deref(), &text)
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> CliResult<()> {
    let (rho, default_witness): (DensityMatrix, Option<StateVector>) = match (&args.rho, args.ghz_noise, args.w_noise) {
        (Some(path), _, _) => (parse_density_or_state(path)?, None),
        (None, Some(c), _) => {
            let base = ghz_state(3)?;
            (noisy_state(&NoisyStateSpec { base: base.clone(), visibility: c })?, Some(base))
        }
        (None, None, Some(p)) => {
            let base = w_state(3)?;
            (noisy_state(&NoisyStateSpec { base: base.clone(), visibility: p })?, Some(base))
        }
        _ => return Err(Error::Format("one of --rho, --ghz-noise, --w-noise is required".into()).into()),
    };
    let witness = match (&args.witness, default_witness) {
        (Some(path), _) => parse_state(path)?,
        (None, Some(w)) => w,
        (None, None) => return Err(Error::Format("--witness is required with --rho".into()).into()),
    };
    if witness.parties() > cli.max_parties {
        return Err(Error::ResourceCap { n: witness.parties(), cap: cli.max_parties }.into());
    }
    let cut: Option<Bipartition> = args.cut.as_deref().map(str::parse).transpose()?;

    let mut entries = Vec::new();
    for q in q_list(cli, &[2.0]) {
        let cert = match &cut {
            Some(cut) => lower_bound_bipartite(&rho, &witness, cut, q)?,
            None => lower_bound_multipartite(&rho, &witness, q)?,
        };
        let roof = args
            .roof_ensemble
            .map(|k| mixed_gqc_upper_estimate(&rho, q, k, args.roof_iterations, cli.seed))
            .transpose()?;
        entries.push(serde_json::json!({ "certificate": cert, "roof": roof }));
    }
    let text = serde_json::to_string_pretty(&entries).map_err(Error::from)? + "\n";
    emit(cli.out.as_deref(), &text)
}

fn cmd_figure(cli: &Cli, id: u8, grid: Option<usize>) -> CliResult<()> {
    let table = figure_table(id, &FigureOptions { q_list: cli.q.clone(), grid })?;
    emit(cli.out.as_deref(), &table.to_csv())
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> CliResult<()> {
    let mut spec = SweepSpec::new(args.family.0, args.start, args.stop, args.steps, q_list(cli, &[2.0]));
    spec.max_parties = cli.max_parties;
    spec.roof = args.roof_ensemble.map(|k| RoofSettings {
        ensemble_size: k,
        iterations: args.roof_iterations,
        seed: cli.seed,
    });
    emit(cli.out.as_deref(), &sweep_csv(&run_sweep(&spec)?))
}

fn cmd_propcheck(cli: &Cli, suite: &str, samples: Option<usize>, counterexamples: Option<&Path>) -> CliResult<()> {
    let suite: Suite = suite.parse()?;
    let samples = samples.unwrap_or_else(|| suite.default_samples());
    let report = run_suite(suite, cli.seed, samples, cli.tolerance)?;
    emit(cli.out.as_deref(), &report.to_text())?;
    if report.passed() {
        return Ok(());
    }
    let path = match counterexamples {
        Some(p) => p.to_path_buf(),
        None => PathBuf::from(format!("counterexamples-{}-{}.json", suite, cli.seed)),
    };
    fs::write(&path, report.counterexamples_json() + "\n")?;
    Err(Failure::Violation(format!(
        "{} violation(s); counterexamples written to {}",
        report.total_violations(),
        path.display()
    )))
}

fn cmd_ordering_scan(cli: &Cli, a: ThetaFamily, b: ThetaFamily, grid: usize, which: Comparison) -> CliResult<()> {
    let q = match q_list(cli, &[4.0]).as_slice() {
        [q] => *q,
        other => return Err(Error::Format(format!("ordering-scan takes one q, got {}", other.len())).into()),
    };
    let measures = match which {
        Comparison::Gmc => vec![MeasureKind::Gmc],
        Comparison::Ggm => vec![MeasureKind::Ggm],
        Comparison::Both => vec![MeasureKind::Gmc, MeasureKind::Ggm],
    };
    let mut text = String::new();
    for (k, m) in measures.into_iter().enumerate() {
        let scan = ordering_scan(a, b, q, grid, m, cli.tolerance)?;
        log::info!("{m}: {} reversal pairs", scan.reversals.len());
        let csv = scan.to_csv();
        // one header for the whole file
        text.push_str(if k == 0 { &csv } else { csv.split_once('\n').map_or("", |(_, rest)| rest) });
    }
    emit(cli.out.as_deref(), &text)
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Measure { state, json } => cmd_measure(cli, state, *json),
        Command::Bound(args) => cmd_bound(cli, args),
        Command::Figure { id, grid } => cmd_figure(cli, *id, *grid),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Propcheck { suite, samples, counterexamples } => {
            cmd_propcheck(cli, suite, *samples, counterexamples.as_deref())
        }
        Command::OrderingScan { class_a, class_b, grid, measure } => {
            cmd_ordering_scan(cli, class_a.0, class_b.0, *grid, *measure)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("gqc: property violation: {msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
        Err(Failure::Core(e)) => {
            eprintln!("gqc: {e}");
            ExitCode::from(match e {
                Error::ResourceCap { .. } => EXIT_CAP,
                _ => EXIT_INPUT,
            })
        }
    }
}
