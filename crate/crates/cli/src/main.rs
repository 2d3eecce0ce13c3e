//! `mfnls`: run the experiment families from presets or TOML configs.
//!
//! Exit status: 0 pass, 1 verdict failed, 2 invalid input, 3 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mfnls_core::experiments::{self, ExperimentKind, ExperimentSpec, Outcome};
use mfnls_core::io;
use mfnls_core::solver::evolve;
use mfnls_core::Error;
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "mfnls",
    version,
    about = "Mixed fractional NLS experiment harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conservation and scaling runs of the full equation.
    Simulate(RunArgs),
    /// Projection, Bessel and oscillatory kernels.
    Kernel(RunArgs),
    /// Bernstein bounds and dyadic multiplier equivalence.
    Bernstein(RunArgs),
    /// Frequency-localized dispersive decay.
    Decay(RunArgs),
    /// Strichartz quotients.
    Strichartz(RunArgs),
    /// Gagliardo-Nirenberg and embedding quotients.
    Gn(RunArgs),
    /// Continuity in the dispersion parameters.
    Continuity(RunArgs),
    /// Long-time decoherence of nearby flows.
    Decoherence(RunArgs),
    /// Focusing runs on each global-existence branch.
    Thresholds(RunArgs),
    /// Wave-operator drift probe.
    Scattering(RunArgs),
    /// Run many configs or presets on a bounded worker pool.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config; keys override the chosen preset.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Preset name (see --list).
    #[arg(long, short, conflicts_with = "config")]
    preset: Option<String>,
    /// Output directory for outcome.json and run tables.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Override the ensemble seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also re-run at doubled resolution and halved step; the verdict needs both.
    #[arg(long)]
    gate: bool,
    /// Write the initial and final fields of one solver run as snapshots.
    #[arg(long)]
    snapshot: bool,
    /// Print the full outcome as JSON.
    #[arg(long)]
    json: bool,
    /// List the presets of this family and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Config files, one job each.
    configs: Vec<PathBuf>,
    /// Preset names, one job each.
    #[arg(long, value_delimiter = ',')]
    presets: Vec<String>,
    /// Every preset in the catalogue.
    #[arg(long)]
    all: bool,
    /// Root directory; each job writes to `<out>/<name>/`.
    #[arg(long, short)]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, short, default_value_t = 2)]
    jobs: usize,
}

fn family(cmd: &Command) -> &'static [ExperimentKind] {
    use ExperimentKind as K;
    match cmd {
        Command::Simulate(_) => &[K::Conservation, K::Scaling],
        Command::Kernel(_) => &[K::Kernel, K::Bessel, K::OscillatoryKernel],
        Command::Bernstein(_) => &[K::Bernstein],
        Command::Decay(_) => &[K::Decay],
        Command::Strichartz(_) => &[K::Strichartz],
        Command::Gn(_) => &[K::Gn, K::Embedding],
        Command::Continuity(_) => &[K::Continuity],
        Command::Decoherence(_) => &[K::Decoherence],
        Command::Thresholds(_) => &[K::Thresholds],
        Command::Scattering(_) => &[K::Scattering],
        Command::Sweep(_) => &[],
    }
}

enum Failure {
    Verdict,
    Input(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verdict => 1,
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn load(
    args: &RunArgs,
    kinds: &[ExperimentKind],
) -> Result<(ExperimentSpec, Option<PathBuf>), Failure> {
    let (mut spec, out) = if let Some(path) = &args.config {
        let c = io::parse_config(path)?;
        (c.spec, c.output)
    } else if let Some(name) = &args.preset {
        let spec = experiments::preset(name)
            .ok_or_else(|| Failure::Input(format!("unknown preset '{name}'")))?;
        (spec, None)
    } else {
        (experiments::presets_of(kinds[0]).remove(0), None)
    };
    if !kinds.contains(&spec.kind) {
        return Err(Failure::Input(format!(
            "experiment kind {:?} does not belong to this subcommand",
            spec.kind
        )));
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    Ok((spec, args.out.clone().or(out)))
}

fn execute(spec: &ExperimentSpec, out: Option<&Path>, gate: bool) -> Result<Outcome, Failure> {
    let mut outcome = experiments::run(spec)?;
    if gate {
        let g = experiments::resolution_gate(spec, &outcome)?;
        println!(
            "{}: resolution gate {} (headline {:.6e} -> {:.6e}, change {:.2}%)",
            spec.name,
            if g.passed { "ok" } else { "FAILED" },
            g.base,
            g.refined,
            100.0 * g.change
        );
        outcome.passed &= g.passed;
    }
    if let Some(dir) = out {
        io::write_outcome(spec, &outcome, dir)?;
    }
    Ok(outcome)
}

fn snapshots(spec: &ExperimentSpec, dir: &Path) -> Result<(), Failure> {
    let u0 = experiments::initial_datum(spec)?;
    let (u, rec) = evolve(&u0, &spec.params, &spec.solver)?;
    std::fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    io::write_snapshot(&u0, 0.0, dir.join("u0.bin"))?;
    io::write_snapshot(&u, rec.final_time(), dir.join("u_final.bin"))?;
    Ok(())
}

fn summary(o: &Outcome) -> String {
    format!(
        "{}: {} ({:?}, headline {:.6e})",
        o.name,
        if o.passed { "PASS" } else { "FAIL" },
        o.kind,
        o.headline
    )
}

fn run_family(args: &RunArgs, kinds: &[ExperimentKind]) -> Result<(), Failure> {
    if args.list {
        for s in experiments::presets()
            .iter()
            .filter(|s| kinds.contains(&s.kind))
        {
            println!("{}", s.name);
        }
        return Ok(());
    }
    let (spec, out) = load(args, kinds)?;
    let outcome = execute(&spec, out.as_deref(), args.gate)?;
    if args.snapshot {
        let dir = out.clone().unwrap_or_else(|| PathBuf::from("."));
        snapshots(&spec, &dir)?;
    }
    if args.json {
        println!("{}", io::to_json_string(&outcome)?);
    }
    println!("{}", summary(&outcome));
    if outcome.passed {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let mut specs = Vec::new();
    for path in &args.configs {
        specs.push(io::parse_config(path)?.spec);
    }
    for name in &args.presets {
        specs.push(
            experiments::preset(name)
                .ok_or_else(|| Failure::Input(format!("unknown preset '{name}'")))?,
        );
    }
    if args.all {
        specs.extend(experiments::presets());
    }
    if specs.is_empty() {
        return Err(Failure::Input(
            "sweep needs configs, --presets or --all".into(),
        ));
    }
    let mut names: Vec<&str> = specs.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Failure::Input("sweep job names must be unique".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let results: Vec<(String, Result<Outcome, Failure>)> = pool.install(|| {
        specs
            .par_iter()
            .map(|s| {
                (
                    s.name.clone(),
                    execute(s, Some(&args.out.join(&s.name)), false),
                )
            })
            .collect()
    });
    let mut worst = None::<Failure>;
    for (name, r) in results {
        let failure = match r {
            Ok(o) => {
                println!("{}", summary(&o));
                (!o.passed).then_some(Failure::Verdict)
            }
            Err(f) => {
                println!("{name}: ERROR {}", describe(&f));
                Some(f)
            }
        };
        if let Some(f) = failure {
            if worst.as_ref().map_or(true, |w| f.code() > w.code()) {
                worst = Some(f);
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

fn describe(f: &Failure) -> &str {
    match f {
        Failure::Verdict => "verdict failed",
        Failure::Input(m) | Failure::Numerical(m) => m,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(args) => sweep(args),
        cmd @ (Command::Simulate(a)
        | Command::Kernel(a)
        | Command::Bernstein(a)
        | Command::Decay(a)
        | Command::Strichartz(a)
        | Command::Gn(a)
        | Command::Continuity(a)
        | Command::Decoherence(a)
        | Command::Thresholds(a)
        | Command::Scattering(a)) => run_family(a, family(cmd)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !matches!(f, Failure::Verdict) {
                eprintln!("error: {}", describe(&f));
            }
            ExitCode::from(f.code())
        }
    }
}
