//! `adiabatic`: command-line front end for the extended-Hamiltonian search
//! model. Units: energies are in the units of the coefficients, times are in
//! inverse energy (hbar = 1), epsilon and s are dimensionless.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use adiabatic_core::dynamics::{success_csv, success_vs_time};
use adiabatic_core::experiments::{emit_report, fits_csv, run_sweep, SweepSpec, DEFAULT_GAMMAS};
use adiabatic_core::format::g17;
use adiabatic_core::model::{from_config, make_coefficients, make_instance, CoefficientSet, Preset};
use adiabatic_core::schedule::{self, minimum_area_check, MatrixElementMode, ScheduleKind};
use adiabatic_core::spectral::{gap_polynomial, min_gap, scan_to_csv, spectrum_scan};
use adiabatic_core::verify::verify_gap_oracle;
use adiabatic_core::Error;

#[derive(Parser)]
#[command(
    name = "adiabatic",
    version,
    about = "Spectral gap, schedules and dynamics of extended-Hamiltonian adiabatic search"
)]
#[command(
    after_help = "Units: coefficients and energies in arbitrary energy units; times in inverse energy units (hbar = 1); \
epsilon, s and p are dimensionless.\nExit codes: 0 success, 1 verification failure, 2 usage or validation error."
)]
struct Cli {
    /// Worker threads for parallel scans and sweeps (count; default: all cores)
    #[arg(long, global = true, value_name = "COUNT")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan the spectrum over s and report the gap polynomial
    Gap(GapArgs),
    /// Compare the gap polynomial with dense diagonalization on random sets
    Verify(VerifyArgs),
    /// Build a global or local schedule and print s(t) (t in inverse energy units)
    Schedule(ScheduleArgs),
    /// Evolve the initial state along a schedule and report success probability (times in inverse energy units)
    Evolve(EvolveArgs),
    /// Fit running-time exponents over a range of n
    Sweep(SweepArgs),
    /// Minimum-area check for a_coeff (s - p)^2 + c
    Area(AreaArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Search-space size n (number of items, >= 2)
    #[arg(long, value_name = "ITEMS")]
    n: Option<usize>,

    /// Marked item index (0-based, < n)
    #[arg(long, value_name = "INDEX", default_value_t = 0)]
    marked: usize,

    /// Coefficient preset: farhi or scaled:<gamma> (gamma dimensionless, >= 0)
    #[arg(long, value_name = "NAME", conflicts_with_all = ["coeffs", "config"])]
    preset: Option<Preset>,

    /// Explicit coefficients a1=..,a2=..,a3=..,b1=..,b2=..,b3=.. (energy units)
    #[arg(long, value_name = "LIST", conflicts_with = "config")]
    coeffs: Option<String>,

    /// key=value file with n, marked_index and coefficients or a preset
    #[arg(long, value_name = "PATH", conflicts_with_all = ["n", "marked"])]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Write the main result here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Write the companion record here instead of standard error
    #[arg(long, value_name = "PATH")]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of s points on [0, 1] (count, >= 2)
    #[arg(long, value_name = "COUNT", default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest n in the suite; sizes run 4, 16, 64, ... up to it (items, <= 4096)
    #[arg(long, value_name = "ITEMS", default_value_t = 256)]
    n_max: usize,
    /// Number of random coefficient sets (count)
    #[arg(long, value_name = "COUNT", default_value_t = 100)]
    trials: usize,
    /// Random seed (unsigned integer, unitless)
    #[arg(long, value_name = "SEED", default_value_t = 42)]
    seed: u64,
    /// Largest allowed |dense g^2 - polynomial g^2| (energy^2)
    #[arg(long, value_name = "ENERGY2", default_value_t = 1e-9)]
    tolerance: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundArgs {
    /// Schedule kind: global or local (unitless)
    #[arg(long, value_name = "KIND", default_value = "local")]
    kind: ScheduleKind,
    /// Adiabatic accuracy parameter (dimensionless, 0 < epsilon < 1)
    #[arg(long, value_name = "EPS", default_value_t = 0.1)]
    epsilon: f64,
    /// <dH/ds> estimate: norm (block operator norm) or transition (energy units)
    #[arg(long, value_name = "MODE", default_value = "norm")]
    mode: MatrixElementMode,
}

#[derive(Args)]
struct ScheduleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bound: BoundArgs,
    /// Number of (t, s) samples (count, >= 2)
    #[arg(long, value_name = "COUNT", default_value_t = 1001)]
    resolution: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bound: BoundArgs,
    /// Midpoint propagator steps per run (count, >= 100)
    #[arg(long, value_name = "COUNT", default_value_t = 10_000)]
    steps: usize,
    /// Multiples of the bound time to run at (dimensionless, comma separated)
    #[arg(long, value_name = "LIST", value_delimiter = ',', default_value = "1")]
    factors: Vec<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    /// Schedule kinds: global, local (unitless, comma separated)
    #[arg(long, value_name = "LIST", value_delimiter = ',', default_value = "global,local")]
    kind: Vec<ScheduleKind>,
    /// Gap exponents gamma with a = b = n^gamma (dimensionless, comma separated)
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    gamma: Vec<f64>,
    /// Search-space sizes, powers of two (items, comma separated)
    #[arg(
        long,
        value_name = "LIST",
        value_delimiter = ',',
        default_value = "16,64,256,1024,4096"
    )]
    n: Vec<usize>,
    /// Adiabatic accuracy parameter (dimensionless, 0 < epsilon < 1)
    #[arg(long, value_name = "EPS", default_value_t = 0.1)]
    epsilon: f64,
    /// <dH/ds> estimate: norm or transition (energy units)
    #[arg(long, value_name = "MODE", default_value = "norm")]
    mode: MatrixElementMode,
    /// Directory for fits.csv, points.csv and one SVG per fit
    #[arg(long, value_name = "DIR")]
    report_dir: Option<PathBuf>,
    /// Write the fits CSV here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AreaArgs {
    /// Curvature a_coeff of the parabola (dimensionless, > 0)
    #[arg(long = "a", value_name = "VALUE")]
    a_coeff: f64,
    /// Offset c of the parabola (dimensionless)
    #[arg(long, value_name = "VALUE", default_value_t = 0.0)]
    c: f64,
    /// Number of candidate centres p on [0, 1] (count, odd, >= 3)
    #[arg(long, value_name = "COUNT", default_value_t = 101)]
    grid: usize,
    /// Write the result here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

enum Failure {
    Invalid(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool already initialised");
    }
    let result = match cli.command {
        Command::Gap(args) => cmd_gap(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Schedule(args) => cmd_schedule(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Area(args) => cmd_area(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(Error::InvalidArgument(msg.into()))
}

fn parse_coeffs(list: &str) -> std::result::Result<[f64; 6], Failure> {
    const KEYS: [&str; 6] = ["a1", "a2", "a3", "b1", "b2", "b3"];
    let mut got = [None; 6];
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| invalid(format!("--coeffs entry {item:?} is not key=value")))?;
        let key = key.trim();
        if key == "a4" || key == "b4" {
            return Err(invalid(format!("{key} is derived and must not be given")));
        }
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| invalid(format!("unknown coefficient {key:?} in --coeffs")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{key}={value:?} is not a number")))?;
        got[slot] = Some(value);
    }
    let mut out = [0.0; 6];
    for (slot, v) in got.iter().enumerate() {
        out[slot] = v.ok_or_else(|| invalid(format!("--coeffs is missing {}", KEYS[slot])))?;
    }
    Ok(out)
}

fn resolve(model: &ModelArgs) -> std::result::Result<CoefficientSet, Failure> {
    if let Some(path) = &model.config {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        return Ok(from_config(&text)?);
    }
    let n = model
        .n
        .ok_or_else(|| invalid("--n is required unless --config is given"))?;
    let instance = make_instance(n, model.marked)?;
    if let Some(preset) = &model.preset {
        return Ok(preset.build(&instance)?);
    }
    if let Some(list) = &model.coeffs {
        let c = parse_coeffs(list)?;
        return Ok(make_coefficients(c[0], c[1], c[2], c[3], c[4], c[5], &instance)?);
    }
    Err(invalid("one of --preset, --coeffs or --config is required"))
}

/// Resolved configuration as `# key=value` lines on standard error.
fn announce(coeffs: &CoefficientSet) {
    let inst = coeffs.instance();
    let mut lines = vec![
        format!("n={}", inst.n()),
        format!("marked_index={}", inst.marked_index()),
        format!("x={}", g17(inst.overlap_x())),
    ];
    for (name, v) in [
        ("a1", coeffs.a1()),
        ("a2", coeffs.a2()),
        ("a3", coeffs.a3()),
        ("a4", coeffs.a4()),
        ("b1", coeffs.b1()),
        ("b2", coeffs.b2()),
        ("b3", coeffs.b3()),
        ("b4", coeffs.b4()),
    ] {
        lines.push(format!("{name}={}", g17(v)));
    }
    announce_lines(&lines);
    for w in coeffs.warnings() {
        eprintln!("# warning: {w}");
    }
}

fn announce_lines(lines: &[String]) {
    for l in lines {
        eprintln!("# {l}");
    }
}

fn write_to(path: Option<&Path>, text: &str, fallback_stderr: bool) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| {
            Failure::Invalid(Error::Io {
                path: p.to_path_buf(),
                source,
            })
        }),
        None if fallback_stderr => {
            eprint!("{text}");
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gap(args: GapArgs) -> Outcome {
    let coeffs = resolve(&args.model)?;
    let inst = *coeffs.instance();
    announce(&coeffs);
    announce_lines(&[format!("points={}", args.points)]);
    let poly = gap_polynomial(&coeffs, &inst)?;
    let g_min = min_gap(&coeffs, &inst)?;
    let scan = spectrum_scan(&coeffs, &inst, args.points)?;
    let meta = format!(
        "A={}\nB={}\nC={}\ns_star={}\ng_min={}\n",
        g17(poly.coeff_a),
        g17(poly.coeff_b),
        g17(poly.coeff_c),
        g17(poly.s_star),
        g17(g_min)
    );
    write_to(args.output.meta.as_deref(), &meta, true)?;
    write_to(args.output.out.as_deref(), &scan_to_csv(&scan), false)
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    announce_lines(&[
        format!("n_max={}", args.n_max),
        format!("trials={}", args.trials),
        format!("seed={}", args.seed),
        format!("tolerance={}", g17(args.tolerance)),
    ]);
    if args.tolerance.is_nan() || args.tolerance < 0.0 {
        return Err(invalid(format!("--tolerance must be >= 0 (got {})", args.tolerance)));
    }
    let report = verify_gap_oracle(args.n_max, args.trials, args.seed, args.tolerance)?;
    write_to(args.output.out.as_deref(), &report.table(), false)?;
    let worst = report.outcomes.iter().map(|o| o.max_abs_dev).fold(0.0, f64::max);
    let summary = format!(
        "trials={}\npassed={}\nmax_abs_dev={}\n",
        report.outcomes.len(),
        report.passed(),
        g17(worst)
    );
    write_to(args.output.meta.as_deref(), &summary, true)?;
    match report.first_failure() {
        None => Ok(()),
        Some(o) => {
            let c = &o.coeffs;
            Err(Failure::Verification(format!(
                "trial {} n={} marked_index={} a1={} a2={} a3={} b1={} b2={} b3={}: deviation {} at s={} exceeds {}",
                o.trial,
                c.instance().n(),
                c.instance().marked_index(),
                g17(c.a1()),
                g17(c.a2()),
                g17(c.a3()),
                g17(c.b1()),
                g17(c.b2()),
                g17(c.b3()),
                g17(o.max_abs_dev),
                g17(o.worst_s),
                g17(args.tolerance)
            )))
        }
    }
}

fn bounds_record(coeffs: &CoefficientSet, b: &BoundArgs) -> std::result::Result<String, Failure> {
    let tb = schedule::time_bounds(coeffs, coeffs.instance(), b.epsilon, b.mode)?;
    for w in &tb.warnings {
        eprintln!("# warning: {w}");
    }
    Ok(format!("kind={}\n{}", b.kind, tb.to_record()))
}

fn announce_bound(b: &BoundArgs) {
    announce_lines(&[
        format!("kind={}", b.kind),
        format!("epsilon={}", g17(b.epsilon)),
        format!("mode={}", b.mode),
    ]);
}

fn cmd_schedule(args: ScheduleArgs) -> Outcome {
    let coeffs = resolve(&args.model)?;
    let inst = *coeffs.instance();
    announce(&coeffs);
    announce_bound(&args.bound);
    announce_lines(&[format!("resolution={}", args.resolution)]);
    let b = &args.bound;
    let sched = schedule::build(&coeffs, &inst, b.kind, b.epsilon, b.mode)?;
    write_to(args.output.meta.as_deref(), &bounds_record(&coeffs, b)?, true)?;
    write_to(args.output.out.as_deref(), &sched.to_csv(args.resolution)?, false)
}

fn cmd_evolve(args: EvolveArgs) -> Outcome {
    let coeffs = resolve(&args.model)?;
    let inst = *coeffs.instance();
    announce(&coeffs);
    announce_bound(&args.bound);
    announce_lines(&[
        format!("steps={}", args.steps),
        format!(
            "factors={}",
            args.factors.iter().map(|f| g17(*f)).collect::<Vec<_>>().join(",")
        ),
    ]);
    if args.factors.is_empty() {
        return Err(invalid("--factors needs at least one value"));
    }
    let b = &args.bound;
    let points = success_vs_time(&coeffs, &inst, b.kind, b.epsilon, b.mode, &args.factors, args.steps)?;
    write_to(args.output.meta.as_deref(), &bounds_record(&coeffs, b)?, true)?;
    write_to(args.output.out.as_deref(), &success_csv(&points), false)
}

fn cmd_sweep(args: SweepArgs) -> Outcome {
    let gammas = if args.gamma.is_empty() {
        DEFAULT_GAMMAS.to_vec()
    } else {
        args.gamma.clone()
    };
    let join = |v: Vec<String>| v.join(",");
    announce_lines(&[
        format!("kind={}", join(args.kind.iter().map(|k| k.to_string()).collect())),
        format!("gamma={}", join(gammas.iter().map(|g| g17(*g)).collect())),
        format!("n={}", join(args.n.iter().map(|n| n.to_string()).collect())),
        format!("epsilon={}", g17(args.epsilon)),
        format!("mode={}", args.mode),
        "preset=scaled:<gamma>".to_string(),
    ]);
    if args.kind.is_empty() {
        return Err(invalid("--kind needs at least one value"));
    }
    let mut fits = Vec::new();
    for &kind in &args.kind {
        for &gamma in &gammas {
            fits.push(run_sweep(&SweepSpec {
                n_values: args.n.clone(),
                gamma,
                epsilon: args.epsilon,
                kind,
                mode: args.mode,
                steps: adiabatic_core::dynamics::MIN_STEPS,
                seed: 0,
            })?);
        }
    }
    if let Some(dir) = &args.report_dir {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
        for path in emit_report(&fits, dir)? {
            eprintln!("# wrote {}", path.display());
        }
    }
    write_to(args.out.as_deref(), &fits_csv(&fits), false)
}

fn cmd_area(args: AreaArgs) -> Outcome {
    announce_lines(&[
        format!("a={}", g17(args.a_coeff)),
        format!("c={}", g17(args.c)),
        format!("grid={}", args.grid),
    ]);
    let r = minimum_area_check(args.a_coeff, args.c, args.grid)?;
    let line = format!("argmin_p={},min_integral={}\n", g17(r.argmin_p), g17(r.min_integral));
    write_to(args.out.as_deref(), &line, false)
}
