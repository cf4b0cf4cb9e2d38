//! Command-line front end: parameter sweeps over the protocol quantities,
//! emitted as CSV (default) or JSON for external plotting.

mod output;

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use homodyne_qkd::attacks::{
    ber_intermediate, ber_simultaneous, eve_ber_intercept, intermediate_attack_signal,
    resend_probabilities, simultaneous_attack_signal, AttackModel,
};
use homodyne_qkd::keygain::{key_gain, optimize, Optimum, SearchSpec};
use homodyne_qkd::montecarlo::{simulate, simulate_eve_bs, SimConfig, WrongBasisHistogram};
use homodyne_qkd::protocol::{ber_no_eve, postselection_efficiency, ProtocolParams, StateChoice};
use homodyne_qkd::signal::{ensemble_density, quadrature_density, CoherentEnsemble, CoherentState};

use output::{Cell, Table};

/// A tabulated density curve.
type Density = Box<dyn Fn(f64) -> f64>;

/// An inclusive sweep axis written as `start:stop:step`.
#[derive(Debug, Clone, Copy)]
struct RangeSpec {
    start: f64,
    stop: f64,
    step: f64,
}

impl RangeSpec {
    fn points(&self) -> Vec<f64> {
        let mut points = Vec::new();
        let mut k = 0u64;
        loop {
            let v = self.start + k as f64 * self.step;
            if v > self.stop + self.step * 1e-9 {
                break;
            }
            points.push(v);
            k += 1;
        }
        points
    }
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got `{s}`"));
        }
        let parse = |p: &str| {
            p.parse::<f64>()
                .map_err(|e| format!("bad number `{p}` in range: {e}"))
        };
        let spec = RangeSpec {
            start: parse(parts[0])?,
            stop: parse(parts[1])?,
            step: parse(parts[2])?,
        };
        if !spec.start.is_finite() || !spec.stop.is_finite() || !spec.step.is_finite() {
            return Err("range endpoints must be finite".into());
        }
        if spec.step <= 0.0 {
            return Err("range step must be positive".into());
        }
        if spec.start > spec.stop {
            return Err("range start must not exceed stop".into());
        }
        Ok(spec)
    }
}

impl std::fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !v.is_finite() || v < 0.0 {
        return Err("must be a finite non-negative number".into());
    }
    Ok(v)
}

fn parse_loss(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(0.0..1.0).contains(&v) {
        return Err("loss must lie in [0, 1)".into());
    }
    Ok(v)
}

fn parse_loss_range(s: &str) -> Result<RangeSpec, String> {
    let range: RangeSpec = s.parse()?;
    if range.start < 0.0 || range.stop >= 1.0 {
        return Err("loss values must lie in [0, 1)".into());
    }
    Ok(range)
}

#[derive(Parser)]
#[command(
    name = "homodyne-qkd",
    version,
    about = "Security-analysis sweeps for four-state QKD with balanced homodyne detection",
    arg_required_else_help = true
)]
struct Cli {
    /// Worker threads for sweeps (fallback: HOMODYNE_QKD_JOBS, then all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quadrature distributions of the undisturbed signal
    Dist(DistArgs),
    /// Bit error rates of Bob and Eve versus pulse intensity
    BerCurve(BerCurveArgs),
    /// Disturbed quadrature distributions under the intercept-resend attacks
    Attack(AttackArgs),
    /// Key-gain report over a loss sweep at fixed parameters
    Keygain(KeygainArgs),
    /// Optimal threshold and intensity for a given loss
    Optimize(OptimizeArgs),
    /// Seeded Monte Carlo of the full protocol
    Montecarlo(MontecarloArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistBasis {
    /// Correct-basis mixture density
    Correct,
    /// Wrong-basis mixture density
    Wrong,
    /// The bit-1 coherent state alone
    Plus,
    /// The bit-0 coherent state alone
    Minus,
    /// All four curves as columns
    All,
}

#[derive(Args)]
struct DistArgs {
    /// Pulse intensity n (mean photons per pulse)
    #[arg(long, value_parser = parse_non_negative)]
    n: f64,
    /// Which density to tabulate
    #[arg(long, value_enum, default_value_t = DistBasis::All)]
    basis: DistBasis,
    /// Quadrature axis as start:stop:step
    #[arg(long, default_value = "-3:3:0.01", allow_hyphen_values = true)]
    range: RangeSpec,
}

#[derive(Args)]
struct BerCurveArgs {
    /// Postselection threshold x0
    #[arg(long, default_value_t = 0.0, value_parser = parse_non_negative)]
    x0: f64,
    /// Intensity axis as start:stop:step
    #[arg(long, default_value = "0.02:3:0.02")]
    range: RangeSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AttackView {
    /// Densities conditioned on Alice's bit-1 state (state announcement)
    State,
    /// Correct- and wrong-basis densities (basis announcement)
    Basis,
}

#[derive(Args)]
struct AttackArgs {
    /// Pulse intensity n
    #[arg(long, value_parser = parse_non_negative)]
    n: f64,
    /// Conditioning view of the disturbed distributions
    #[arg(long, value_enum, default_value_t = AttackView::Basis)]
    view: AttackView,
    /// Quadrature axis as start:stop:step
    #[arg(long, default_value = "-3:3:0.01", allow_hyphen_values = true)]
    range: RangeSpec,
}

#[derive(Args)]
struct KeygainArgs {
    /// Pulse intensity n
    #[arg(long, value_parser = parse_non_negative)]
    n: f64,
    /// Thresholds to sweep (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "0", value_parser = parse_non_negative)]
    x0: Vec<f64>,
    /// Loss axis as start:stop:step
    #[arg(long, default_value = "0:0.9:0.01", value_parser = parse_loss_range)]
    loss_range: RangeSpec,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Single loss value
    #[arg(long, conflicts_with = "loss_range", value_parser = parse_loss)]
    loss: Option<f64>,
    /// Loss axis as start:stop:step
    #[arg(long, value_parser = parse_loss_range)]
    loss_range: Option<RangeSpec>,
    /// Fix the intensity and optimize the threshold only
    #[arg(long, value_parser = parse_non_negative)]
    n: Option<f64>,
    /// Threshold search box upper edge
    #[arg(long, default_value_t = 4.0)]
    x0_max: f64,
    /// Intensity search box upper edge
    #[arg(long, default_value_t = 4.0)]
    n_max: f64,
    /// Coarse grid step
    #[arg(long, default_value_t = 0.05)]
    coarse_step: f64,
    /// Refinement tolerance on the parameters
    #[arg(long, default_value_t = 1e-3)]
    refine_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AttackChoice {
    None,
    Simultaneous,
    Intermediate,
    BeamSplitting,
}

#[derive(Args)]
struct MontecarloArgs {
    /// Pulse intensity n
    #[arg(long, value_parser = parse_non_negative)]
    n: f64,
    /// Postselection threshold x0
    #[arg(long, default_value_t = 0.0, value_parser = parse_non_negative)]
    x0: f64,
    /// Channel loss 1 - eta
    #[arg(long, default_value_t = 0.0, value_parser = parse_loss)]
    loss: f64,
    /// Number of pulses
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pulses: u64,
    /// RNG seed (results are bit-stable for a fixed seed)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Eavesdropping model applied at the channel input
    #[arg(long, value_enum, default_value_t = AttackChoice::None)]
    attack: AttackChoice,
    /// Also write the wrong-basis histogram to this CSV file
    #[arg(long)]
    histogram: Option<PathBuf>,
}

enum AppError {
    Usage(String),
    Numeric {
        point: String,
        source: homodyne_qkd::Error,
    },
    Io(std::io::Error),
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

fn at_point(point: String) -> impl FnOnce(homodyne_qkd::Error) -> AppError {
    move |source| AppError::Numeric { point, source }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let jobs = cli.jobs.or_else(|| {
        std::env::var("HOMODYNE_QKD_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(jobs) = jobs {
        // a failure here means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(message)) => {
            eprintln!("error: {message}");
            eprintln!();
            eprintln!("For more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(AppError::Numeric { point, source }) => {
            eprintln!("error: numerical convergence failure at {point}: {source}");
            ExitCode::from(3)
        }
        Err(AppError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let table = match &cli.command {
        Command::Dist(args) => dist_table(args)?,
        Command::BerCurve(args) => ber_curve_table(args)?,
        Command::Attack(args) => attack_table(args)?,
        Command::Keygain(args) => keygain_table(args)?,
        Command::Optimize(args) => optimize_table(args)?,
        Command::Montecarlo(args) => montecarlo_table(args)?,
    };

    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match cli.format {
        OutputFormat::Csv => output::write_csv(&table, &mut out)?,
        OutputFormat::Json => output::write_json(&table, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn dist_table(args: &DistArgs) -> Result<Table, AppError> {
    let n = args.n;
    let fail = at_point(format!("n={n}"));
    let correct = ensemble_density(&CoherentEnsemble::correct_basis_pair(n).map_err(fail)?, 0.0);
    let wrong = ensemble_density(
        &CoherentEnsemble::wrong_basis_pair(n).map_err(at_point(format!("n={n}")))?,
        0.0,
    );
    let plus = quadrature_density(
        &StateChoice::Alpha
            .state(n)
            .map_err(at_point(format!("n={n}")))?,
        0.0,
    );
    let minus = quadrature_density(
        &StateChoice::MinusAlpha
            .state(n)
            .map_err(at_point(format!("n={n}")))?,
        0.0,
    );

    let boxed_correct: Density = Box::new(move |x| correct.density(x));
    let boxed_wrong: Density = Box::new(move |x| wrong.density(x));
    let boxed_plus: Density = Box::new(move |x| plus.density(x));
    let boxed_minus: Density = Box::new(move |x| minus.density(x));
    let (columns, picks): (Vec<&'static str>, Vec<Density>) = match args.basis {
        DistBasis::Correct => (vec!["x", "correct_basis"], vec![boxed_correct]),
        DistBasis::Wrong => (vec!["x", "wrong_basis"], vec![boxed_wrong]),
        DistBasis::Plus => (vec!["x", "coherent_plus"], vec![boxed_plus]),
        DistBasis::Minus => (vec!["x", "coherent_minus"], vec![boxed_minus]),
        DistBasis::All => (
            vec![
                "x",
                "correct_basis",
                "wrong_basis",
                "coherent_plus",
                "coherent_minus",
            ],
            vec![boxed_correct, boxed_wrong, boxed_plus, boxed_minus],
        ),
    };

    let rows = args
        .range
        .points()
        .into_iter()
        .map(|x| {
            let mut row = vec![Cell::from(x)];
            row.extend(picks.iter().map(|f| Cell::from(f(x))));
            row
        })
        .collect();

    Ok(Table {
        command: format!(
            "dist --n {} --basis {} --range {}",
            args.n,
            heck_kebab(args.basis),
            args.range
        ),
        units: "x in vacuum quadrature units; densities in probability per quadrature unit",
        columns,
        rows,
    })
}

fn ber_curve_table(args: &BerCurveArgs) -> Result<Table, AppError> {
    let x0 = args.x0;
    let rows: Vec<Vec<Cell>> = args
        .range
        .points()
        .into_par_iter()
        .map(|n| -> Result<Vec<Cell>, AppError> {
            let simultaneous = ber_simultaneous(x0, n)
                .map_err(at_point(format!("n={n}, x0={x0}")))?
                .bob_ber;
            Ok(vec![
                Cell::from(n),
                Cell::from(ber_no_eve(x0, n)),
                Cell::from(simultaneous),
                Cell::from(ber_intermediate(x0, n).bob_ber),
                Cell::from(eve_ber_intercept(n)),
            ])
        })
        .collect::<Result<_, _>>()?;

    Ok(Table {
        command: format!("ber-curve --x0 {} --range {}", args.x0, args.range),
        units: "n in mean photons per pulse; error rates dimensionless",
        columns: vec!["n", "q_no_eve", "q_simultaneous", "q_intermediate", "q_eve"],
        rows,
    })
}

fn attack_table(args: &AttackArgs) -> Result<Table, AppError> {
    let n = args.n;
    let point = format!("n={n}");
    let xs = args.range.points();

    let (columns, densities): (Vec<&'static str>, Vec<Density>) = match args.view {
        AttackView::State => {
            // all three conditioned on Alice having sent the bit-1 state
            let no_eve = quadrature_density(
                &StateChoice::Alpha
                    .state(n)
                    .map_err(at_point(point.clone()))?,
                0.0,
            );
            let p = resend_probabilities(n).map_err(at_point(point.clone()))?;
            let amp = n.sqrt();
            let make = |phase: f64| CoherentState::new(amp, phase);
            let mut components = vec![
                (p.p_plus, make(0.0).map_err(at_point(point.clone()))?),
                (
                    p.p_minus,
                    make(std::f64::consts::PI).map_err(at_point(point.clone()))?,
                ),
                (
                    p.p_perp,
                    make(std::f64::consts::FRAC_PI_2).map_err(at_point(point.clone()))?,
                ),
                (
                    p.p_perp,
                    make(-std::f64::consts::FRAC_PI_2).map_err(at_point(point.clone()))?,
                ),
            ];
            let sum: f64 = components.iter().map(|(w, _)| w).sum();
            components[0].0 += 1.0 - sum;
            let resent = CoherentEnsemble::new(components).map_err(at_point(point.clone()))?;
            let simultaneous = ensemble_density(&resent, 0.0);
            let intermediate = ensemble_density(&intermediate_attack_signal(n).correct_basis, 0.0);
            (
                vec!["x", "no_eve", "simultaneous", "intermediate"],
                vec![
                    Box::new(move |x| no_eve.density(x)),
                    Box::new(move |x| simultaneous.density(x)),
                    Box::new(move |x| intermediate.density(x)),
                ],
            )
        }
        AttackView::Basis => {
            let correct = ensemble_density(
                &CoherentEnsemble::correct_basis_pair(n).map_err(at_point(point.clone()))?,
                0.0,
            );
            let wrong = ensemble_density(
                &CoherentEnsemble::wrong_basis_pair(n).map_err(at_point(point.clone()))?,
                0.0,
            );
            let sim = simultaneous_attack_signal(n).map_err(at_point(point.clone()))?;
            let sim_correct = ensemble_density(&sim.correct_basis, 0.0);
            let sim_wrong = ensemble_density(&sim.wrong_basis, 0.0);
            // announced-basis view of the diagonal resend: the conditional
            // (1-q, q) weights average out to an even mixture
            let amp = n.sqrt();
            let diagonal = CoherentEnsemble::new(vec![
                (
                    0.5,
                    CoherentState::new(amp, std::f64::consts::FRAC_PI_4)
                        .map_err(at_point(point.clone()))?,
                ),
                (
                    0.5,
                    CoherentState::new(amp, std::f64::consts::FRAC_PI_4 - std::f64::consts::PI)
                        .map_err(at_point(point.clone()))?,
                ),
            ])
            .map_err(at_point(point.clone()))?;
            let int_density = ensemble_density(&diagonal, 0.0);
            let int_density2 = int_density.clone();
            (
                vec![
                    "x",
                    "correct_no_eve",
                    "wrong_no_eve",
                    "correct_simultaneous",
                    "wrong_simultaneous",
                    "correct_intermediate",
                    "wrong_intermediate",
                ],
                vec![
                    Box::new(move |x| correct.density(x)),
                    Box::new(move |x| wrong.density(x)),
                    Box::new(move |x| sim_correct.density(x)),
                    Box::new(move |x| sim_wrong.density(x)),
                    Box::new(move |x| int_density.density(x)),
                    Box::new(move |x| int_density2.density(x)),
                ],
            )
        }
    };

    let rows = xs
        .into_iter()
        .map(|x| {
            let mut row = vec![Cell::from(x)];
            row.extend(densities.iter().map(|f| Cell::from(f(x))));
            row
        })
        .collect();

    Ok(Table {
        command: format!(
            "attack --n {} --view {} --range {}",
            args.n,
            heck_kebab(args.view),
            args.range
        ),
        units: "x in vacuum quadrature units; densities in probability per quadrature unit",
        columns,
        rows,
    })
}

fn keygain_table(args: &KeygainArgs) -> Result<Table, AppError> {
    let n = args.n;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &x0 in &args.x0 {
        for loss in args.loss_range.points() {
            points.push((x0, loss));
        }
    }
    let rows: Vec<Vec<Cell>> = points
        .into_par_iter()
        .map(|(x0, loss)| -> Result<Vec<Cell>, AppError> {
            let point = format!("x0={x0}, n={n}, loss={loss}");
            let params = ProtocolParams::new(n, x0, 1.0 - loss).map_err(at_point(point.clone()))?;
            let report = key_gain(&params).map_err(at_point(point))?;
            let received = params.transmission() * params.intensity();
            Ok(vec![
                Cell::from(x0),
                Cell::from(n),
                Cell::from(loss),
                Cell::from(report.efficiency),
                Cell::from(ber_no_eve(x0, received)),
                Cell::from(report.mutual_info),
                Cell::from(report.tau),
                Cell::from(report.gain),
            ])
        })
        .collect::<Result<_, _>>()?;

    Ok(Table {
        command: format!(
            "keygain --n {} --x0 {} --loss-range {}",
            args.n,
            args.x0
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(","),
            args.loss_range
        ),
        units: "information quantities in bits; gain in bits per signal",
        columns: vec![
            "x0",
            "n",
            "loss",
            "efficiency",
            "ber",
            "mutual_info",
            "tau",
            "gain",
        ],
        rows,
    })
}

/// Threshold-only optimization at fixed intensity: coarse scan plus a
/// shrinking pattern search, mirroring the two-parameter optimizer.
fn optimize_threshold(
    loss: f64,
    intensity: f64,
    search: &SearchSpec,
) -> Result<Optimum, homodyne_qkd::Error> {
    let gain = |x0: f64| -> Result<f64, homodyne_qkd::Error> {
        Ok(key_gain(&ProtocolParams::new(intensity, x0, 1.0 - loss)?)?.gain)
    };
    let count = (search.x0_max / search.coarse_step).round() as usize + 1;
    let mut best_x0 = 0.0;
    let mut best_gain = f64::NEG_INFINITY;
    for i in 0..count {
        let x0 = i as f64 * search.coarse_step;
        let g = gain(x0)?;
        if g > best_gain {
            best_gain = g;
            best_x0 = x0;
        }
    }
    let mut step = search.coarse_step / 2.0;
    while step >= search.refine_tol / 2.0 {
        let mut moved = false;
        for candidate in [
            (best_x0 - step).max(0.0),
            (best_x0 + step).min(search.x0_max),
        ] {
            if candidate == best_x0 {
                continue;
            }
            let g = gain(candidate)?;
            if g > best_gain {
                best_gain = g;
                best_x0 = candidate;
                moved = true;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    Ok(Optimum {
        loss,
        best_x0,
        best_n: intensity,
        best_gain,
        secure: best_gain > 0.0,
    })
}

fn optimize_table(args: &OptimizeArgs) -> Result<Table, AppError> {
    let losses: Vec<f64> = match (args.loss, &args.loss_range) {
        (Some(loss), None) => vec![loss],
        (None, Some(range)) => range.points(),
        (None, None) => {
            return Err(AppError::Usage(
                "one of --loss or --loss-range is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting flags"),
    };
    let search = SearchSpec {
        x0_max: args.x0_max,
        n_max: args.n_max,
        coarse_step: args.coarse_step,
        refine_tol: args.refine_tol,
    };

    let rows: Vec<Vec<Cell>> = losses
        .iter()
        .map(|&loss| -> Result<Vec<Cell>, AppError> {
            let opt = match args.n {
                Some(n) => optimize_threshold(loss, n, &search)
                    .map_err(at_point(format!("loss={loss}, n={n}")))?,
                None => optimize(loss, &search).map_err(at_point(format!("loss={loss}")))?,
            };
            Ok(vec![
                Cell::from(opt.loss),
                Cell::from(opt.best_x0),
                Cell::from(opt.best_n),
                Cell::from(opt.best_gain),
                Cell::Bool(opt.secure),
            ])
        })
        .collect::<Result<_, _>>()?;

    let mut command = String::from("optimize");
    if let Some(loss) = args.loss {
        let _ = write!(command, " --loss {loss}");
    }
    if let Some(range) = &args.loss_range {
        let _ = write!(command, " --loss-range {range}");
    }
    if let Some(n) = args.n {
        let _ = write!(command, " --n {n}");
    }
    let _ = write!(
        command,
        " --x0-max {} --n-max {} --coarse-step {} --refine-tol {}",
        args.x0_max, args.n_max, args.coarse_step, args.refine_tol
    );

    Ok(Table {
        command,
        units: "gain in bits per signal",
        columns: vec!["loss", "x0", "n", "gain", "secure"],
        rows,
    })
}

fn montecarlo_table(args: &MontecarloArgs) -> Result<Table, AppError> {
    let point = format!(
        "n={}, x0={}, loss={}, attack={:?}",
        args.n, args.x0, args.loss, args.attack
    );
    let params =
        ProtocolParams::new(args.n, args.x0, 1.0 - args.loss).map_err(at_point(point.clone()))?;
    let attack = match args.attack {
        AttackChoice::None => None,
        AttackChoice::Simultaneous => Some(AttackModel::SimultaneousMeasurement),
        AttackChoice::Intermediate => Some(AttackModel::IntermediateBasis),
        AttackChoice::BeamSplitting => Some(AttackModel::BeamSplitting { loss: args.loss }),
    };
    let config = SimConfig {
        pulses: args.pulses,
        params,
        attack,
        rng_seed: args.seed,
    };
    let result = simulate(&config);

    // closed forms cover the undisturbed channel at any loss, and the
    // intercept-resend attacks on a lossless channel
    let received = params.transmission() * params.intensity();
    let (analytic_p, analytic_q) = match args.attack {
        AttackChoice::None | AttackChoice::BeamSplitting => (
            Cell::from(postselection_efficiency(args.x0, received)),
            Cell::from(ber_no_eve(args.x0, received)),
        ),
        AttackChoice::Simultaneous if args.loss == 0.0 => {
            let b = ber_simultaneous(args.x0, args.n).map_err(at_point(point.clone()))?;
            (Cell::from(b.efficiency), Cell::from(b.bob_ber))
        }
        AttackChoice::Intermediate if args.loss == 0.0 => {
            let b = ber_intermediate(args.x0, args.n);
            (Cell::from(b.efficiency), Cell::from(b.bob_ber))
        }
        _ => (Cell::Missing, Cell::Missing),
    };
    let eve_ber = match args.attack {
        AttackChoice::BeamSplitting => Cell::from(simulate_eve_bs(&config, args.loss)),
        _ => Cell::Missing,
    };

    if let Some(path) = &args.histogram {
        let mut file = File::create(path)?;
        writeln!(file, "# homodyne-qkd {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(
            file,
            "# wrong-basis histogram, {} outcomes outside [-5, 5)",
            result.wrong_basis_histogram.outside()
        )?;
        writeln!(file, "bin_lo,bin_hi,count")?;
        for (i, &count) in result.wrong_basis_histogram.counts().iter().enumerate() {
            let (lo, hi) = WrongBasisHistogram::bin_range(i);
            writeln!(file, "{lo},{hi},{count}")?;
        }
    }

    let command = format!(
        "montecarlo --n {} --x0 {} --loss {} --pulses {} --seed {} --attack {}",
        args.n,
        args.x0,
        args.loss,
        args.pulses,
        args.seed,
        heck_kebab(args.attack)
    );

    Ok(Table {
        command,
        units: "counts in pulses; rates dimensionless",
        columns: vec![
            "pulses",
            "sifted",
            "conclusive",
            "errors",
            "empirical_p",
            "std_err_p",
            "empirical_q",
            "std_err_q",
            "analytic_p",
            "analytic_q",
            "eve_ber",
        ],
        rows: vec![vec![
            Cell::from(args.pulses),
            Cell::from(result.sifted),
            Cell::from(result.conclusive),
            Cell::from(result.errors),
            Cell::from(result.empirical_p),
            Cell::from(result.std_err_p),
            Cell::from(result.empirical_q),
            Cell::from(result.std_err_q),
            analytic_p,
            analytic_q,
            eve_ber,
        ]],
    })
}

/// kebab-case rendering of a clap ValueEnum variant, for command echoes.
fn heck_kebab<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}
