//! Command-line driver: 3-periodic billiard orbits in an ellipse, the
//! incenter-locus sweep, the foci-distance curve, and the verification
//! suites.
//!
//! Each command writes its artifacts under `--out` with fixed names and
//! formats (`orbit.json`, `locus.csv` + `fit.json`, `foci.csv`,
//! `verify.json`) and echoes the result to stdout; `--format` selects the
//! echo between the JSON record and the tabular CSV view. Exit codes are
//! stable for CI: 0 on success, 1 when a numerical invariant or a
//! verification check fails, 2 on invalid arguments.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use poncelet::{
    all_suites, axis_crossing_suite, caustic_for_3_periodic, confocal_suite, fit_incenter_locus,
    foci_curve, isotropic_limit_suite, orbit_family, orbit_from_vertex, reflection_suite,
    triangle_incenter, Branch, CausticSolution, ConicFit, Ellipse, HLine, LocusOutcome, Orbit,
    OrbitResiduals, SuiteReport, Tolerances,
};

/// Seeded-trial count for the reflection suite.
const REFLECTION_TRIALS: usize = 1000;
/// Confocal pairs drawn by the confocal suite.
const CONFOCAL_PAIRS: usize = 10;
/// Realification tolerance for orbit side lines (real by construction; the
/// gate only strips rounding dust).
const SIDE_REAL_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "poncelet",
    version,
    about = "3-periodic orbits of an elliptic billiard: orbit records, the incenter locus, \
             the foci-distance curve, and verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct one 3-periodic orbit and write orbit.json.
    Orbit(OrbitArgs),
    /// Sweep the orbit family, fit the incenter locus, write locus.csv and fit.json.
    Locus(LocusArgs),
    /// Sweep aspect ratios and write the foci-distance table foci.csv.
    FociCurve(FociCurveArgs),
    /// Run verification suites and write verify.json.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Major semi-axis of the billiard table.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Minor semi-axis of the billiard table.
    #[arg(long, default_value_t = 0.5)]
    b: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory receiving the output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Stdout echo format; files always keep their fixed formats.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Tolerance override as NAME=VALUE; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Boundary parameter of the first vertex.
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LocusArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Starting parameters in the sweep (at least 12).
    #[arg(long, default_value_t = 360)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FociCurveArgs {
    /// Smallest aspect ratio in the grid.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    t_min: f64,
    /// Largest aspect ratio in the grid.
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    t_max: f64,
    /// Number of grid points between t-min and t-max inclusive.
    #[arg(long, default_value_t = 19)]
    steps: usize,
    /// Orbits per sweep.
    #[arg(long, default_value_t = 360)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run.
    #[arg(long, value_enum)]
    suite: Suite,
    #[command(flatten)]
    table: TableArgs,
    /// Sweep size for the locus-based suite.
    #[arg(long, default_value_t = 360)]
    samples: usize,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Direction-coordinate reflection law.
    Reflection,
    /// Shared isotropic tangents of confocal pairs.
    Confocal,
    /// Isotropic-limit experiment on the table and its caustic.
    #[value(name = "lemma5")]
    IsotropicLimit,
    /// Axis crossings of the fitted incenter locus.
    #[value(name = "mainlemma")]
    AxisCrossing,
    /// Every suite, in the order above.
    All,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<poncelet::Error> for Failure {
    fn from(err: poncelet::Error) -> Self {
        Failure::Run(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Run(format!("io: {err}"))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Orbit(args) => cmd_orbit(args),
        Command::Locus(args) => cmd_locus(args),
        Command::FociCurve(args) => cmd_foci_curve(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value
        .parse::<f64>()
        .map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.to_string(), value))
}

fn build_table(args: &TableArgs) -> Result<Ellipse, Failure> {
    if !args.a.is_finite() || !args.b.is_finite() || args.b <= 0.0 || args.a < args.b {
        return Err(Failure::Usage(format!(
            "semi-axes must satisfy a >= b > 0, got a = {}, b = {}",
            args.a, args.b
        )));
    }
    Ellipse::new(args.a, args.b).map_err(Failure::from)
}

fn build_tolerances(overrides: &[(String, f64)]) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::DEFAULT;
    for (name, value) in overrides {
        tol.set(name, *value)
            .map_err(|err| Failure::Usage(err.to_string()))?;
    }
    Ok(tol)
}

fn check_samples(samples: usize) -> Result<(), Failure> {
    if samples < 12 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 12, got {samples}"
        )));
    }
    Ok(())
}

/// Side line as real coefficients `[l, m, n]` with `l^2 + m^2 = 1` and the
/// leading nonzero of `(l, m)` positive, so records are reproducible.
fn normalized_side(side: &HLine) -> Result<[f64; 3], Failure> {
    let (l, m, n) = side
        .to_real(SIDE_REAL_TOL)
        .ok_or_else(|| Failure::Run("orbit side is not a real line".into()))?;
    let scale = l.hypot(m);
    if scale == 0.0 {
        return Err(Failure::Run("orbit side has no direction".into()));
    }
    let sign = if l < 0.0 || (l == 0.0 && m < 0.0) {
        -1.0
    } else {
        1.0
    };
    Ok([sign * l / scale, sign * m / scale, sign * n / scale])
}

fn enforce_orbit_gates(residuals: &OrbitResiduals, tol: &Tolerances) -> Result<(), Failure> {
    let gates = [
        ("vertex-on-boundary", residuals.on_boundary, tol.vertex_on_boundary),
        ("reflection-law", residuals.reflection, tol.reflection_law),
        ("closure", residuals.closure, tol.closure),
        ("side-tangency", residuals.tangency, tol.side_tangency),
    ];
    for (name, measured, threshold) in gates {
        if measured > threshold {
            return Err(Failure::Run(format!(
                "{name} residual {measured:.3e} exceeds {threshold:.3e}"
            )));
        }
    }
    Ok(())
}

fn orbit_row(orbit: &Orbit) -> Result<output::LocusRow, Failure> {
    let (center, radius) = triangle_incenter(&orbit.vertices)?;
    Ok(output::LocusRow {
        theta: orbit.thetas[0],
        vertices: orbit.vertices.map(|p| [p.x, p.y]),
        incenter: [center.x, center.y],
        inradius: radius,
    })
}

fn orbit_record(
    orbit: &Orbit,
    solution: &CausticSolution,
    residuals: &OrbitResiduals,
) -> Result<output::OrbitRecord, Failure> {
    let mut sides = [[0.0; 3]; 3];
    for (slot, side) in sides.iter_mut().zip(&orbit.sides) {
        *slot = normalized_side(side)?;
    }
    let (center, radius) = triangle_incenter(&orbit.vertices)?;
    Ok(output::OrbitRecord {
        vertices: orbit.vertices.map(|p| [p.x, p.y]),
        thetas: orbit.thetas,
        sides,
        perimeter: orbit.perimeter,
        inradius: radius,
        incenter: [center.x, center.y],
        caustic: output::CausticRecord {
            a: solution.caustic.a(),
            b: solution.caustic.b(),
            lambda_star: solution.lambda_star,
        },
        residuals: output::ResidualsRecord {
            on_boundary: residuals.on_boundary,
            reflection: residuals.reflection,
            closure: residuals.closure,
            tangency: residuals.tangency,
        },
    })
}

fn fit_record(fit: &ConicFit) -> output::FitRecord {
    let params = fit
        .ellipse
        .as_ref()
        .expect("a fitted locus always carries ellipse parameters");
    output::FitRecord {
        coeffs: fit.coeffs.coeffs(),
        kind: fit.kind.as_str(),
        center: [params.center.x, params.center.y],
        semi_axes: [params.semi_axes.0, params.semi_axes.1],
        rotation: params.rotation,
        foci: [
            [params.foci[0].x, params.foci[0].y],
            [params.foci[1].x, params.foci[1].y],
        ],
        residual_max: fit.residual_max,
        residual_rms: fit.residual_rms,
    }
}

fn verify_record(reports: &[SuiteReport]) -> output::VerifyRecord {
    let suites: Vec<output::SuiteRecord> = reports
        .iter()
        .map(|report| output::SuiteRecord {
            suite: report.suite,
            checks: report
                .checks
                .iter()
                .map(|check| output::CheckRecord {
                    name: check.name,
                    measured: check.measured,
                    threshold: check.threshold,
                    op: check.op.symbol(),
                    pass: check.pass,
                })
                .collect(),
            passed: report.passed,
        })
        .collect();
    let passed = suites.iter().all(|s| s.passed);
    output::VerifyRecord { suites, passed }
}

fn cmd_orbit(args: OrbitArgs) -> Result<ExitCode, Failure> {
    let table = build_table(&args.table)?;
    let tol = build_tolerances(&args.output.tol)?;
    let solution = caustic_for_3_periodic(&table)?;
    let orbit = orbit_from_vertex(&table, &solution, args.theta, Branch::First)?;
    let residuals = orbit.validate(&table);
    enforce_orbit_gates(&residuals, &tol)?;
    let json = output::to_json(&orbit_record(&orbit, &solution, &residuals)?);
    output::write_atomic(&args.output.out, "orbit.json", &json)?;
    match args.output.format {
        Format::Json => print!("{json}"),
        Format::Csv => print!("{}", output::locus_csv(&[orbit_row(&orbit)?])),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_locus(args: LocusArgs) -> Result<ExitCode, Failure> {
    check_samples(args.samples)?;
    let table = build_table(&args.table)?;
    let tol = build_tolerances(&args.output.tol)?;
    let family = orbit_family(&table, args.samples)?;
    let mut rows = Vec::with_capacity(family.len());
    let mut incenters = Vec::with_capacity(family.len());
    for orbit in &family {
        let (center, radius) = triangle_incenter(&orbit.vertices)?;
        rows.push(output::LocusRow {
            theta: orbit.thetas[0],
            vertices: orbit.vertices.map(|p| [p.x, p.y]),
            incenter: [center.x, center.y],
            inradius: radius,
        });
        incenters.push(center);
    }
    let csv = output::locus_csv(&rows);
    let json = match fit_incenter_locus(&table, incenters, &tol)? {
        LocusOutcome::Fitted { fit, .. } => output::to_json(&fit_record(&fit)),
        LocusOutcome::PointLocus {
            incenters,
            max_radius,
        } => output::to_json(&output::PointLocusRecord {
            kind: "point",
            center: [0.0, 0.0],
            max_radius,
            samples: incenters.len(),
        }),
    };
    output::write_atomic(&args.output.out, "locus.csv", &csv)?;
    output::write_atomic(&args.output.out, "fit.json", &json)?;
    match args.output.format {
        Format::Json => print!("{json}"),
        Format::Csv => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_foci_curve(args: FociCurveArgs) -> Result<ExitCode, Failure> {
    if !args.t_min.is_finite()
        || !args.t_max.is_finite()
        || args.t_min <= 0.0
        || args.t_min >= args.t_max
        || args.t_max >= 1.0
    {
        return Err(Failure::Usage(format!(
            "grid must satisfy 0 < t-min < t-max < 1, got t-min = {}, t-max = {}",
            args.t_min, args.t_max
        )));
    }
    if args.steps < 2 {
        return Err(Failure::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    check_samples(args.samples)?;
    let tol = build_tolerances(&args.output.tol)?;
    let span = args.t_max - args.t_min;
    let grid: Vec<f64> = (0..args.steps)
        .map(|k| args.t_min + span * k as f64 / (args.steps - 1) as f64)
        .collect();
    let rows: Vec<output::FociRecord> = foci_curve(&grid, args.samples, &tol)?
        .into_iter()
        .map(|s| output::FociRecord {
            t: s.t,
            d_gamma: s.d_gamma,
            d_locus: s.d_locus,
        })
        .collect();
    let csv = output::foci_csv(&rows);
    output::write_atomic(&args.output.out, "foci.csv", &csv)?;
    match args.output.format {
        Format::Json => print!("{}", output::to_json(&rows)),
        Format::Csv => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    check_samples(args.samples)?;
    let table = build_table(&args.table)?;
    let tol = build_tolerances(&args.output.tol)?;
    let reports: Vec<SuiteReport> = match args.suite {
        Suite::Reflection => vec![reflection_suite(REFLECTION_TRIALS, args.seed, &tol)],
        Suite::Confocal => vec![confocal_suite(CONFOCAL_PAIRS, args.seed, &tol)?],
        Suite::IsotropicLimit => vec![isotropic_limit_suite(&table, &tol)?],
        Suite::AxisCrossing => vec![axis_crossing_suite(&table, args.samples, &tol)?],
        Suite::All => all_suites(
            &table,
            args.samples,
            REFLECTION_TRIALS,
            CONFOCAL_PAIRS,
            args.seed,
            &tol,
        )?,
    };
    let record = verify_record(&reports);
    let json = output::to_json(&record);
    output::write_atomic(&args.output.out, "verify.json", &json)?;
    match args.output.format {
        Format::Json => print!("{json}"),
        Format::Csv => print!("{}", output::verify_csv(&record)),
    }
    if record.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
