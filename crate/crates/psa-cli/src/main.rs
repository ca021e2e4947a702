use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psa_cli::record::{write_csv, write_json_lines, RunStatus, Strategy};
use psa_cli::runner::{run, StartStrategy};
use psa_cli::{boundary, Algorithm, CliError, GenSpec, OracleKind, Problem, RunOptions, RunRecord};
use psa_core::oracle::Region;
use rayon::prelude::*;

/// Pseudospectral abscissa of matrices and matrix-valued functions.
///
/// Without a subcommand, `psa` runs a single computation (same as `psa run`).
#[derive(Parser)]
#[command(name = "psa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and print a JSON record.
    Run(RunArgs),
    /// Run over a grid of eps values or damper viscosities.
    Sweep(SweepArgs),
    /// Sample the boundary of the eps-pseudospectrum along vertical lines.
    Boundary(BoundaryArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Built-in problem, e.g. grcar:100, kahan:100, random:n=8,c1=1,c2=0.5,seed=7,
    /// damping:n=20,xi=0.005,k=25,nu=10,at=2
    #[arg(long, value_name = "SPEC", conflicts_with = "input", required_unless_present = "input")]
    gen: Option<GenSpec>,
    /// Matrix Market file holding a square matrix.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Perturbation weights on (M, C, K) for damping problems.
    #[arg(long, value_name = "WM,WC,WK", value_parser = parse_weights)]
    weights: Option<[f64; 3]>,
}

impl ProblemArgs {
    fn id(&self) -> String {
        match (&self.gen, &self.input) {
            (Some(g), _) => g.to_string(),
            (None, Some(p)) => p.display().to_string(),
            (None, None) => String::new(),
        }
    }

    fn build(&self) -> Result<Problem, CliError> {
        match (&self.gen, &self.input) {
            (Some(g), _) => Problem::from_spec(g, self.weights),
            (None, Some(p)) => {
                if self.weights.is_some() {
                    return Err(CliError::Usage("--weights applies to damping problems only".into()));
                }
                Problem::from_file(p)
            }
            (None, None) => Err(CliError::Usage("either --gen or --input is required".into())),
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    /// Number of starting points; the rightmost converged result is kept.
    #[arg(long, short = 'N', default_value_t = 1)]
    restarts: usize,
    /// Termination tolerance of the fixed-point iterations.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Starting point for fp-matrix.
    #[arg(long, value_enum, default_value_t = StartStrategy::Hybrid)]
    strategy: StartStrategy,
    /// Also compute a reference value and the error against it.
    #[arg(long, value_enum)]
    oracle: Option<OracleKind>,
    /// Coarse grid points per axis for the grid oracle.
    #[arg(long, default_value_t = 61)]
    grid_n: usize,
}

impl SolverArgs {
    fn options(&self, eps: f64, algorithm: Algorithm) -> RunOptions {
        RunOptions {
            eps,
            algorithm,
            restarts: self.restarts,
            tol: self.tol,
            max_iter: self.max_iter,
            strategy: self.strategy,
            oracle: self.oracle,
            grid_n: self.grid_n,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum)]
    alg: Algorithm,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Algorithms to run at every grid point.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    alg: Vec<Algorithm>,
    /// Logarithmic grid of eps values, LO:HI:COUNT.
    #[arg(long, value_name = "LO:HI:COUNT", conflicts_with = "param_range", required_unless_present = "param_range")]
    eps_range: Option<String>,
    /// Linear grid of damper viscosities, LO:HI:COUNT; needs --eps.
    #[arg(long, value_name = "LO:HI:COUNT", requires = "eps")]
    param_range: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct BoundaryArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    eps: f64,
    /// Real range LO:HI; defaults to a box around the spectrum.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
    re: Option<String>,
    /// Imaginary range LO:HI.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
    im: Option<String>,
    /// Number of vertical lines.
    #[arg(long, default_value_t = 100)]
    columns: usize,
    /// Sample heights per line before bisection.
    #[arg(long, default_value_t = 400)]
    rows: usize,
}

fn parse_weights(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad weight '{p}'")))
        .collect::<Result<_, _>>()?;
    let w: [f64; 3] = parts.try_into().map_err(|_| "expected three comma-separated weights".to_string())?;
    if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || w.iter().all(|&x| x == 0.0) {
        return Err("weights must be nonnegative, finite and not all zero".into());
    }
    Ok(w)
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("{what} must look like LO:HI, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(CliError::Usage(format!("{what} range {s} is empty")));
    }
    Ok((a, b))
}

/// `LO:HI:COUNT` on a linear or logarithmic scale.
fn parse_range(s: &str, log: bool) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("range must look like LO:HI:COUNT, got '{s}'"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !(lo.is_finite() && hi.is_finite()) || lo > hi || (count > 1 && lo == hi) {
        return Err(CliError::Usage(format!("range {s} is empty")));
    }
    if log && lo <= 0.0 {
        return Err(CliError::Usage("a logarithmic range needs a positive lower end".into()));
    }
    Ok((0..count)
        .map(|i| {
            let frac = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
            match (i, log) {
                (0, _) => lo,
                _ if i + 1 == count => hi,
                (_, true) => lo * (hi / lo).powf(frac),
                (_, false) => lo + (hi - lo) * frac,
            }
        })
        .collect())
}

fn exit_for(records: &[RunRecord]) -> ExitCode {
    if records.iter().all(RunRecord::converged) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, CliError> {
    let problem = args.problem.build()?;
    let record = run(&problem, &args.problem.id(), &args.solver.options(args.eps, args.alg))?;
    println!("{}", record.to_json()?);
    Ok(exit_for(std::slice::from_ref(&record)))
}

fn failed_record(id: String, opts: &RunOptions) -> RunRecord {
    RunRecord {
        problem: id,
        eps: opts.eps,
        algorithm: opts.algorithm,
        strategy: Strategy::None,
        restarts: opts.restarts,
        alpha: None,
        z: None,
        iterations: 0,
        wall_time_ms: 0.0,
        status: RunStatus::Failed,
        oracle_alpha: None,
        error_vs_oracle: None,
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let spec_axis = match (&args.eps_range, &args.param_range) {
        (Some(r), _) => parse_range(r, true)?.into_iter().map(|e| (e, None)).collect::<Vec<_>>(),
        (None, Some(r)) => {
            let eps = args.eps.ok_or_else(|| CliError::Usage("--param-range needs --eps".into()))?;
            parse_range(r, false)?.into_iter().map(|nu| (eps, Some(nu))).collect()
        }
        (None, None) => return Err(CliError::Usage("give --eps-range or --param-range".into())),
    };
    if args.param_range.is_some() && !args.problem.gen.as_ref().is_some_and(GenSpec::is_damping) {
        return Err(CliError::Usage("--param-range needs a damping problem from --gen".into()));
    }

    // one problem per distinct parameter value
    let base = args.problem.build()?;
    let jobs: Vec<(f64, Option<f64>, Algorithm)> =
        spec_axis.iter().flat_map(|&(eps, nu)| args.alg.iter().map(move |&a| (eps, nu, a))).collect();
    let results: Vec<Result<RunRecord, CliError>> = jobs
        .par_iter()
        .map(|&(eps, nu, alg)| {
            let opts = args.solver.options(eps, alg);
            let (problem, id) = match (nu, &args.problem.gen) {
                (Some(nu), Some(g)) => {
                    let spec = g.with_viscosity(nu)?;
                    (Problem::from_spec(&spec, args.problem.weights)?, spec.to_string())
                }
                _ => (base.clone(), args.problem.id()),
            };
            match run(&problem, &id, &opts) {
                Err(e @ (CliError::Usage(_) | CliError::Spec(_))) => Err(e),
                Err(e) => {
                    eprintln!("psa: eps={eps} alg={}: {e}", alg.as_str());
                    Ok(failed_record(id, &opts))
                }
                ok => ok,
            }
        })
        .collect();
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let stdout = io::stdout().lock();
    match args.format {
        Format::Csv => write_csv(stdout, &records)?,
        Format::Json => write_json_lines(stdout, &records)?,
    }
    Ok(exit_for(&records))
}

fn cmd_boundary(args: BoundaryArgs) -> Result<ExitCode, CliError> {
    let problem = args.problem.build()?;
    let t = problem.function()?;
    let region = match (&args.re, &args.im) {
        (Some(re), Some(im)) => {
            let (a, b) = parse_pair(re, "--re")?;
            let (c, d) = parse_pair(im, "--im")?;
            Region::new(a, b, c, d, 2)?
        }
        (None, None) => match &problem {
            Problem::Matrix(a) => Region::for_matrix(a, args.eps, 2)?,
            Problem::Function(t) => Region::around_spectrum(t, args.eps, 2)?,
        },
        _ => return Err(CliError::Usage("give both --re and --im or neither".into())),
    };
    let points = boundary::boundary_points(&t, args.eps, &region, args.columns, args.rows)?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["x", "y"])?;
    for (x, y) in points {
        w.write_record([format!("{x:?}"), format!("{y:?}")])?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("PSA_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("PSA_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}

const COMMANDS: [&str; 8] = ["run", "sweep", "boundary", "help", "-h", "--help", "-V", "--version"];

fn main() -> ExitCode {
    let mut argv: Vec<String> = std::env::args().collect();
    if argv.len() > 1 && !COMMANDS.contains(&argv[1].as_str()) {
        argv.insert(1, "run".into());
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Boundary(a) => cmd_boundary(a),
    });
    match outcome {
        Ok(code) => {
            let _ = io::stdout().flush();
            code
        }
        Err(e) => {
            eprintln!("psa: {e}");
            ExitCode::from(1)
        }
    }
}
