//! Executes one algorithm on one problem and packages the outcome.

use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use psa_core::approx::{self, InitStrategy};
use psa_core::fixedpoint::{self, FixedPointConfig, NepAlgorithm, PsaResult};
use psa_core::nep::MatrixFunction;
use psa_core::numkernel::{ComplexMatrix, C64};
use psa_core::oracle::{self, GridOptions, OracleResult, Region};
use psa_core::problems::{self, DampingSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::genspec::GenSpec;
use crate::record::{RunRecord, RunStatus, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    FpNep,
    FpNepConst,
    FpNepScaled,
    FpMatrix,
    FirstOrder,
    SecondOrder,
    Grid,
    Crisscross,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::FpNep => "fp-nep",
            Algorithm::FpNepConst => "fp-nep-const",
            Algorithm::FpNepScaled => "fp-nep-scaled",
            Algorithm::FpMatrix => "fp-matrix",
            Algorithm::FirstOrder => "first-order",
            Algorithm::SecondOrder => "second-order",
            Algorithm::Grid => "grid",
            Algorithm::Crisscross => "crisscross",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Grid,
    Crisscross,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum StartStrategy {
    #[default]
    Hybrid,
    First,
    Second,
}

impl From<StartStrategy> for InitStrategy {
    fn from(s: StartStrategy) -> Self {
        match s {
            StartStrategy::Hybrid => InitStrategy::Hybrid,
            StartStrategy::First => InitStrategy::First,
            StartStrategy::Second => InitStrategy::Second,
        }
    }
}

impl From<StartStrategy> for Strategy {
    fn from(s: StartStrategy) -> Self {
        match s {
            StartStrategy::Hybrid => Strategy::Hybrid,
            StartStrategy::First => Strategy::First,
            StartStrategy::Second => Strategy::Second,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Problem {
    Matrix(ComplexMatrix),
    Function(MatrixFunction),
}

impl Problem {
    /// Builds a generated problem. `weights` only applies to damping problems.
    pub fn from_spec(spec: &GenSpec, weights: Option<[f64; 3]>) -> Result<Self, CliError> {
        if weights.is_some() && !spec.is_damping() {
            return Err(CliError::Usage("--weights applies to damping problems only".into()));
        }
        Ok(match *spec {
            GenSpec::Grcar { n, k } => Problem::Matrix(problems::grcar(n, k)?),
            GenSpec::Kahan { n, theta } => {
                Problem::Matrix(problems::kahan(n, theta.unwrap_or_else(|| problems::kahan_default_theta(n)))?)
            }
            GenSpec::Random { n, c1, c2, seed } => Problem::Matrix(problems::random(n, c1, c2, seed)?),
            GenSpec::Damping { n, xi, k, nu, at } => {
                let mut d = DampingSpec::new(n, xi, k).with_weights(weights.unwrap_or([1.0; 3]));
                if nu != 0.0 {
                    d = d.with_damper(at, nu);
                }
                Problem::Function(problems::damping_function(&d)?)
            }
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let a = problems::load_matrix_market(path)?;
        if !a.is_square() {
            return Err(CliError::Usage(format!("{} is not square", path.display())));
        }
        Ok(Problem::Matrix(a))
    }

    fn matrix(&self, alg: Algorithm) -> Result<&ComplexMatrix, CliError> {
        match self {
            Problem::Matrix(a) => Ok(a),
            Problem::Function(_) => Err(CliError::Usage(format!("{} needs a plain matrix problem", alg.as_str()))),
        }
    }

    /// The problem as a matrix-valued function (`zI - A` for a matrix).
    pub fn function(&self) -> Result<MatrixFunction, CliError> {
        match self {
            Problem::Matrix(a) => Ok(MatrixFunction::matrix(a)?),
            Problem::Function(t) => Ok(t.clone()),
        }
    }

    fn config(&self, eps: f64) -> FixedPointConfig {
        match self {
            Problem::Matrix(_) => FixedPointConfig::matrix(eps),
            Problem::Function(_) => FixedPointConfig::new(eps),
        }
    }

    fn region(&self, eps: f64, grid_n: usize) -> Result<Region, CliError> {
        Ok(match self {
            Problem::Matrix(a) => Region::for_matrix(a, eps, grid_n)?,
            Problem::Function(t) => Region::around_spectrum(t, eps, grid_n)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub eps: f64,
    pub algorithm: Algorithm,
    pub restarts: usize,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub strategy: StartStrategy,
    pub oracle: Option<OracleKind>,
    /// Points per axis of the coarse grid used by the grid oracle.
    pub grid_n: usize,
}

impl RunOptions {
    pub fn new(eps: f64, algorithm: Algorithm) -> Self {
        Self { eps, algorithm, restarts: 1, tol: None, max_iter: None, strategy: StartStrategy::Hybrid, oracle: None, grid_n: 61 }
    }
}

struct Outcome {
    z: C64,
    iterations: usize,
    status: RunStatus,
    strategy: Strategy,
}

impl Outcome {
    fn from_fixed_point(r: PsaResult, strategy: Strategy) -> Self {
        Self { z: r.z, iterations: r.iterations(), status: r.status().into(), strategy }
    }

    fn from_oracle(r: OracleResult) -> Self {
        Self { z: C64::new(r.alpha, r.z.im), iterations: 0, status: RunStatus::Converged, strategy: Strategy::None }
    }
}

fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn execute(problem: &Problem, opts: &RunOptions) -> Result<Outcome, CliError> {
    let eps = opts.eps;
    let alg = opts.algorithm;
    let mut cfg = problem.config(eps).with_restarts(opts.restarts);
    if let Some(tol) = opts.tol {
        cfg = cfg.with_tol(tol);
    }
    if let Some(m) = opts.max_iter {
        cfg = cfg.with_max_iter(m);
    }
    let nep_alg = match alg {
        Algorithm::FpNep => Some(NepAlgorithm::Blocks),
        Algorithm::FpNepConst => Some(NepAlgorithm::Constant),
        Algorithm::FpNepScaled => Some(NepAlgorithm::Scaled),
        _ => None,
    };
    if let Some(kind) = nep_alg {
        let t = match (problem, kind) {
            (Problem::Matrix(a), NepAlgorithm::Constant) => MatrixFunction::matrix_constant_block(a)?,
            _ => problem.function()?,
        };
        if opts.restarts > 1 {
            let r = fixedpoint::run_with_restarts(fixedpoint::Problem::Nep(&t, kind), &cfg)?;
            return Ok(Outcome::from_fixed_point(r, Strategy::Restarts));
        }
        let r = match kind {
            NepAlgorithm::Blocks => fixedpoint::fp_nep(&t, &cfg, None)?,
            NepAlgorithm::Constant => fixedpoint::fp_nep_const(&t, &cfg, None)?,
            NepAlgorithm::Scaled => fixedpoint::fp_nep_scaled(&t, &cfg, None)?,
        };
        return Ok(Outcome::from_fixed_point(r, Strategy::First));
    }

    match alg {
        Algorithm::FpMatrix => {
            let a = problem.matrix(alg)?;
            if opts.restarts > 1 {
                let r = fixedpoint::run_with_restarts(fixedpoint::Problem::Matrix(a), &cfg)?;
                return Ok(Outcome::from_fixed_point(r, Strategy::Restarts));
            }
            let z0 = approx::init_point_matrix(a, eps, opts.strategy.into())?.z0;
            Ok(Outcome::from_fixed_point(fixedpoint::fp_matrix(a, &cfg, Some(z0))?, opts.strategy.into()))
        }
        Algorithm::FirstOrder => {
            let report = match problem {
                Problem::Matrix(a) => approx::first_order_scores_matrix(a, eps)?,
                Problem::Function(t) => approx::first_order_scores_nep(t, eps)?,
            };
            let z = C64::new(report.estimate, report.init_point.im);
            Ok(Outcome { z, iterations: 0, status: RunStatus::Converged, strategy: Strategy::None })
        }
        Algorithm::SecondOrder => {
            let report = approx::second_order_estimate(problem.matrix(alg)?, eps)?;
            let z = C64::new(report.estimate, report.init_point.im);
            Ok(Outcome { z, iterations: 0, status: RunStatus::Converged, strategy: Strategy::None })
        }
        Algorithm::Grid => Ok(Outcome::from_oracle(grid(problem, eps, opts.grid_n)?)),
        Algorithm::Crisscross => Ok(Outcome::from_oracle(oracle::crisscross_matrix(problem.matrix(alg)?, eps, 1e-12)?)),
        Algorithm::FpNep | Algorithm::FpNepConst | Algorithm::FpNepScaled => unreachable!("handled above"),
    }
}

fn grid(problem: &Problem, eps: f64, grid_n: usize) -> Result<OracleResult, CliError> {
    let t = problem.function()?;
    let region = problem.region(eps, grid_n)?;
    Ok(oracle::grid_psa_with(&t, eps, &region, GridOptions::default())?)
}

/// Reference value for `--oracle`.
pub fn oracle_alpha(problem: &Problem, eps: f64, kind: OracleKind, grid_n: usize) -> Result<f64, CliError> {
    Ok(match kind {
        OracleKind::Grid => grid(problem, eps, grid_n)?.alpha,
        OracleKind::Crisscross => {
            oracle::crisscross_matrix(problem.matrix(Algorithm::Crisscross)?, eps, 1e-12)?.alpha
        }
    })
}

/// Runs the selected algorithm, plus the oracle if one is requested.
pub fn run(problem: &Problem, id: &str, opts: &RunOptions) -> Result<RunRecord, CliError> {
    if !(opts.eps.is_finite() && opts.eps >= 0.0) {
        return Err(CliError::Usage(format!("eps must be finite and nonnegative, got {}", opts.eps)));
    }
    if opts.restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    if opts.grid_n < 2 {
        return Err(CliError::Usage("--grid-n must be at least 2".into()));
    }
    let start = Instant::now();
    let out = execute(problem, opts)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let ok = finite(out.z);
    let alpha = ok.then_some(out.z.re);
    let oracle_alpha = match opts.oracle {
        Some(kind) => Some(oracle_alpha(problem, opts.eps, kind, opts.grid_n)?),
        None => None,
    };
    let error_vs_oracle = alpha.zip(oracle_alpha).map(|(a, o)| (a - o).abs());
    Ok(RunRecord {
        problem: id.to_string(),
        eps: opts.eps,
        algorithm: opts.algorithm,
        strategy: out.strategy,
        restarts: opts.restarts,
        alpha,
        z: ok.then(|| out.z.into()),
        iterations: out.iterations,
        wall_time_ms,
        status: if ok { out.status } else { RunStatus::Failed },
        oracle_alpha,
        error_vs_oracle,
    })
}
