//! Fixed-point iterations for the pseudospectral abscissa.
//!
//! Each iteration takes the rightmost eigenvalue of the currently perturbed
//! problem, then rebuilds a unit rank-one perturbation from the smallest
//! singular triple at that point. Four variants are provided:
//!
//! * [`fp_nep`] perturbs every weighted block of `T`;
//! * [`fp_nep_const`] perturbs only a constant last block;
//! * [`fp_nep_scaled`] perturbs the normalized function `T(z)/g(z)`;
//! * [`fp_matrix`] is the plain matrix case `zI - A`.
//!
//! [`run_with_restarts`] runs several of these from the best-scoring
//! eigenvalues and keeps the rightmost result.

use thiserror::Error;

use crate::approx::{self, ApproxError, InitStrategy};
use crate::nep::{
    self, gamma, rbvt_check, MatrixFunction, NepError, Perturbation, RbvtReport, RbvtTolerances,
    ScalarFunction,
};
use crate::numkernel::{
    dot, eigenvalues, min_singular_triple, phase, rightmost, scale, CVec, ComplexMatrix,
    KernelError, TieRule, C64,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixedPointError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Nep(#[from] NepError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("every restart failed: {}", .0.join("; "))]
    AllRestartsFailed(Vec<String>),
}

pub type Result<T, E = FixedPointError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Termination {
    /// `|z_k - z_{k-1}| < tol`
    #[default]
    AbsoluteComplex,
    /// `|Re z_k - Re z_{k-1}| < tol * max(1, |Re z_{k-1}|)`
    RelativeReal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointConfig {
    pub eps: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub termination: Termination,
    pub tie_rule: TieRule,
    pub restarts: usize,
    /// Tolerance of the inner loop of the scaled iteration; `tol / 10` if unset.
    pub inner_tol: Option<f64>,
    pub inner_max: usize,
}

impl FixedPointConfig {
    /// Defaults for matrix-valued functions.
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            tol: 1e-8,
            max_iter: 300,
            termination: Termination::AbsoluteComplex,
            tie_rule: TieRule::LargestImag,
            restarts: 1,
            inner_tol: None,
            inner_max: 50,
        }
    }

    /// Defaults for plain matrices.
    pub fn matrix(eps: f64) -> Self {
        Self { termination: Termination::RelativeReal, ..Self::new(eps) }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_termination(mut self, termination: Termination) -> Self {
        self.termination = termination;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(FixedPointError::Config(format!("eps must be finite and nonnegative, got {}", self.eps)));
        }
        if !(self.tol > 0.0) {
            return Err(FixedPointError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.restarts == 0 {
            return Err(FixedPointError::Config("restarts must be at least 1".into()));
        }
        if self.max_iter == 0 || self.inner_max == 0 {
            return Err(FixedPointError::Config("iteration caps must be positive".into()));
        }
        Ok(())
    }

    fn inner_tol(&self) -> f64 {
        self.inner_tol.unwrap_or(self.tol / 10.0)
    }

    fn terminated(&self, prev: C64, next: C64) -> bool {
        match self.termination {
            Termination::AbsoluteComplex => (next - prev).norm() < self.tol,
            Termination::RelativeReal => (next.re - prev.re).abs() < self.tol * prev.re.abs().max(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIter,
    Stagnated,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIter => "max_iter",
            Status::Stagnated => "stagnated",
            Status::Failed => "failed",
        }
    }
}

/// What the update step saw at an iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionSummary {
    /// Smallest singular value of `T(z_k)`.
    pub sigma: f64,
    /// The quantity whose phase fixed the new left vector.
    pub phase_value: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterateTrace {
    /// `z_0, z_1, ...`; the starting point comes first.
    pub iterates: Vec<C64>,
    pub values: Vec<f64>,
    pub directions: Vec<DirectionSummary>,
    pub status: Status,
    pub message: Option<String>,
    /// Scaled-algorithm steps whose inner scale iteration did not settle and
    /// fell back to the scale of the previous iterate.
    pub frozen_steps: usize,
}

impl IterateTrace {
    fn start(z0: C64) -> Self {
        Self { iterates: vec![z0], values: vec![z0.re], directions: Vec::new(), status: Status::MaxIter, message: None, frozen_steps: 0 }
    }

    fn push(&mut self, z: C64) {
        self.iterates.push(z);
        self.values.push(z.re);
    }

    /// Number of eigenvalue solves performed.
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn last(&self) -> C64 {
        *self.iterates.last().expect("trace starts with z0")
    }

    fn fail(mut self, msg: impl ToString) -> Self {
        self.status = Status::Failed;
        self.message = Some(msg.to_string());
        self
    }

    /// Period-two oscillation over the last `window` iterates.
    fn oscillating(&self, window: usize) -> bool {
        let z = &self.iterates;
        if z.len() < window + 1 {
            return false;
        }
        let close = |a: C64, b: C64| (a - b).norm() <= 1e-6 * a.norm().max(1.0);
        let k = z.len() - 1;
        !close(z[k], z[k - 1]) && (k + 2 - window..=k).all(|i| close(z[i], z[i - 2]))
    }
}

#[derive(Debug, Clone)]
pub struct PsaResult {
    pub alpha: f64,
    pub z: C64,
    /// Diagnostics at `z`; absent if they could not be computed.
    pub rbvt: Option<RbvtReport>,
    /// Index of the winning run in `traces`.
    pub restart_index: usize,
    pub traces: Vec<IterateTrace>,
}

impl PsaResult {
    pub fn trace(&self) -> &IterateTrace {
        &self.traces[self.restart_index]
    }

    pub fn status(&self) -> Status {
        self.trace().status
    }

    pub fn iterations(&self) -> usize {
        self.trace().iterations()
    }

    pub fn converged(&self) -> bool {
        self.status() == Status::Converged
    }

    fn from_trace(t: &MatrixFunction, cfg: &FixedPointConfig, trace: IterateTrace) -> Self {
        let z = trace.last();
        Self {
            alpha: z.re,
            z,
            rbvt: rbvt_check(t, z, cfg.eps, RbvtTolerances::for_run(cfg.eps, cfg.tol)).ok(),
            restart_index: 0,
            traces: vec![trace],
        }
    }
}

const STAGNATION_WINDOW: usize = 20;

/// Rank-one update `u v*` together with the per-block coefficients.
struct Update {
    u: CVec,
    v: CVec,
    summary: DirectionSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Blocks,
    Scaled,
}

/// New left/right vectors at `z`, rotated so that the relevant derivative
/// quantity is real negative.
fn update_at(t: &MatrixFunction, z: C64, variant: Variant) -> Result<Update> {
    let tr = min_singular_triple(&t.value(z)?)?;
    let gm = gamma(t, z)?;
    let a = dot(&tr.u, &t.derivative(z)?.mul_vec(&tr.v));
    let c = match variant {
        Variant::Blocks => a + gm.gdot * (-tr.sigma / (gm.g * gm.g)),
        Variant::Scaled => (a - gm.gdot * (tr.sigma / (gm.g * gm.g))) / gm.g,
    };
    Ok(Update {
        u: scale(&tr.u, -phase(c)),
        v: tr.v,
        summary: DirectionSummary { sigma: tr.sigma, phase_value: c },
    })
}

fn block_direction(t: &MatrixFunction, z: C64, up: &Update) -> Result<Perturbation> {
    let gm = gamma(t, z)?;
    let coeffs = t
        .terms()
        .iter()
        .zip(t.weights())
        .map(|(term, &w)| term.func.eval(z).conj() * (w / gm.g))
        .collect();
    Ok(Perturbation::RankOne { u: up.u.clone(), v: up.v.clone(), coeffs })
}

/// Rightmost eigenvalue of `t`. Polynomials use the companion form; other
/// functions track the eigenvalue nearest `guess` by Newton's method.
fn rightmost_eigenvalue(t: &MatrixFunction, guess: C64, tie: TieRule) -> Result<C64> {
    if t.is_polynomial() {
        let ev = t.eigenvalues()?;
        Ok(ev[rightmost(&ev, tie)?])
    } else {
        Ok(nep::refine_eigenvalue(t, guess, 1e-15, 100)?)
    }
}

fn default_nep_start(t: &MatrixFunction) -> Result<C64> {
    if !t.is_polynomial() {
        return Err(FixedPointError::Precondition(
            "a starting eigenvalue is required when T is not polynomial".into(),
        ));
    }
    let ev = t.eigenvalues()?;
    ev.iter()
        .copied()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .max_by(|a, b| a.im.total_cmp(&b.im))
        .ok_or_else(|| FixedPointError::Precondition("T has no finite eigenvalues".into()))
}

fn run_blocks(t: &MatrixFunction, cfg: &FixedPointConfig, z0: C64) -> IterateTrace {
    let eps = cfg.eps;
    let mut trace = IterateTrace::start(z0);
    let mut z_prev = z0;
    let mut dir = match update_at(t, z0, Variant::Blocks).and_then(|up| block_direction(t, z0, &up)) {
        Ok(d) => d,
        Err(e) => return trace.fail(e),
    };
    for _ in 0..cfg.max_iter {
        let z = match t.perturbed(&dir, eps).map_err(Into::into).and_then(|p| rightmost_eigenvalue(&p, z_prev, cfg.tie_rule)) {
            Ok(z) => z,
            Err(e) => return trace.fail(e),
        };
        trace.push(z);
        if cfg.terminated(z_prev, z) {
            trace.status = Status::Converged;
            return trace;
        }
        if trace.oscillating(STAGNATION_WINDOW) {
            trace.status = Status::Stagnated;
            trace.message = Some("iterates alternate between two points".into());
            return trace;
        }
        match update_at(t, z, Variant::Blocks).and_then(|up| {
            let d = block_direction(t, z, &up)?;
            Ok((d, up.summary))
        }) {
            Ok((d, s)) => {
                dir = d;
                trace.directions.push(s);
            }
            Err(e) => return trace.fail(e),
        }
        z_prev = z;
    }
    trace.status = Status::MaxIter;
    trace
}

/// Iteration over perturbations of all weighted coefficient blocks. Without
/// `z0` it starts from the eigenvalue of `T` with the largest imaginary part.
pub fn fp_nep(t: &MatrixFunction, cfg: &FixedPointConfig, z0: Option<C64>) -> Result<PsaResult> {
    cfg.validate()?;
    let z0 = match z0 {
        Some(z) => z,
        None => default_nep_start(t)?,
    };
    Ok(PsaResult::from_trace(t, cfg, run_blocks(t, cfg, z0)))
}

fn check_constant_block(t: &MatrixFunction) -> Result<()> {
    let k = t.num_terms();
    let last_is_one = matches!(
        t.terms()[k - 1].func,
        ScalarFunction::Monomial { power: 0, coeff } if coeff == C64::new(1.0, 0.0)
    );
    let w = t.weights();
    if !last_is_one || w[..k - 1].iter().any(|&x| x != 0.0) || w[k - 1] != 1.0 {
        return Err(FixedPointError::Precondition(
            "the last term must be the constant 1 with weights (0, ..., 0, 1)".into(),
        ));
    }
    Ok(())
}

/// Iteration over constant perturbations of the last block `T_k`, which must
/// carry the scalar function 1 and the only nonzero weight (equal to 1).
pub fn fp_nep_const(t: &MatrixFunction, cfg: &FixedPointConfig, z0: Option<C64>) -> Result<PsaResult> {
    check_constant_block(t)?;
    // With these weights the general update reduces to u v* on T_k.
    fp_nep(t, cfg, z0)
}

/// Rightmost `z` with `det(T(z) + eps g(z) D) = 0`, found by freezing
/// `s = g(z)`, solving the resulting polynomial problem and updating `s`.
/// Rightmost eigenvalue of `T(z)/g(z) + eps * u v*`, found by freezing the
/// scale `g` and updating it until it settles. When the frozen eigenvalue keeps
/// switching branches, the first solve (scale frozen at `z_prev`) is used.
fn scaled_rightmost(
    t: &MatrixFunction,
    u: &[C64],
    v: &[C64],
    z_prev: C64,
    cfg: &FixedPointConfig,
) -> Result<(C64, bool)> {
    let d = ComplexMatrix::outer(u, v);
    let solve = |s: f64, guess: C64| -> Result<C64> {
        let frozen = t.with_term(ScalarFunction::monomial(0), d.scaled(C64::new(cfg.eps * s, 0.0)))?;
        rightmost_eigenvalue(&frozen, guess, cfg.tie_rule)
    };
    let mut s = gamma(t, z_prev)?.g;
    let first = solve(s, z_prev)?;
    let mut z = first;
    for step in 0..cfg.inner_max {
        if step > 0 {
            z = solve(s, z)?;
        }
        let s_new = gamma(t, z)?.g;
        if (s_new - s).abs() < cfg.inner_tol() * s {
            return Ok((z, true));
        }
        s = s_new;
    }
    Ok((first, false))
}

/// Iteration over constant perturbations of the normalized function
/// `T(z) / g(z)`.
pub fn fp_nep_scaled(t: &MatrixFunction, cfg: &FixedPointConfig, z0: Option<C64>) -> Result<PsaResult> {
    cfg.validate()?;
    let z0 = match z0 {
        Some(z) => z,
        None => default_nep_start(t)?,
    };
    let mut trace = IterateTrace::start(z0);
    let mut up = match update_at(t, z0, Variant::Scaled) {
        Ok(up) => up,
        Err(e) => return Ok(PsaResult::from_trace(t, cfg, trace.fail(e))),
    };
    let mut z_prev = z0;
    trace.status = Status::MaxIter;
    for _ in 0..cfg.max_iter {
        let z = match scaled_rightmost(t, &up.u, &up.v, z_prev, cfg) {
            Ok((z, settled)) => {
                trace.frozen_steps += usize::from(!settled);
                z
            }
            Err(e) => {
                trace = trace.fail(e);
                break;
            }
        };
        trace.push(z);
        if cfg.terminated(z_prev, z) {
            trace.status = Status::Converged;
            break;
        }
        if trace.oscillating(STAGNATION_WINDOW) {
            trace.status = Status::Stagnated;
            trace.message = Some("iterates alternate between two points".into());
            break;
        }
        match update_at(t, z, Variant::Scaled) {
            Ok(next) => {
                trace.directions.push(next.summary);
                up = next;
            }
            Err(e) => {
                trace = trace.fail(e);
                break;
            }
        }
        z_prev = z;
    }
    Ok(PsaResult::from_trace(t, cfg, trace))
}

fn matrix_update(tf: &MatrixFunction, z: C64) -> Result<Update> {
    let tr = min_singular_triple(&tf.value(z)?)?;
    let c = dot(&tr.u, &tr.v);
    Ok(Update { u: scale(&tr.u, phase(c)), v: tr.v, summary: DirectionSummary { sigma: tr.sigma, phase_value: c } })
}

/// Iteration for a plain matrix `A`. Without `z0` the start is grown from the
/// best first-order eigenvalue along its second-order direction.
pub fn fp_matrix(a: &ComplexMatrix, cfg: &FixedPointConfig, z0: Option<C64>) -> Result<PsaResult> {
    cfg.validate()?;
    let tf = MatrixFunction::matrix(a)?;
    let z0 = match z0 {
        Some(z) => z,
        None => approx::init_point_matrix(a, cfg.eps, InitStrategy::Hybrid)?.z0,
    };
    let eps = C64::new(cfg.eps, 0.0);
    let mut trace = IterateTrace::start(z0);
    let mut z_prev = z0;
    let mut up = match matrix_update(&tf, z0) {
        Ok(up) => up,
        Err(e) => return Ok(PsaResult::from_trace(&tf, cfg, trace.fail(e))),
    };
    trace.status = Status::MaxIter;
    for _ in 0..cfg.max_iter {
        let mut b = a.clone();
        b.add_outer(eps, &up.u, &up.v);
        let z = match eigenvalues(&b).map_err(FixedPointError::from).and_then(|ev| Ok(ev[rightmost(&ev, cfg.tie_rule)?])) {
            Ok(z) => z,
            Err(e) => {
                trace = trace.fail(e);
                break;
            }
        };
        trace.push(z);
        if cfg.terminated(z_prev, z) {
            trace.status = Status::Converged;
            break;
        }
        if trace.oscillating(STAGNATION_WINDOW) {
            trace.status = Status::Stagnated;
            trace.message = Some("iterates alternate between two points".into());
            break;
        }
        match matrix_update(&tf, z) {
            Ok(next) => {
                trace.directions.push(next.summary);
                up = next;
            }
            Err(e) => {
                trace = trace.fail(e);
                break;
            }
        }
        z_prev = z;
    }
    Ok(PsaResult::from_trace(&tf, cfg, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NepAlgorithm {
    Blocks,
    Constant,
    Scaled,
}

#[derive(Debug, Clone, Copy)]
pub enum Problem<'a> {
    Matrix(&'a ComplexMatrix),
    Nep(&'a MatrixFunction, NepAlgorithm),
}

/// Runs up to `cfg.restarts` iterations from the best-scoring eigenvalues and
/// keeps the rightmost outcome. Converged runs take precedence over the rest.
/// The request is clamped to the number of usable eigenvalues.
pub fn run_with_restarts(problem: Problem<'_>, cfg: &FixedPointConfig) -> Result<PsaResult> {
    cfg.validate()?;
    let runs: Vec<Result<PsaResult>> = match problem {
        Problem::Matrix(a) => {
            let starts = approx::init_points_ranked(a, cfg.eps, cfg.restarts)?;
            starts.iter().map(|ip| fp_matrix(a, cfg, Some(ip.z0))).collect()
        }
        Problem::Nep(t, alg) => {
            let fo = approx::first_order_scores_nep(t, cfg.eps)?;
            let starts: Vec<C64> = fo.ranked().into_iter().take(cfg.restarts).map(|i| fo.per_eig[i].mu).collect();
            let run = |z0| match alg {
                NepAlgorithm::Blocks => fp_nep(t, cfg, Some(z0)),
                NepAlgorithm::Constant => fp_nep_const(t, cfg, Some(z0)),
                NepAlgorithm::Scaled => fp_nep_scaled(t, cfg, Some(z0)),
            };
            starts.into_iter().map(run).collect()
        }
    };

    let mut traces = Vec::with_capacity(runs.len());
    let mut results = Vec::with_capacity(runs.len());
    let mut errors = Vec::new();
    for r in runs {
        match r {
            Ok(res) => {
                traces.push(res.trace().clone());
                results.push(Some(res));
            }
            Err(e) => {
                errors.push(e.to_string());
                traces.push(IterateTrace::start(C64::new(f64::NAN, f64::NAN)).fail(e));
                results.push(None);
            }
        }
    }
    let rank = |r: &PsaResult| match r.status() {
        Status::Converged => 2,
        Status::Failed => 0,
        _ => 1,
    };
    let mut best: Option<usize> = None;
    for (i, r) in results.iter().enumerate() {
        let Some(r) = r else { continue };
        if rank(r) == 0 {
            continue;
        }
        let better = match best.and_then(|b| results[b].as_ref()) {
            None => true,
            Some(b) => (rank(r), r.alpha) > (rank(b), b.alpha),
        };
        if better {
            best = Some(i);
        }
    }
    let Some(best) = best else {
        let mut msgs = errors;
        msgs.extend(traces.iter().filter_map(|t| t.message.clone()));
        return Err(FixedPointError::AllRestartsFailed(msgs));
    };
    let mut out = results[best].take().expect("chosen run exists");
    out.restart_index = best;
    out.traces = traces;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn normal_matrix_is_exact() {
        let a = ComplexMatrix::from_diag(&[c(0.5, 1.0), c(-1.0, 0.0), c(0.2, -3.0)]).unwrap();
        let r = fp_matrix(&a, &FixedPointConfig::matrix(0.25), None).unwrap();
        assert!(r.converged());
        assert!(r.iterations() <= 2);
        assert!((r.alpha - 0.75).abs() < 1e-10);
    }

    #[test]
    fn scalar_nep_variants_agree() {
        let a = ComplexMatrix::from_rows(&[vec![c(0.1, 0.4)]]).unwrap();
        let t = MatrixFunction::matrix(&a).unwrap();
        let cfg = FixedPointConfig::new(0.5);
        for r in [
            fp_nep(&t, &cfg, None).unwrap(),
            fp_nep_scaled(&t, &cfg, None).unwrap(),
            fp_nep_const(&MatrixFunction::matrix_constant_block(&a).unwrap(), &cfg, None).unwrap(),
        ] {
            assert!(r.converged());
            assert!((r.z - c(0.6, 0.4)).norm() < 1e-12);
        }
    }

    #[test]
    fn const_variant_checks_weights() {
        let a = ComplexMatrix::identity(2);
        let t = MatrixFunction::matrix(&a).unwrap();
        assert!(matches!(fp_nep_const(&t, &FixedPointConfig::new(0.1), None), Err(FixedPointError::Precondition(_))));
    }

    #[test]
    fn bad_config_is_rejected() {
        let a = ComplexMatrix::identity(2);
        let cfg = FixedPointConfig::matrix(0.1).with_restarts(0);
        assert!(matches!(fp_matrix(&a, &cfg, None), Err(FixedPointError::Config(_))));
        let cfg = FixedPointConfig::matrix(0.1).with_tol(0.0);
        assert!(matches!(fp_matrix(&a, &cfg, None), Err(FixedPointError::Config(_))));
    }

    #[test]
    fn oscillation_detector() {
        let mut t = IterateTrace::start(c(0.0, 0.0));
        for k in 0..25 {
            t.push(if k % 2 == 0 { c(1.0, 0.0) } else { c(2.0, 0.0) });
        }
        assert!(t.oscillating(20));
        let mut t = IterateTrace::start(c(0.0, 0.0));
        for k in 0..25 {
            t.push(c(k as f64, 0.0));
        }
        assert!(!t.oscillating(20));
    }
}
