//! Matrix-valued functions `T(z) = sum_j t_j(z) T_j` with perturbation weights,
//! and the pointwise quantities built on them: backward error, pseudospectrum
//! membership, eigenvalue sensitivity, optimal rank-one directions and the
//! boundary diagnostics used to certify rightmost points.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::numkernel::{
    self, dot, min_singular_triple, norm2, phase, scale, CVec, ComplexMatrix, KernelError,
    SingularTriple, C64,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NepError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("a matrix function needs at least one term")]
    NoTerms,
    #[error("term {index} is {found}x{found}, expected {expected}x{expected}")]
    TermSize { index: usize, expected: usize, found: usize },
    #[error("expected {expected} weights, got {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("weight {index} must be finite and nonnegative")]
    BadWeight { index: usize },
    #[error("evaluation point is not finite")]
    NonFinitePoint,
    #[error("weighted scale vanishes at {z}")]
    ZeroScale { z: C64 },
    #[error("y*T'(z)x vanishes at {z}: eigenvalue is defective or nearly so")]
    Defective { z: C64 },
    #[error("smallest singular value is not simple at {z}")]
    Degenerate { z: C64 },
    #[error("matrix function is not polynomial")]
    NotPolynomial,
    #[error("perturbation has {found} blocks, expected {expected}")]
    BlockCount { expected: usize, found: usize },
    #[error("eigenvalue refinement did not converge from {start}")]
    RefinementFailed { start: C64 },
}

pub type Result<T, E = NepError> = std::result::Result<T, E>;

type ComplexFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Scalar coefficient function `t(z)` together with its derivative.
#[derive(Clone)]
pub enum ScalarFunction {
    /// `coeff * z^power`
    Monomial { power: u32, coeff: C64 },
    /// `coeff * exp(rate * z)`
    Exponential { rate: f64, coeff: C64 },
    /// User-supplied function and derivative.
    Custom { f: ComplexFn, df: ComplexFn },
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Monomial { power, coeff } => write!(f, "{coeff} z^{power}"),
            Self::Exponential { rate, coeff } => write!(f, "{coeff} exp({rate} z)"),
            Self::Custom { .. } => f.write_str("custom"),
        }
    }
}

impl ScalarFunction {
    pub fn monomial(power: u32) -> Self {
        Self::Monomial { power, coeff: C64::new(1.0, 0.0) }
    }

    pub fn constant(c: C64) -> Self {
        Self::Monomial { power: 0, coeff: c }
    }

    pub fn exponential(rate: f64) -> Self {
        Self::Exponential { rate, coeff: C64::new(1.0, 0.0) }
    }

    /// Wraps a user pair. In debug builds the derivative is spot-checked
    /// against central differences.
    pub fn custom(
        f: impl Fn(C64) -> C64 + Send + Sync + 'static,
        df: impl Fn(C64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        let out = Self::Custom { f: Arc::new(f), df: Arc::new(df) };
        debug_assert!(
            [C64::new(0.31, 0.17), C64::new(-0.7, 1.3)].iter().all(|&z| out.derivative_consistent(z)),
            "custom scalar function derivative disagrees with finite differences"
        );
        out
    }

    /// Multiplies the function by a constant.
    pub fn scaled(self, c: C64) -> Self {
        match self {
            Self::Monomial { power, coeff } => Self::Monomial { power, coeff: coeff * c },
            Self::Exponential { rate, coeff } => Self::Exponential { rate, coeff: coeff * c },
            Self::Custom { f, df } => Self::Custom {
                f: Arc::new(move |z| c * f(z)),
                df: Arc::new(move |z| c * df(z)),
            },
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        match self {
            Self::Monomial { power, coeff } => coeff * z.powu(*power),
            Self::Exponential { rate, coeff } => coeff * (z * rate).exp(),
            Self::Custom { f, .. } => f(z),
        }
    }

    pub fn deriv(&self, z: C64) -> C64 {
        match self {
            Self::Monomial { power: 0, .. } => C64::new(0.0, 0.0),
            Self::Monomial { power, coeff } => coeff * (*power as f64) * z.powu(power - 1),
            Self::Exponential { rate, coeff } => coeff * rate * (z * rate).exp(),
            Self::Custom { df, .. } => df(z),
        }
    }

    /// Central-difference check of the derivative at `z` with step `1e-6`.
    pub fn derivative_consistent(&self, z: C64) -> bool {
        let h = 1e-6;
        let fd = (self.eval(z + h) - self.eval(z - h)) / (2.0 * h);
        let d = self.deriv(z);
        (fd - d).norm() <= 1e-6 * d.norm().max(1.0)
    }

    fn power(&self) -> Option<(u32, C64)> {
        match self {
            Self::Monomial { power, coeff } => Some((*power, *coeff)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Term {
    pub func: ScalarFunction,
    pub coeff: ComplexMatrix,
}

/// `T(z) = sum_j t_j(z) T_j` with nonnegative weights on the coefficient blocks.
#[derive(Debug, Clone)]
pub struct MatrixFunction {
    terms: Vec<Term>,
    weights: Vec<f64>,
    n: usize,
}

impl MatrixFunction {
    pub fn new(terms: Vec<(ScalarFunction, ComplexMatrix)>, weights: Vec<f64>) -> Result<Self> {
        let n = terms.first().ok_or(NepError::NoTerms)?.1.nrows();
        for (index, (_, m)) in terms.iter().enumerate() {
            if !m.is_square() || m.nrows() != n {
                return Err(NepError::TermSize { index, expected: n, found: m.nrows() });
            }
        }
        if weights.len() != terms.len() {
            return Err(NepError::WeightCount { expected: terms.len(), found: weights.len() });
        }
        if let Some(index) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(NepError::BadWeight { index });
        }
        let terms = terms.into_iter().map(|(func, coeff)| Term { func, coeff }).collect();
        Ok(Self { terms, weights, n })
    }

    /// `zI - A` with only `A` perturbed.
    pub fn matrix(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(KernelError::NotSquare { rows: a.nrows(), cols: a.ncols() }.into());
        }
        Self::new(
            vec![
                (ScalarFunction::monomial(1), ComplexMatrix::identity(a.nrows())),
                (ScalarFunction::constant(C64::new(-1.0, 0.0)), a.clone()),
            ],
            vec![0.0, 1.0],
        )
    }

    /// `zI + (-A)` written with a constant last block, as expected by the
    /// constant-perturbation iteration.
    pub fn matrix_constant_block(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(KernelError::NotSquare { rows: a.nrows(), cols: a.ncols() }.into());
        }
        Self::new(
            vec![
                (ScalarFunction::monomial(1), ComplexMatrix::identity(a.nrows())),
                (ScalarFunction::monomial(0), a.scaled(C64::new(-1.0, 0.0))),
            ],
            vec![0.0, 1.0],
        )
    }

    /// `z^2 M + z C + K` with weights `(w_m, w_c, w_k)`.
    pub fn quadratic(
        m: &ComplexMatrix,
        c: &ComplexMatrix,
        k: &ComplexMatrix,
        weights: [f64; 3],
    ) -> Result<Self> {
        Self::new(
            vec![
                (ScalarFunction::monomial(2), m.clone()),
                (ScalarFunction::monomial(1), c.clone()),
                (ScalarFunction::monomial(0), k.clone()),
            ],
            weights.to_vec(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `sum_j t_j(z) T_j` for order 0, `sum_j t_j'(z) T_j` for order 1.
    pub fn evaluate(&self, z: C64, order: u8) -> Result<ComplexMatrix> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(NepError::NonFinitePoint);
        }
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for t in &self.terms {
            let s = if order == 0 { t.func.eval(z) } else { t.func.deriv(z) };
            if s != C64::new(0.0, 0.0) {
                out.add_scaled(s, &t.coeff);
            }
        }
        Ok(out)
    }

    pub fn value(&self, z: C64) -> Result<ComplexMatrix> {
        self.evaluate(z, 0)
    }

    pub fn derivative(&self, z: C64) -> Result<ComplexMatrix> {
        self.evaluate(z, 1)
    }

    /// Coefficients `P_0, ..., P_d` when every term is a monomial.
    pub fn polynomial_coefficients(&self) -> Option<Vec<ComplexMatrix>> {
        let mut degree = 0;
        for t in &self.terms {
            degree = degree.max(t.func.power()?.0 as usize);
        }
        let mut coeffs = vec![ComplexMatrix::zeros(self.n, self.n); degree + 1];
        for t in &self.terms {
            let (p, c) = t.func.power()?;
            coeffs[p as usize].add_scaled(c, &t.coeff);
        }
        Some(coeffs)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.func.power().is_some())
    }

    /// All finite eigenvalues of a polynomial `T` via block companion form.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        let coeffs = self.polynomial_coefficients().ok_or(NepError::NotPolynomial)?;
        if coeffs.len() < 2 {
            return Ok(Vec::new());
        }
        Ok(numkernel::poly_eig(&coeffs)?)
    }

    /// `T + eta * dT`, i.e. blocks `T_j + eta w_j dT_j`.
    pub fn perturbed(&self, dir: &Perturbation, eta: f64) -> Result<Self> {
        dir.check_blocks(self.num_terms())?;
        let mut out = self.clone();
        for (j, t) in out.terms.iter_mut().enumerate() {
            let w = self.weights[j];
            if w == 0.0 {
                continue;
            }
            match dir {
                Perturbation::Dense(blocks) => t.coeff.add_scaled(C64::new(eta * w, 0.0), &blocks[j]),
                Perturbation::RankOne { u, v, coeffs } => {
                    if coeffs[j] != C64::new(0.0, 0.0) {
                        t.coeff.add_outer(coeffs[j] * (eta * w), u, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Appends `t(z) * coeff` as an unweighted term.
    pub fn with_term(&self, func: ScalarFunction, coeff: ComplexMatrix) -> Result<Self> {
        if coeff.nrows() != self.n || !coeff.is_square() {
            return Err(NepError::TermSize {
                index: self.terms.len(),
                expected: self.n,
                found: coeff.nrows(),
            });
        }
        let mut out = self.clone();
        out.terms.push(Term { func, coeff });
        out.weights.push(0.0);
        Ok(out)
    }
}

/// A perturbation `(dT_1, ..., dT_k)` of the coefficient blocks.
#[derive(Debug, Clone)]
pub enum Perturbation {
    Dense(Vec<ComplexMatrix>),
    /// `dT_j = coeffs[j] * u v*`.
    RankOne { u: CVec, v: CVec, coeffs: Vec<C64> },
}

impl Perturbation {
    pub fn zero(blocks: usize, n: usize) -> Self {
        Self::Dense(vec![ComplexMatrix::zeros(n, n); blocks])
    }

    pub fn num_blocks(&self) -> usize {
        match self {
            Self::Dense(b) => b.len(),
            Self::RankOne { coeffs, .. } => coeffs.len(),
        }
    }

    fn check_blocks(&self, expected: usize) -> Result<()> {
        if self.num_blocks() == expected {
            Ok(())
        } else {
            Err(NepError::BlockCount { expected, found: self.num_blocks() })
        }
    }

    pub fn block(&self, j: usize) -> ComplexMatrix {
        match self {
            Self::Dense(b) => b[j].clone(),
            Self::RankOne { u, v, coeffs } => ComplexMatrix::outer(u, v).scaled(coeffs[j]),
        }
    }

    /// Spectral norm of the stacked blocks `[dT_1 ... dT_k]`.
    pub fn norm(&self) -> Result<f64> {
        match self {
            Self::RankOne { u, v, coeffs } => {
                let c = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                Ok(norm2(u) * norm2(v) * c)
            }
            Self::Dense(blocks) => {
                let n = blocks.first().map_or(0, ComplexMatrix::nrows);
                if n == 0 {
                    return Ok(0.0);
                }
                let k = blocks.len();
                let stacked = ComplexMatrix::from_fn(n, k * n, |i, j| blocks[j / n].get(i, j % n));
                Ok(numkernel::spectral_norm(&stacked)?)
            }
        }
    }

    /// `dT(z) = sum_j t_j(z) w_j dT_j`.
    pub fn evaluate(&self, t: &MatrixFunction, z: C64) -> Result<ComplexMatrix> {
        self.check_blocks(t.num_terms())?;
        let n = t.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (j, term) in t.terms.iter().enumerate() {
            let s = term.func.eval(z) * t.weights[j];
            if s == C64::new(0.0, 0.0) {
                continue;
            }
            match self {
                Self::Dense(b) => out.add_scaled(s, &b[j]),
                Self::RankOne { u, v, coeffs } => out.add_outer(s * coeffs[j], u, v),
            }
        }
        Ok(out)
    }
}

/// Weighted scale `g(z) = sqrt(sum w_j^2 |t_j(z)|^2)` and
/// `gdot(z) = sum w_j^2 t_j'(z) conj(t_j(z))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gamma {
    pub g: f64,
    pub gdot: C64,
}

pub fn gamma(t: &MatrixFunction, z: C64) -> Result<Gamma> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(NepError::NonFinitePoint);
    }
    let mut g2 = 0.0;
    let mut gdot = C64::new(0.0, 0.0);
    for (term, &w) in t.terms.iter().zip(&t.weights) {
        if w == 0.0 {
            continue;
        }
        let tz = term.func.eval(z);
        g2 += w * w * tz.norm_sqr();
        gdot += term.func.deriv(z) * tz.conj() * (w * w);
    }
    let g = g2.sqrt();
    if !(g > 0.0) || !g.is_finite() {
        return Err(NepError::ZeroScale { z });
    }
    Ok(Gamma { g, gdot })
}

/// Smallest normwise perturbation making `z` an eigenvalue.
#[derive(Debug, Clone)]
pub struct BackwardError {
    pub phi: f64,
    pub triple: SingularTriple,
    pub minimal: Perturbation,
}

pub fn backward_error(t: &MatrixFunction, z: C64) -> Result<BackwardError> {
    let gm = gamma(t, z)?;
    let triple = min_singular_triple(&t.value(z)?)?;
    let phi = triple.sigma / gm.g;
    let coeffs = t
        .terms
        .iter()
        .zip(&t.weights)
        .map(|(term, &w)| -term.func.eval(z).conj() * (phi * w / gm.g))
        .collect();
    let minimal = Perturbation::RankOne { u: triple.u.clone(), v: triple.v.clone(), coeffs };
    Ok(BackwardError { phi, triple, minimal })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// `eps - phi(z)`; nonnegative inside the pseudospectrum.
    pub margin: f64,
}

pub fn membership(t: &MatrixFunction, z: C64, eps: f64) -> Result<Membership> {
    let phi = phi(t, z)?;
    let margin = eps - phi;
    Ok(Membership { inside: margin >= 0.0, margin })
}

/// Backward error value alone, `sigma_min(T(z)) / g(z)`.
pub fn phi(t: &MatrixFunction, z: C64) -> Result<f64> {
    let gm = gamma(t, z)?;
    Ok(numkernel::min_singular_value(&t.value(z)?)? / gm.g)
}

fn sensitivity_denominator(t: &MatrixFunction, mu0: C64, x: &[C64], y: &[C64]) -> Result<C64> {
    let dt = t.derivative(mu0)?;
    let d = dot(y, &dt.mul_vec(x));
    if d.norm() <= 1e-12 * dt.fro_norm() || d == C64::new(0.0, 0.0) {
        return Err(NepError::Defective { z: mu0 });
    }
    Ok(d)
}

/// First-order eigenvalue motion `-(y* dT(mu0) x) / (y* T'(mu0) x)`.
pub fn eig_sensitivity(
    t: &MatrixFunction,
    mu0: C64,
    x: &[C64],
    y: &[C64],
    dir: &Perturbation,
) -> Result<C64> {
    let denom = sensitivity_denominator(t, mu0, x, y)?;
    let num = dot(y, &dir.evaluate(t, mu0)?.mul_vec(x));
    Ok(-num / denom)
}

#[derive(Debug, Clone)]
pub struct OptimalDirection {
    /// Unit-norm perturbation that moves the eigenvalue furthest to the right.
    pub dir: Perturbation,
    /// Real-part speed of the eigenvalue along `dir`.
    pub rate: f64,
    /// Right eigenvector re-phased so that `y* T'(mu0) x` is real negative.
    pub x: CVec,
}

pub fn optimal_direction(
    t: &MatrixFunction,
    mu0: C64,
    x: &[C64],
    y: &[C64],
) -> Result<OptimalDirection> {
    let d = sensitivity_denominator(t, mu0, x, y)?;
    let gm = gamma(t, mu0)?;
    // Multiplying x by -conj(phase(d)) makes y* T' x = -|d|.
    let x = scale(x, -phase(d).conj());
    let coeffs = t
        .terms
        .iter()
        .zip(&t.weights)
        .map(|(term, &w)| term.func.eval(mu0).conj() * (w / gm.g))
        .collect();
    Ok(OptimalDirection {
        dir: Perturbation::RankOne { u: y.to_vec(), v: x.clone(), coeffs },
        rate: gm.g / d.norm(),
        x,
    })
}

/// Right and left null vectors `(x, y)` of `T(mu)` taken from the smallest
/// singular triple. Meaningful when `mu` is a simple eigenvalue.
pub fn null_vectors(t: &MatrixFunction, mu: C64) -> Result<(CVec, CVec)> {
    let tr = min_singular_triple(&t.value(mu)?)?;
    Ok((tr.v, tr.u))
}

/// `u* M^D(z) v = (1/g) (u* T'(z) v - (u* T(z) v / g^2) gdot)`.
pub fn md_action(t: &MatrixFunction, z: C64, u: &[C64], v: &[C64]) -> Result<C64> {
    let gm = gamma(t, z)?;
    let a = dot(u, &t.derivative(z)?.mul_vec(v));
    let b = dot(u, &t.value(z)?.mul_vec(v));
    Ok((a - b * gm.gdot / (gm.g * gm.g)) / gm.g)
}

#[derive(Debug, Clone)]
pub struct ScaledValue {
    /// `sigma_min(T(z)) / g(z)`, the smallest singular value of `T(z)/g(z)`.
    pub m_sigma: f64,
    pub triple: SingularTriple,
    pub gamma: Gamma,
    /// `u* M^D(z) v` for the smallest singular pair.
    pub md: C64,
}

pub fn scaled_value_and_md(t: &MatrixFunction, z: C64) -> Result<ScaledValue> {
    let gm = gamma(t, z)?;
    let triple = min_singular_triple(&t.value(z)?)?;
    let a = dot(&triple.u, &t.derivative(z)?.mul_vec(&triple.v));
    let md = (a - gm.gdot * (triple.sigma / (gm.g * gm.g))) / gm.g;
    Ok(ScaledValue { m_sigma: triple.sigma / gm.g, triple, gamma: gm, md })
}

pub const DEFAULT_TOL_G: f64 = 1e-8;

/// The gradient-like map `S(z)` of `sigma_min(T(z)/g(z))`; real and positive at
/// points on the right boundary with a vertical tangent.
pub fn s_map(t: &MatrixFunction, z: C64) -> Result<C64> {
    let sv = scaled_value_and_md(t, z)?;
    if sv.triple.relative_gap() < DEFAULT_TOL_G {
        return Err(NepError::Degenerate { z });
    }
    Ok(sv.md)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbvtTolerances {
    pub tol_b: f64,
    pub tol_g: f64,
    pub tol_s: f64,
}

impl RbvtTolerances {
    pub fn for_eps(eps: f64) -> Self {
        Self { tol_b: 1e-6 * eps.max(1.0), tol_g: DEFAULT_TOL_G, tol_s: 1e-6 }
    }

    /// Tolerances for a point returned by an iteration stopped at `tol`. A
    /// real-part test leaves the height accurate only to about `sqrt(tol)`,
    /// which bounds how vertical the tangent can look.
    pub fn for_run(eps: f64, tol: f64) -> Self {
        Self { tol_s: (10.0 * tol.sqrt()).max(1e-6), ..Self::for_eps(eps) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Boundary point with a vertical tangent facing right.
    Rbvt,
    Interior,
    Exterior,
    /// On the boundary but the smallest singular value is not simple or `S` vanishes.
    Degenerate,
    /// On the boundary but the tangent is not vertical or faces left.
    NotVertical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RbvtReport {
    pub sigma_scaled: f64,
    pub boundary_residual: f64,
    pub s_value: C64,
    pub sigma_gap: f64,
    pub verdict: Verdict,
}

impl RbvtReport {
    pub fn is_rbvt(&self) -> bool {
        self.verdict == Verdict::Rbvt
    }
}

pub fn rbvt_check(t: &MatrixFunction, z: C64, eps: f64, tols: RbvtTolerances) -> Result<RbvtReport> {
    let sv = scaled_value_and_md(t, z)?;
    let boundary_residual = (sv.m_sigma - eps).abs();
    let rel_gap = sv.triple.relative_gap();
    let s = sv.md;
    let verdict = if boundary_residual <= tols.tol_b {
        if rel_gap < tols.tol_g || s.norm() == 0.0 {
            Verdict::Degenerate
        } else if s.im.abs() <= tols.tol_s * s.norm() && s.re > 0.0 {
            Verdict::Rbvt
        } else {
            Verdict::NotVertical
        }
    } else if sv.m_sigma < eps {
        Verdict::Interior
    } else {
        Verdict::Exterior
    };
    Ok(RbvtReport {
        sigma_scaled: sv.m_sigma,
        boundary_residual,
        s_value: s,
        sigma_gap: sv.triple.sigma_next.map_or(f64::INFINITY, |s2| s2 - sv.triple.sigma),
        verdict,
    })
}

/// Newton refinement of an eigenvalue of `T` starting at `z0`, using
/// `z <- z - 1 / tr(T(z)^{-1} T'(z))`.
pub fn refine_eigenvalue(t: &MatrixFunction, z0: C64, tol: f64, max_iter: usize) -> Result<C64> {
    use faer::linalg::solvers::Solve;

    let mut z = z0;
    for _ in 0..max_iter {
        let tz = t.value(z)?;
        let lu = tz.as_mat().partial_piv_lu();
        let x = lu.solve(t.derivative(z)?.as_mat());
        let tr: C64 = (0..t.dim()).map(|i| x[(i, i)]).sum();
        if !(tr.re.is_finite() && tr.im.is_finite()) || tr == C64::new(0.0, 0.0) {
            // Landed exactly on an eigenvalue.
            return Ok(z);
        }
        let step = tr.inv();
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
        if step.norm() <= tol * z.norm().max(1.0) {
            return Ok(z);
        }
    }
    Err(NepError::RefinementFailed { start: z0 })
}
