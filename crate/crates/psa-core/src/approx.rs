//! Perturbation-theory estimates of the pseudospectral abscissa and the
//! initial points they suggest for the fixed-point iterations.
//!
//! The first-order score of an eigenvalue `mu` is `Re mu + eps * g(mu) / |y* T'(mu) x|`.
//! For plain matrices a second-order correction of the optimal rank-one
//! direction is available, built from difference quotients of eigenvectors.

use thiserror::Error;

use crate::nep::{self, MatrixFunction, NepError, Perturbation};
use crate::numkernel::{
    self, dot, eig_full, eigenvalues, nearest, phase, rightmost, scale, CVec, ComplexMatrix,
    KernelError, TieRule, C64,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Nep(#[from] NepError),
    #[error("no eigenvalue with a usable sensitivity estimate")]
    NoUsableEigenvalue,
    #[error("perturbed eigenvalue near {mu0} cannot be matched unambiguously")]
    AmbiguousMatch { mu0: C64 },
    #[error("step h must be positive and finite, got {0}")]
    BadStep(f64),
}

pub type Result<T, E = ApproxError> = std::result::Result<T, E>;

/// Magnitude below which `|y* x|` marks an eigenvalue as numerically defective.
pub const DEFECTIVE_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigenScore {
    pub mu: C64,
    /// Estimated rightmost real part reachable from `mu`; `-inf` when unusable.
    pub score: f64,
    /// Real-part speed of `mu` under the optimal unit perturbation.
    pub rate: f64,
    pub usable: bool,
    /// Right eigenvector, phase-fixed by the estimator.
    pub x: CVec,
    /// Left eigenvector, phase-fixed by the estimator.
    pub y: CVec,
}

#[derive(Debug, Clone)]
pub enum Direction {
    Nep(Perturbation),
    Matrix(ComplexMatrix),
}

#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub per_eig: Vec<EigenScore>,
    pub argmax_index: usize,
    pub estimate: f64,
    pub order: u8,
    /// Predicted rightmost point of the pseudospectrum.
    pub init_point: C64,
    /// Perturbation direction belonging to the argmax eigenvalue.
    pub direction: Direction,
}

impl EstimateReport {
    /// Indices of usable eigenvalues, best score first.
    pub fn ranked(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.per_eig.len()).filter(|&i| self.per_eig[i].usable).collect();
        idx.sort_by(|&a, &b| self.per_eig[b].score.total_cmp(&self.per_eig[a].score));
        idx
    }
}

fn argmax(scores: &[EigenScore]) -> Result<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        if s.usable && best.is_none_or(|b| s.score > scores[b].score) {
            best = Some(i);
        }
    }
    best.ok_or(ApproxError::NoUsableEigenvalue)
}

/// First-order scores for all eigenvalues of a polynomial `T`.
pub fn first_order_scores_nep(t: &MatrixFunction, eps: f64) -> Result<EstimateReport> {
    let eigs = t.eigenvalues()?;
    first_order_scores_from(t, eps, &eigs)
}

/// First-order scores for a caller-supplied spectrum of `T`.
pub fn first_order_scores_from(t: &MatrixFunction, eps: f64, eigs: &[C64]) -> Result<EstimateReport> {
    let mut per_eig = Vec::with_capacity(eigs.len());
    let mut dirs = Vec::with_capacity(eigs.len());
    for &mu in eigs.iter().filter(|z| z.re.is_finite() && z.im.is_finite()) {
        let (x, y) = nep::null_vectors(t, mu)?;
        match nep::optimal_direction(t, mu, &x, &y) {
            Ok(od) => {
                per_eig.push(EigenScore { mu, score: mu.re + eps * od.rate, rate: od.rate, usable: true, x: od.x, y });
                dirs.push(Some(od.dir));
            }
            Err(NepError::Defective { .. }) => {
                per_eig.push(EigenScore { mu, score: f64::NEG_INFINITY, rate: f64::INFINITY, usable: false, x, y });
                dirs.push(None);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let best = argmax(&per_eig)?;
    let top = &per_eig[best];
    Ok(EstimateReport {
        estimate: top.score,
        init_point: top.mu + eps * top.rate,
        direction: Direction::Nep(dirs[best].take().expect("usable eigenvalue has a direction")),
        argmax_index: best,
        order: 1,
        per_eig,
    })
}

/// Eigentriples of `A` with `y* x` made real positive; defective ones flagged.
fn matrix_scores(a: &ComplexMatrix, eps: f64) -> Result<Vec<EigenScore>> {
    let es = eig_full(a)?;
    Ok(es
        .values
        .iter()
        .zip(es.right)
        .zip(es.left)
        .map(|((&mu, x), y)| {
            let yx = dot(&y, &x);
            let y = scale(&y, phase(yx));
            let r = yx.norm();
            if r < DEFECTIVE_THRESHOLD {
                EigenScore { mu, score: f64::NEG_INFINITY, rate: f64::INFINITY, usable: false, x, y }
            } else {
                EigenScore { mu, score: mu.re + eps / r, rate: 1.0 / r, usable: true, x, y }
            }
        })
        .collect())
}

pub fn first_order_scores_matrix(a: &ComplexMatrix, eps: f64) -> Result<EstimateReport> {
    let per_eig = matrix_scores(a, eps)?;
    let best = argmax(&per_eig)?;
    let top = &per_eig[best];
    Ok(EstimateReport {
        estimate: top.score,
        init_point: top.mu + eps * top.rate,
        direction: Direction::Matrix(ComplexMatrix::outer(&top.y, &top.x)),
        argmax_index: best,
        order: 1,
        per_eig,
    })
}

/// Difference quotients of the eigentriple of `A + h y x*` against `(x, y)`.
#[derive(Debug, Clone)]
pub struct SecondOrderData {
    pub h: f64,
    pub x_p: CVec,
    pub y_p: CVec,
    pub beta_p: C64,
}

/// Default difference step `max(sqrt(u), 1e-2 eps)`, `u` the unit roundoff.
pub fn default_step(eps: f64) -> f64 {
    (f64::EPSILON / 2.0).sqrt().max(1e-2 * eps)
}

pub fn perturbed_eigpair(a: &ComplexMatrix, mu0: C64, x: &[C64], y: &[C64], h: f64) -> Result<SecondOrderData> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(ApproxError::BadStep(h));
    }
    let y = scale(y, phase(dot(y, x)));
    let mut b = a.clone();
    b.add_outer(C64::new(h, 0.0), &y, x);
    let es = eig_full(&b)?;
    let (k, d1, d2) = nearest(&es.values, mu0).ok_or(ApproxError::AmbiguousMatch { mu0 })?;
    if d2 < 10.0 * d1 {
        return Err(ApproxError::AmbiguousMatch { mu0 });
    }
    let x_new = scale(&es.right[k], phase(dot(&es.right[k], x)));
    let y_new = scale(&es.left[k], phase(dot(&es.left[k], &x_new)));
    let x_p: CVec = x_new.iter().zip(x).map(|(a, b)| (a - b) / h).collect();
    let y_p: CVec = y_new.iter().zip(&y).map(|(a, b)| (a - b) / h).collect();
    let beta_p = -(dot(&y_p, x) + dot(&y, &x_p)) / dot(&y, x);
    Ok(SecondOrderData { h, x_p, y_p, beta_p })
}

/// `y x* + (eps/2)(y_p x* + y x_p* + beta_p y x*)` scaled to unit Frobenius norm.
pub fn second_order_direction(x: &[C64], y: &[C64], data: &SecondOrderData, eps: f64) -> ComplexMatrix {
    let half = eps / 2.0;
    let mut d = ComplexMatrix::outer(y, x).scaled(1.0 + half * data.beta_p);
    d.add_outer(C64::new(half, 0.0), &data.y_p, x);
    d.add_outer(C64::new(half, 0.0), y, &data.x_p);
    let n = d.fro_norm();
    d.scaled(C64::new(1.0 / n, 0.0))
}

/// Second-order direction for one phase-fixed eigentriple of `A`.
fn second_order_for(a: &ComplexMatrix, s: &EigenScore, eps: f64) -> Result<ComplexMatrix> {
    let data = perturbed_eigpair(a, s.mu, &s.x, &s.y, default_step(eps))?;
    Ok(second_order_direction(&s.x, &s.y, &data, eps))
}

fn rightmost_perturbed(a: &ComplexMatrix, d: &ComplexMatrix, eps: f64) -> Result<C64> {
    let mut b = a.clone();
    b.add_scaled(C64::new(eps, 0.0), d);
    let ev = eigenvalues(&b)?;
    Ok(ev[rightmost(&ev, TieRule::LargestImag)?])
}

pub fn second_order_estimate(a: &ComplexMatrix, eps: f64) -> Result<EstimateReport> {
    let mut per_eig = matrix_scores(a, eps)?;
    let mut best: Option<(usize, C64, ComplexMatrix)> = None;
    for (i, s) in per_eig.iter_mut().enumerate() {
        if !s.usable {
            continue;
        }
        let d = match second_order_for(a, s, eps) {
            Ok(d) => d,
            Err(ApproxError::AmbiguousMatch { .. }) => {
                s.usable = false;
                s.score = f64::NEG_INFINITY;
                continue;
            }
            Err(e) => return Err(e),
        };
        let z = rightmost_perturbed(a, &d, eps)?;
        s.score = z.re;
        if best.as_ref().is_none_or(|(_, bz, _)| z.re > bz.re) {
            best = Some((i, z, d));
        }
    }
    let (argmax_index, z, d) = best.ok_or(ApproxError::NoUsableEigenvalue)?;
    Ok(EstimateReport {
        per_eig,
        argmax_index,
        estimate: z.re,
        order: 2,
        init_point: z,
        direction: Direction::Matrix(d),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitStrategy {
    First,
    Second,
    #[default]
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitPoint {
    pub z0: C64,
    /// Eigenvalue of `A` the initial point was grown from.
    pub score_eig: C64,
}

pub fn init_point_matrix(a: &ComplexMatrix, eps: f64, strategy: InitStrategy) -> Result<InitPoint> {
    match strategy {
        InitStrategy::First => {
            let fo = first_order_scores_matrix(a, eps)?;
            let top = &fo.per_eig[fo.argmax_index];
            let z0 = rightmost_perturbed(a, &ComplexMatrix::outer(&top.y, &top.x), eps)?;
            Ok(InitPoint { z0, score_eig: top.mu })
        }
        InitStrategy::Second => {
            let so = second_order_estimate(a, eps)?;
            Ok(InitPoint { z0: so.init_point, score_eig: so.per_eig[so.argmax_index].mu })
        }
        InitStrategy::Hybrid => {
            let per_eig = matrix_scores(a, eps)?;
            let best = argmax(&per_eig)?;
            init_from_eigenvalue(a, &per_eig[best], eps)
        }
    }
}

/// Starting points for restarted runs: the `count` best first-order
/// eigenvalues, each grown by its own second-order direction.
pub fn init_points_ranked(a: &ComplexMatrix, eps: f64, count: usize) -> Result<Vec<InitPoint>> {
    let per_eig = matrix_scores(a, eps)?;
    let mut idx: Vec<usize> = (0..per_eig.len()).filter(|&i| per_eig[i].usable).collect();
    if idx.is_empty() {
        return Err(ApproxError::NoUsableEigenvalue);
    }
    idx.sort_by(|&i, &j| per_eig[j].score.total_cmp(&per_eig[i].score));
    idx.into_iter().take(count).map(|i| init_from_eigenvalue(a, &per_eig[i], eps)).collect()
}

fn init_from_eigenvalue(a: &ComplexMatrix, s: &EigenScore, eps: f64) -> Result<InitPoint> {
    let d = match second_order_for(a, s, eps) {
        Ok(d) => d,
        // Fall back to the first-order direction when the match is ambiguous.
        Err(ApproxError::AmbiguousMatch { .. }) => ComplexMatrix::outer(&s.y, &s.x),
        Err(e) => return Err(e),
    };
    Ok(InitPoint { z0: rightmost_perturbed(a, &d, eps)?, score_eig: s.mu })
}

/// First-order initial point for a matrix-valued function: the eigenvalue of
/// `T + eps dT*` nearest to the predicted point, or the prediction itself when
/// `T` is not polynomial.
pub fn init_point_nep(t: &MatrixFunction, eps: f64) -> Result<C64> {
    let fo = first_order_scores_nep(t, eps)?;
    init_point_from_report(t, eps, &fo)
}

pub fn init_point_from_report(t: &MatrixFunction, eps: f64, fo: &EstimateReport) -> Result<C64> {
    let top = &fo.per_eig[fo.argmax_index];
    if eps == 0.0 {
        return Ok(top.mu);
    }
    let Direction::Nep(dir) = &fo.direction else {
        return Ok(fo.init_point);
    };
    if !t.is_polynomial() {
        return Ok(fo.init_point);
    }
    let ev = t.perturbed(dir, eps)?.eigenvalues()?;
    Ok(nearest(&ev, fo.init_point).map_or(fo.init_point, |(k, _, _)| ev[k]))
}

/// Spectral abscissa of a matrix.
pub fn spectral_abscissa(a: &ComplexMatrix) -> Result<f64> {
    let ev = numkernel::eigenvalues(a)?;
    Ok(ev[rightmost(&ev, TieRule::LargestImag)?].re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn normal_diagonal_scores() {
        let a = ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        let fo = first_order_scores_matrix(&a, 0.3).unwrap();
        assert!((fo.estimate + 0.7).abs() < 1e-14);
        let t = MatrixFunction::matrix(&a).unwrap();
        let fo = first_order_scores_nep(&t, 0.3).unwrap();
        assert!((fo.estimate + 0.7).abs() < 1e-14);
        let so = second_order_estimate(&a, 0.3).unwrap();
        assert!((so.estimate + 0.7).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_first_order() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 10.0], vec![0.0, 1.0]]).unwrap();
        let want = 1.0 + 0.01 * 101f64.sqrt();
        assert!((first_order_scores_matrix(&a, 0.01).unwrap().estimate - want).abs() < 1e-12);
        let t = MatrixFunction::matrix(&a).unwrap();
        assert!((first_order_scores_nep(&t, 0.01).unwrap().estimate - want).abs() < 1e-10);
    }

    #[test]
    fn scalar_second_order_quotients_vanish() {
        let a = ComplexMatrix::from_rows(&[vec![c(0.5, 2.0)]]).unwrap();
        let one = vec![c(1.0, 0.0)];
        let d = perturbed_eigpair(&a, c(0.5, 2.0), &one, &one, 1e-3).unwrap();
        assert!(d.x_p[0].norm() < 1e-12 && d.y_p[0].norm() < 1e-12 && d.beta_p.norm() < 1e-12);
        assert_eq!(perturbed_eigpair(&a, c(0.5, 2.0), &one, &one, 0.0).unwrap_err(), ApproxError::BadStep(0.0));
    }

    #[test]
    fn strategies_on_normal_matrix() {
        let a = ComplexMatrix::from_diag(&[c(0.5, 1.0), c(-1.0, 0.0), c(0.2, -3.0)]).unwrap();
        for s in [InitStrategy::First, InitStrategy::Second, InitStrategy::Hybrid] {
            let ip = init_point_matrix(&a, 0.25, s).unwrap();
            assert!((ip.z0 - c(0.75, 1.0)).norm() < 1e-12, "{s:?} {}", ip.z0);
        }
    }

    #[test]
    fn zero_eps_initial_point_is_eigenvalue() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 10.0], vec![0.0, 1.0]]).unwrap();
        let t = MatrixFunction::matrix(&a).unwrap();
        let fo = first_order_scores_nep(&t, 0.0).unwrap();
        assert_eq!(init_point_nep(&t, 0.0).unwrap(), fo.per_eig[fo.argmax_index].mu);
    }
}
