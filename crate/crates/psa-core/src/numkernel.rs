//! Dense complex linear algebra used by the rest of the crate.
//!
//! Everything here is a thin contract layer over `faer`: eigendecompositions
//! with matched left/right eigenvectors, smallest singular triples, polynomial
//! eigenvalues through a block companion matrix, and Hermitian square roots.

use faer::{Mat, Side};
use thiserror::Error;

pub type C64 = num_complex::Complex64;

/// Column vectors are plain `Vec<C64>` throughout the crate.
pub type CVec = Vec<C64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("leading coefficient is numerically singular")]
    SingularLeading,
    #[error("matrix is not Hermitian positive definite")]
    NotHpd,
    #[error("empty list of eigenvalues")]
    EmptyList,
    #[error("eigenpair residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    InaccurateEigenpair { residual: f64, tolerance: f64 },
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    mat: Mat<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComplexMatrix")
            .field("rows", &self.nrows())
            .field("cols", &self.ncols())
            .finish()
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { mat: Mat::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        Self { mat: Mat::identity(n, n) }
    }

    /// Builds a matrix from an entry function, rejecting empty shapes and
    /// non-finite values.
    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        f: impl FnMut(usize, usize) -> C64,
    ) -> Result<Self> {
        Self::from_mat(Mat::from_fn(rows, cols, f))
    }

    /// Infallible constructor for internal use where finiteness is known.
    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { mat: Mat::from_fn(rows, cols, f) }
    }

    pub fn from_mat(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() == 0 || mat.ncols() == 0 {
            return Err(KernelError::Empty);
        }
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let z = mat[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(KernelError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { mat })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(KernelError::DimensionMismatch { expected: c, found: bad.len() });
        }
        Self::try_from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(d: &[C64]) -> Result<Self> {
        let n = d.len();
        Self::try_from_fn(n, n, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<C64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }

    pub fn fro_norm(&self) -> f64 {
        self.mat.norm_l2()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols(), self.nrows(), |i, j| self.mat[(j, i)].conj())
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self::from_fn(self.nrows(), self.ncols(), |i, j| alpha * self.mat[(i, j)])
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols() != other.nrows() {
            return Err(KernelError::DimensionMismatch {
                expected: self.ncols(),
                found: other.nrows(),
            });
        }
        Ok(Self { mat: &self.mat * &other.mat })
    }

    pub fn mul_vec(&self, x: &[C64]) -> CVec {
        let mut out = vec![C64::new(0.0, 0.0); self.nrows()];
        for (j, &xj) in x.iter().enumerate().take(self.ncols()) {
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.mat[(i, j)] * xj;
            }
        }
        out
    }

    /// `y* A` returned as a column vector holding the conjugated row, i.e. `A* y`.
    pub fn adjoint_mul_vec(&self, y: &[C64]) -> CVec {
        (0..self.ncols())
            .map(|j| (0..self.nrows()).map(|i| self.mat[(i, j)].conj() * y[i]).sum())
            .collect()
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: C64, other: &Self) {
        assert_eq!(self.nrows(), other.nrows());
        assert_eq!(self.ncols(), other.ncols());
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                self.mat[(i, j)] += alpha * other.mat[(i, j)];
            }
        }
    }

    /// `self += alpha * u v*`.
    pub fn add_outer(&mut self, alpha: C64, u: &[C64], v: &[C64]) {
        for (j, vj) in v.iter().enumerate() {
            let s = alpha * vj.conj();
            for (i, ui) in u.iter().enumerate() {
                self.mat[(i, j)] += ui * s;
            }
        }
    }

    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(C64::new(-1.0, 0.0), other);
        out
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.nrows())
        } else {
            Err(KernelError::NotSquare { rows: self.nrows(), cols: self.ncols() })
        }
    }
}

/// `a* b`.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn scale(a: &[C64], s: C64) -> CVec {
    a.iter().map(|z| z * s).collect()
}

pub fn normalized(a: &[C64]) -> CVec {
    let n = norm2(a);
    scale(a, C64::new(1.0 / n, 0.0))
}

/// Unit complex number with the phase of `z` (1 when `z` is zero).
pub fn phase(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// Eigenvalues with paired unit left and right eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<C64>,
    pub right: Vec<CVec>,
    pub left: Vec<CVec>,
}

pub fn eig_full(a: &ComplexMatrix) -> Result<EigenSystem> {
    use faer::dyn_stack::{MemBuffer, MemStack};
    use faer::linalg::evd::{self, ComputeEigenvectors};

    let n = a.require_square()?;
    let par = faer::Par::Seq;
    let mut s = faer::diag::Diag::<C64>::zeros(n);
    let mut ul = Mat::<C64>::zeros(n, n);
    let mut ur = Mat::<C64>::zeros(n, n);
    let mut mem = MemBuffer::new(evd::evd_scratch::<C64>(
        n,
        ComputeEigenvectors::Yes,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    evd::evd_cplx(
        a.as_mat().as_ref(),
        s.as_mut(),
        Some(ul.as_mut()),
        Some(ur.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|_| KernelError::NoConvergence("eigendecomposition"))?;

    let column = |m: &Mat<C64>, k: usize| normalized(&(0..n).map(|i| m[(i, k)]).collect::<CVec>());
    Ok(EigenSystem {
        values: s.column_vector().iter().copied().collect(),
        right: (0..n).map(|k| column(&ur, k)).collect(),
        left: (0..n).map(|k| column(&ul, k)).collect(),
    })
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    a.require_square()?;
    a.as_mat().eigenvalues().map_err(|_| KernelError::NoConvergence("eigenvalue solver"))
}

/// Smallest singular value with consistent unit singular vectors:
/// `A v = sigma u` and `A* u = sigma v`.
#[derive(Debug, Clone)]
pub struct SingularTriple {
    pub sigma: f64,
    pub u: CVec,
    pub v: CVec,
    /// Second smallest singular value, absent for 1x1 input.
    pub sigma_next: Option<f64>,
}

impl SingularTriple {
    /// Relative gap `(s2 - s1) / s2`; infinite when there is no second value.
    pub fn relative_gap(&self) -> f64 {
        match self.sigma_next {
            Some(s2) => (s2 - self.sigma) / s2.max(1e-300),
            None => f64::INFINITY,
        }
    }
}

pub fn min_singular_triple(a: &ComplexMatrix) -> Result<SingularTriple> {
    let svd = a.as_mat().svd().map_err(|_| KernelError::NoConvergence("singular value decomposition"))?;
    let s = svd.S().column_vector();
    let k = s.nrows() - 1;
    let u = (0..a.nrows()).map(|i| svd.U()[(i, k)]).collect();
    let v = (0..a.ncols()).map(|i| svd.V()[(i, k)]).collect();
    Ok(SingularTriple {
        sigma: s[k].re,
        u,
        v,
        sigma_next: (k > 0).then(|| s[k - 1].re),
    })
}

/// Smallest singular value only.
pub fn min_singular_value(a: &ComplexMatrix) -> Result<f64> {
    let s = a
        .as_mat()
        .singular_values()
        .map_err(|_| KernelError::NoConvergence("singular value decomposition"))?;
    Ok(*s.last().expect("non-empty matrix"))
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    let s = a
        .as_mat()
        .singular_values()
        .map_err(|_| KernelError::NoConvergence("singular value decomposition"))?;
    Ok(s.first().copied().unwrap_or(0.0))
}

fn is_identity(a: &ComplexMatrix) -> bool {
    (0..a.nrows()).all(|i| {
        (0..a.ncols()).all(|j| a.get(i, j) == if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    })
}

/// Block companion matrix of `sum_k lambda^k coeffs[k]` after normalizing the
/// leading coefficient. Eigenvectors are `[lambda^{d-1} x; ...; lambda x; x]`.
fn companion(coeffs: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    use faer::linalg::solvers::Solve;

    let d = coeffs.len().checked_sub(1).filter(|&d| d >= 1).ok_or(KernelError::EmptyList)?;
    let n = coeffs[0].require_square()?;
    for c in coeffs {
        if c.nrows() != n || c.ncols() != n {
            return Err(KernelError::DimensionMismatch { expected: n, found: c.nrows() });
        }
    }
    let lead = &coeffs[d];
    let normalized: Vec<Mat<C64>> = if is_identity(lead) {
        coeffs[..d].iter().map(|c| c.as_mat().clone()).collect()
    } else {
        let lu = lead.as_mat().partial_piv_lu();
        let u = lu.U();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = u[(i, i)].norm();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if !(hi > 0.0) || lo <= 1e-14 * hi {
            return Err(KernelError::SingularLeading);
        }
        coeffs[..d].iter().map(|c| lu.solve(c.as_mat())).collect()
    };

    let size = d * n;
    let mut out = Mat::<C64>::zeros(size, size);
    // First block row: -Q_{d-1}, ..., -Q_0.
    for (block, q) in normalized.iter().rev().enumerate() {
        for j in 0..n {
            for i in 0..n {
                out[(i, block * n + j)] = -q[(i, j)];
            }
        }
    }
    for b in 1..d {
        for i in 0..n {
            out[(b * n + i, (b - 1) * n + i)] = C64::new(1.0, 0.0);
        }
    }
    ComplexMatrix::from_mat(out)
}

/// Eigenvalues of the matrix polynomial `sum_k lambda^k coeffs[k]`, degree >= 1,
/// with invertible leading coefficient.
pub fn poly_eig(coeffs: &[ComplexMatrix]) -> Result<Vec<C64>> {
    eigenvalues(&companion(coeffs)?)
}

/// Eigenvalues and unit right eigenvectors of a matrix polynomial.
pub fn poly_eig_vectors(coeffs: &[ComplexMatrix]) -> Result<Vec<(C64, CVec)>> {
    let n = coeffs[0].nrows();
    let comp = companion(coeffs)?;
    let eig = comp.as_mat().eigen().map_err(|_| KernelError::NoConvergence("eigendecomposition"))?;
    let size = comp.nrows();
    let d = size / n;
    let values = eig.S().column_vector();
    let vecs = eig.U();
    let mut out = Vec::with_capacity(size);
    for k in 0..size {
        // The last block holds x and the first holds lambda^{d-1} x; take the
        // better scaled one.
        let top: CVec = (0..n).map(|i| vecs[(i, k)]).collect();
        let bottom: CVec = (0..n).map(|i| vecs[((d - 1) * n + i, k)]).collect();
        let x = if norm2(&bottom) >= norm2(&top) { bottom } else { top };
        out.push((values[k], normalized(&x)));
    }
    Ok(out)
}

/// Eigenvalues of `lambda^2 M + lambda C + K`.
pub fn quad_eig(m: &ComplexMatrix, c: &ComplexMatrix, k: &ComplexMatrix) -> Result<Vec<C64>> {
    poly_eig(&[k.clone(), c.clone(), m.clone()])
}

/// Eigenpairs of `lambda^2 M + lambda C + K`, each checked against the residual
/// bound `1e-8 (|l|^2 |M| + |l| |C| + |K|)`.
pub fn quad_eig_vectors(
    m: &ComplexMatrix,
    c: &ComplexMatrix,
    k: &ComplexMatrix,
) -> Result<Vec<(C64, CVec)>> {
    let pairs = poly_eig_vectors(&[k.clone(), c.clone(), m.clone()])?;
    let (nm, nc, nk) = (m.fro_norm(), c.fro_norm(), k.fro_norm());
    for (lambda, x) in &pairs {
        let r: CVec = {
            let (mx, cx, kx) = (m.mul_vec(x), c.mul_vec(x), k.mul_vec(x));
            (0..x.len()).map(|i| lambda * lambda * mx[i] + lambda * cx[i] + kx[i]).collect()
        };
        let residual = norm2(&r);
        let l = lambda.norm();
        let tolerance = 1e-8 * (l * l * nm + l * nc + nk);
        if residual > tolerance {
            return Err(KernelError::InaccurateEigenpair { residual, tolerance });
        }
    }
    Ok(pairs)
}

/// Hermitian positive definite square root.
pub fn spd_sqrt(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = s.require_square()?;
    let scale = s.fro_norm();
    if s.hermitian_defect() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(KernelError::NotHpd);
    }
    let evd = s
        .as_mat()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| KernelError::NoConvergence("Hermitian eigendecomposition"))?;
    let lam = evd.S().column_vector();
    let v = evd.U();
    let mut roots = Vec::with_capacity(n);
    for i in 0..n {
        let l = lam[i].re;
        if !(l > 0.0) {
            return Err(KernelError::NotHpd);
        }
        roots.push(l.sqrt());
    }
    let r = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * roots[k] * v[(j, k)].conj()).sum()
    });
    // Remove rounding asymmetry.
    Ok(ComplexMatrix::from_fn(n, n, |i, j| (r.get(i, j) + r.get(j, i).conj()) * 0.5))
}

/// How to choose among eigenvalues whose real parts tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    LargestImag,
    SmallestImag,
}

/// Index of the eigenvalue with the largest real part. Real parts within
/// `1e-12` relative of each other count as tied.
pub fn rightmost(values: &[C64], tie: TieRule) -> Result<usize> {
    if values.is_empty() {
        return Err(KernelError::EmptyList);
    }
    let mut best = 0;
    for (i, z) in values.iter().enumerate().skip(1) {
        let b = values[best];
        let tol = 1e-12 * z.re.abs().max(b.re.abs());
        if z.re > b.re + tol {
            best = i;
        } else if (z.re - b.re).abs() <= tol {
            let better = match tie {
                TieRule::LargestImag => z.im > b.im,
                TieRule::SmallestImag => z.im < b.im,
            };
            if better {
                best = i;
            }
        }
    }
    Ok(best)
}

/// Index of the value nearest to `target`, with the runner-up distance.
pub fn nearest(values: &[C64], target: C64) -> Option<(usize, f64, f64)> {
    let mut best: Option<(usize, f64)> = None;
    let mut second = f64::INFINITY;
    for (i, z) in values.iter().enumerate() {
        let d = (z - target).norm();
        match best {
            Some((_, bd)) if d >= bd => second = second.min(d),
            Some((_, bd)) => {
                second = second.min(bd);
                best = Some((i, d));
            }
            None => best = Some((i, d)),
        }
    }
    best.map(|(i, d)| (i, d, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_eigensystem() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        let e = eig_full(&a).unwrap();
        for (k, mu) in e.values.iter().enumerate() {
            let idx = if (mu - c(1.0, 0.0)).norm() < 1e-14 { 0 } else { 1 };
            assert!((e.right[k][idx].norm() - 1.0).abs() < 1e-14);
            assert!((e.left[k][idx].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn nonnormal_two_by_two_vectors() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 10.0], vec![0.0, 1.0]]).unwrap();
        let e = eig_full(&a).unwrap();
        let k = e.values.iter().position(|z| (z - c(1.0, 0.0)).norm() < 1e-12).unwrap();
        let (x, y) = (&e.right[k], &e.left[k]);
        // x parallel to (10, 1), y parallel to (0, 1).
        assert!((x[0] - x[1] * 10.0).norm() < 1e-12);
        assert!(y[0].norm() < 1e-12);
    }

    #[test]
    fn min_triple_of_diagonal() {
        let a = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let t = min_singular_triple(&a).unwrap();
        assert!((t.sigma - 1.0).abs() < 1e-14);
        assert!((t.u[1].norm() - 1.0).abs() < 1e-14 && (t.v[1].norm() - 1.0).abs() < 1e-14);
        assert_eq!(t.sigma_next, Some(2.0));
    }

    #[test]
    fn scalar_triple() {
        let a = ComplexMatrix::from_rows(&[vec![c(3.0, -4.0)]]).unwrap();
        let t = min_singular_triple(&a).unwrap();
        assert!((t.sigma - 5.0).abs() < 1e-14);
        assert!(t.sigma_next.is_none());
        assert!(t.relative_gap().is_infinite());
    }

    #[test]
    fn quadratic_scalar_and_oscillators() {
        let one = ComplexMatrix::identity(1);
        let zero = ComplexMatrix::zeros(1, 1);
        let mut l = quad_eig(&one, &zero, &one.scaled(c(-1.0, 0.0))).unwrap();
        l.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((l[0] + 1.0).norm() < 1e-12 && (l[1] - 1.0).norm() < 1e-12);

        let m = ComplexMatrix::identity(2);
        let k = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(4.0, 0.0)]).unwrap();
        let mut l = quad_eig(&m, &ComplexMatrix::zeros(2, 2), &k).unwrap();
        l.sort_by(|a, b| a.im.total_cmp(&b.im));
        let want = [-2.0, -1.0, 1.0, 2.0];
        for (z, w) in l.iter().zip(want) {
            assert!((z - c(0.0, w)).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_leading_rejected() {
        let z = ComplexMatrix::zeros(2, 2);
        let i = ComplexMatrix::identity(2);
        assert_eq!(quad_eig(&z, &i, &i), Err(KernelError::SingularLeading));
    }

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let d = ComplexMatrix::from_diag(&[c(4.0, 0.0), c(9.0, 0.0)]).unwrap();
        let r = spd_sqrt(&d).unwrap();
        assert!((r.get(0, 0) - c(2.0, 0.0)).norm() < 1e-14);
        assert!((r.get(1, 1) - c(3.0, 0.0)).norm() < 1e-14);
        assert!(r.get(0, 1).norm() < 1e-14);
        let i = spd_sqrt(&ComplexMatrix::identity(3)).unwrap();
        assert!(i.sub(&ComplexMatrix::identity(3)).fro_norm() < 1e-14);
    }

    #[test]
    fn sqrt_rejects_indefinite_and_nonhermitian() {
        let d = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(spd_sqrt(&d), Err(KernelError::NotHpd));
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(spd_sqrt(&a), Err(KernelError::NotHpd));
    }

    #[test]
    fn rightmost_ties() {
        assert_eq!(rightmost(&[c(-1.0, 0.0), c(3.0, 0.0), c(3.0, -5.0)], TieRule::LargestImag), Ok(1));
        assert_eq!(rightmost(&[c(2.0, 0.0)], TieRule::LargestImag), Ok(0));
        assert_eq!(rightmost(&[c(1.0, 1.0), c(1.0, -1.0)], TieRule::LargestImag), Ok(0));
        assert_eq!(rightmost(&[c(1.0, 1.0), c(1.0, -1.0)], TieRule::SmallestImag), Ok(1));
        assert_eq!(rightmost(&[], TieRule::LargestImag), Err(KernelError::EmptyList));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(ComplexMatrix::try_from_fn(0, 3, |_, _| c(0.0, 0.0)), Err(KernelError::Empty));
        assert_eq!(
            ComplexMatrix::try_from_fn(2, 2, |i, j| if i == 1 && j == 0 { c(f64::NAN, 0.0) } else { c(1.0, 0.0) }),
            Err(KernelError::NonFinite { row: 1, col: 0 })
        );
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig_full(&r), Err(KernelError::NotSquare { rows: 2, cols: 3 })));
    }
}
