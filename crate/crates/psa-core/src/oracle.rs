//! Reference computations of the pseudospectral abscissa.
//!
//! [`grid_psa`] scans the membership test `phi(z) <= eps` on a grid with local
//! zooming and a final horizontal bisection, and works for any matrix-valued
//! function. [`crisscross_matrix`] is the globally convergent
//! vertical/horizontal search for plain matrices based on imaginary
//! eigenvalues of 2n x 2n structured matrices.

use thiserror::Error;

use crate::nep::{self, MatrixFunction, NepError};
use crate::numkernel::{eigenvalues, rightmost, spectral_norm, ComplexMatrix, KernelError, TieRule, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Nep(#[from] NepError),
    #[error("invalid region: {0}")]
    BadRegion(String),
    #[error("no grid point lies inside the pseudospectrum")]
    NothingInside,
    #[error("no boundary crossing found on the starting line")]
    NoCrossing,
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;

/// Axis-aligned rectangle sampled by `grid_n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub grid_n: usize,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, grid_n: usize) -> Result<Self> {
        let r = Self { re_min, re_max, im_min, im_max, grid_n };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(OracleError::BadRegion(format!(
                "[{}, {}] x [{}, {}] is empty or not finite",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        if self.grid_n < 2 {
            return Err(OracleError::BadRegion(format!("grid_n must be at least 2, got {}", self.grid_n)));
        }
        Ok(())
    }

    /// Square around the rightmost eigenvalue of a polynomial `T`, wide
    /// enough for the spread of the spectrum and the weighted scale.
    pub fn around_spectrum(t: &MatrixFunction, eps: f64, grid_n: usize) -> Result<Self> {
        let ev: Vec<C64> = t.eigenvalues()?.into_iter().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
        if ev.is_empty() {
            return Err(OracleError::BadRegion("T has no finite eigenvalues".into()));
        }
        let center = ev[rightmost(&ev, TieRule::LargestImag)?];
        let spread = ev.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
        let gmax = ev.iter().filter_map(|&z| nep::gamma(t, z).ok()).map(|g| g.g).fold(1.0, f64::max);
        let half = 2.0 * spread + 10.0 * eps * gmax;
        let half = if half > 0.0 { half } else { 1.0 };
        Self::new(center.re - half, center.re + half, center.im - half, center.im + half, grid_n)
    }

    /// Box guaranteed to contain the rightmost part of the pseudospectrum of
    /// `A`: real parts between the spectral abscissa and the numerical
    /// abscissa plus `eps`, imaginary parts within `|A|_2 + eps`.
    pub fn for_matrix(a: &ComplexMatrix, eps: f64, grid_n: usize) -> Result<Self> {
        let ev = eigenvalues(a)?;
        let alpha = ev[rightmost(&ev, TieRule::LargestImag)?].re;
        let h = ComplexMatrix::from_fn(a.nrows(), a.ncols(), |i, j| (a.get(i, j) + a.get(j, i).conj()) * 0.5);
        let omega = eigenvalues(&h)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let rho = spectral_norm(a)? + eps;
        let pad = 1e-3 * (1.0 + rho);
        Self::new(alpha - pad, omega + eps + pad, -rho - pad, rho + pad, grid_n)
    }

    fn point(&self, i: usize, j: usize) -> C64 {
        let m = (self.grid_n - 1) as f64;
        C64::new(
            self.re_min + (self.re_max - self.re_min) * i as f64 / m,
            self.im_min + (self.im_max - self.im_min) * j as f64 / m,
        )
    }

    fn zoom(&self, center: C64, factor: f64, grid_n: usize) -> Self {
        let hx = (self.re_max - self.re_min) / (2.0 * factor);
        let hy = (self.im_max - self.im_min) / (2.0 * factor);
        Self { re_min: center.re - hx, re_max: center.re + hx, im_min: center.im - hy, im_max: center.im + hy, grid_n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Grid,
    CrissCross,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub alpha: f64,
    pub z: C64,
    pub method: OracleMethod,
    /// Accuracy the final search is run to. For the grid this assumes the
    /// boundary is locally unimodal around the located maximum.
    pub certified_tol: f64,
}

/// Tuning for [`grid_psa_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub refine_depth: usize,
    /// Points per axis in each zoomed window.
    pub refine_n: usize,
    /// Number of separated starting rows to zoom into.
    pub candidates: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { refine_depth: 3, refine_n: 21, candidates: 4 }
    }
}

/// Rightmost inside point per row of the grid.
fn scan(t: &MatrixFunction, eps: f64, region: &Region) -> Result<Vec<C64>> {
    let mut rows = Vec::new();
    for j in 0..region.grid_n {
        for i in (0..region.grid_n).rev() {
            let z = region.point(i, j);
            if nep::phi(t, z)? <= eps {
                rows.push(z);
                break;
            }
        }
    }
    Ok(rows)
}

fn bisect_tol(x: f64) -> f64 {
    1e-12 * x.abs().max(1.0)
}

/// Rightmost boundary crossing on the row `Im z = y`, searching from `x`
/// outward. Returns `None` if no inside point lies within `reach` to the left.
fn boundary_x(t: &MatrixFunction, eps: f64, x: f64, y: f64, reach: f64) -> Result<Option<f64>> {
    let inside = |x: f64| -> Result<bool> { Ok(nep::phi(t, C64::new(x, y))? <= eps) };
    let mut step = (reach * 1e-3).max(bisect_tol(x));
    let (mut lo, mut hi);
    if inside(x)? {
        lo = x;
        hi = x + step;
        let mut guard = 0;
        while inside(hi)? {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
            guard += 1;
            if guard > 200 {
                return Err(OracleError::BadRegion("pseudospectrum appears unbounded".into()));
            }
        }
    } else {
        hi = x;
        lo = x - step;
        loop {
            if inside(lo)? {
                break;
            }
            if x - lo > reach {
                return Ok(None);
            }
            hi = lo;
            step *= 2.0;
            lo = hi - step;
        }
    }
    while hi - lo > bisect_tol(lo) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Rightmost boundary point over row heights in `[lo, hi]`, climbing from the
/// boundary point `z` to the nearest local maximum: the step doubles while the
/// boundary keeps moving right, then a golden-section search closes in.
fn maximize_over_rows(t: &MatrixFunction, eps: f64, z: C64, lo: f64, hi: f64, reach: f64) -> Result<C64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let width = hi - lo;
    if !(width > 0.0) {
        return Ok(z);
    }
    let mut best = z;
    let mut eval = |y: f64| -> Result<f64> {
        let x = boundary_x(t, eps, best.re, y, reach)?.unwrap_or(f64::NEG_INFINITY);
        if x > best.re {
            best = C64::new(x, y);
        }
        Ok(x)
    };

    let step0 = width / 64.0;
    let (y_up, y_dn) = ((z.im + step0).min(hi), (z.im - step0).max(lo));
    let (f_up, f_dn) = (eval(y_up)?, eval(y_dn)?);
    let (mut a, mut b) = (y_dn, y_up);
    if f_up > z.re || f_dn > z.re {
        let dir = if f_up >= f_dn { 1.0 } else { -1.0 };
        let (mut prev, mut m, mut fm) = if dir > 0.0 { (z.im, y_up, f_up) } else { (z.im, y_dn, f_dn) };
        let mut step = step0;
        loop {
            let next = (m + dir * step).clamp(lo, hi);
            let f_next = if next == m { f64::NEG_INFINITY } else { eval(next)? };
            if f_next <= fm {
                (a, b) = (prev.min(next), prev.max(next));
                break;
            }
            (prev, m, fm) = (m, next, f_next);
            step *= 2.0;
        }
    }

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > 1e-9 * width && b - a > 1e-14 * z.im.abs().max(1.0) {
        if fc >= fd {
            (b, d, fd) = (d, c, fc);
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            (a, c, fc) = (c, d, fd);
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    Ok(best)
}

/// Rows through the imaginary parts of the eigenvalues, with each gap split
/// into `SPLIT` pieces and two extra gaps beyond either end.
fn eigen_rows(ev: &[C64], region: &Region) -> Vec<f64> {
    const SPLIT: usize = 4;
    let mut ys: Vec<f64> = ev.iter().map(|z| z.im).filter(|y| *y >= region.im_min && *y <= region.im_max).collect();
    ys.sort_by(f64::total_cmp);
    let floor = (region.im_max - region.im_min) / (region.grid_n * 100) as f64;
    ys.dedup_by(|a, b| (*a - *b).abs() <= floor);
    let Some((&first, &last)) = ys.first().zip(ys.last()) else { return ys };
    let n = ys.len();
    let (lo_gap, hi_gap) = if n > 1 { (ys[1] - ys[0], ys[n - 1] - ys[n - 2]) } else { (floor, floor) };
    let mut rows = vec![first - 2.0 * lo_gap, first - lo_gap];
    for w in ys.windows(2) {
        for i in 0..SPLIT {
            rows.push(w[0] + (w[1] - w[0]) * i as f64 / SPLIT as f64);
        }
    }
    rows.extend([last, last + hi_gap, last + 2.0 * hi_gap]);
    rows.retain(|y| *y >= region.im_min && *y <= region.im_max);
    rows
}

/// Grid oracle with default zoom settings.
pub fn grid_psa(t: &MatrixFunction, eps: f64, region: &Region, refine_depth: usize) -> Result<OracleResult> {
    grid_psa_with(t, eps, region, GridOptions { refine_depth, ..GridOptions::default() })
}

/// Grid oracle. Two kinds of starting points are used: the rightmost inside
/// grid point of each row, zoomed into and then finished by a one-dimensional
/// search over the row height of the bisected boundary point; and, for
/// polynomial `T`, local maxima of the rightmost boundary point over rows laid
/// through and between the eigenvalues (every component of the pseudospectrum
/// contains one), each refined between its neighbouring rows.
pub fn grid_psa_with(t: &MatrixFunction, eps: f64, region: &Region, opts: GridOptions) -> Result<OracleResult> {
    region.validate()?;
    let reach = region.re_max - region.re_min;
    let height = region.im_max - region.im_min;
    let candidates = opts.candidates.max(1);

    // (start, bracket) pairs for the row search
    let mut seeds: Vec<(C64, f64, f64)> = Vec::new();
    if t.is_polynomial() {
        let ev: Vec<C64> = t.eigenvalues()?.into_iter().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
        let x0 = ev.iter().map(|z| z.re).filter(|x| *x <= region.re_max).fold(f64::NEG_INFINITY, f64::max);
        if x0.is_finite() {
            let ys = eigen_rows(&ev, region);
            let xs = ys
                .iter()
                .map(|&y| Ok(boundary_x(t, eps, x0.max(region.re_min), y, reach)?.unwrap_or(f64::NEG_INFINITY)))
                .collect::<Result<Vec<f64>>>()?;
            for i in 0..ys.len() {
                let left = if i > 0 { xs[i - 1] } else { f64::NEG_INFINITY };
                let right = xs.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
                if xs[i].is_finite() && xs[i] >= left && xs[i] >= right {
                    let lo = if i > 0 { ys[i - 1] } else { ys[i] - (ys.get(1).unwrap_or(&ys[i]) - ys[i]).abs() };
                    let hi = ys.get(i + 1).copied().unwrap_or(ys[i] + (ys[i] - lo));
                    seeds.push((C64::new(xs[i], ys[i]), lo, hi));
                }
            }
            seeds.sort_by(|a, b| b.0.re.total_cmp(&a.0.re));
            seeds.truncate(candidates);
        }
    }

    let mut rows = scan(t, eps, region)?;
    if rows.is_empty() && seeds.is_empty() {
        return Err(OracleError::NothingInside);
    }
    rows.sort_by(|a, b| b.re.total_cmp(&a.re));
    // Keep row starts that a single zoom window would not already cover.
    let sep = height / 20.0;
    let mut starts: Vec<C64> = Vec::new();
    for z in rows {
        if starts.len() >= candidates {
            break;
        }
        if starts.iter().all(|s| (s.im - z.im).abs() > sep) {
            starts.push(z);
        }
    }

    let mut best: Option<C64> = None;
    let mut keep = |z: C64| {
        if best.is_none_or(|b| z.re > b.re) {
            best = Some(z);
        }
    };
    for (seed, lo, hi) in seeds {
        keep(maximize_over_rows(t, eps, seed, lo.min(hi), lo.max(hi), reach)?);
    }
    for start in starts {
        let mut window = *region;
        let mut z = start;
        for _ in 0..opts.refine_depth {
            window = window.zoom(z, 10.0, opts.refine_n.max(3));
            let local = scan(t, eps, &window)?;
            let Some(top) = local.iter().map(|w| w.re).reduce(f64::max) else { break };
            if top < z.re {
                break;
            }
            // Rows tied at the rightmost column bracket the optimum on a flat
            // boundary; centre on the middle one.
            let tied: Vec<C64> = local.into_iter().filter(|w| w.re == top).collect();
            z = tied[tied.len() / 2];
        }
        let half = (window.im_max - window.im_min) / 2.0;
        keep(maximize_over_rows(t, eps, z, z.im - half, z.im + half, reach)?);
    }
    let z = best.expect("at least one start");
    Ok(OracleResult { alpha: z.re, z, method: OracleMethod::Grid, certified_tol: 1e-8 * z.re.abs().max(1.0) })
}

/// `[[A - xI, -eps I], [eps I, -(A - xI)*]]`; its imaginary eigenvalues `iy`
/// mark the points `x + iy` where `eps` is a singular value of `(x+iy)I - A`.
pub fn vertical_structured(a: &ComplexMatrix, eps: f64, x: f64) -> ComplexMatrix {
    let n = a.nrows();
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let diag = |k: usize, l: usize| if k == l { C64::new(x, 0.0) } else { C64::new(0.0, 0.0) };
        match (i < n, j < n) {
            (true, true) => a.get(i, j) - diag(i, j),
            (true, false) => if i == j - n { C64::new(-eps, 0.0) } else { C64::new(0.0, 0.0) },
            (false, true) => if i - n == j { C64::new(eps, 0.0) } else { C64::new(0.0, 0.0) },
            (false, false) => -(a.get(j - n, i - n).conj() - diag(i, j)),
        }
    })
}

/// `[[B, eps I], [eps I, B*]]` with `B = A - iyI`; its real eigenvalues `x`
/// mark the points `x + iy` where `eps` is a singular value of `(x+iy)I - A`.
pub fn horizontal_structured(a: &ComplexMatrix, eps: f64, y: f64) -> ComplexMatrix {
    let n = a.nrows();
    let shift = C64::new(0.0, y);
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a.get(i, j) - if i == j { shift } else { C64::new(0.0, 0.0) },
        (false, false) => (a.get(j - n, i - n) - if i == j { shift } else { C64::new(0.0, 0.0) }).conj(),
        _ => if i % n == j % n { C64::new(eps, 0.0) } else { C64::new(0.0, 0.0) },
    })
}

/// Sorted `y` values where the vertical line `Re z = x` meets a level set.
pub fn vertical_crossings(a: &ComplexMatrix, eps: f64, x: f64, thresh: f64) -> Result<Vec<f64>> {
    let mut ys: Vec<f64> = eigenvalues(&vertical_structured(a, eps, x))?
        .into_iter()
        .filter(|z| z.re.abs() <= thresh)
        .map(|z| z.im)
        .collect();
    ys.sort_by(f64::total_cmp);
    Ok(ys)
}

/// Sorted `x` values where the horizontal line `Im z = y` meets a level set.
pub fn horizontal_crossings(a: &ComplexMatrix, eps: f64, y: f64, thresh: f64) -> Result<Vec<f64>> {
    let mut xs: Vec<f64> = eigenvalues(&horizontal_structured(a, eps, y))?
        .into_iter()
        .filter(|z| z.im.abs() <= thresh)
        .map(|z| z.re)
        .collect();
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

fn sigma_min_at(a: &ComplexMatrix, z: C64) -> Result<f64> {
    let m = ComplexMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        if i == j { z - a.get(i, j) } else { -a.get(i, j) }
    });
    Ok(crate::numkernel::min_singular_value(&m)?)
}

/// Criss-cross computation of the pseudospectral abscissa of `A`.
pub fn crisscross_matrix(a: &ComplexMatrix, eps: f64, tol: f64) -> Result<OracleResult> {
    if !a.is_square() {
        return Err(KernelError::NotSquare { rows: a.nrows(), cols: a.ncols() }.into());
    }
    let thresh = 1e-8 * a.fro_norm().max(1.0);
    let ev = eigenvalues(a)?;
    let start = ev[rightmost(&ev, TieRule::LargestImag)?];
    if eps == 0.0 {
        return Ok(OracleResult { alpha: start.re, z: start, method: OracleMethod::CrissCross, certified_tol: 0.0 });
    }

    let rightmost_on = |y: f64| -> Result<Option<f64>> {
        Ok(horizontal_crossings(a, eps, y, thresh)?.last().copied())
    };
    let mut x = rightmost_on(start.im)?.ok_or(OracleError::NoCrossing)?.max(start.re);
    let mut y_best = start.im;

    for _ in 0..100 {
        let ys = vertical_crossings(a, eps, x, thresh)?;
        let mut mids = Vec::new();
        for w in ys.windows(2) {
            let m = 0.5 * (w[0] + w[1]);
            if w[1] - w[0] > 0.0 && sigma_min_at(a, C64::new(x, m))? <= eps {
                mids.push(m);
            }
        }
        let mut x_next = x;
        let mut y_next = y_best;
        for m in mids {
            if let Some(xr) = rightmost_on(m)? {
                if xr > x_next {
                    x_next = xr;
                    y_next = m;
                }
            }
        }
        let gain = x_next - x;
        x = x_next;
        y_best = y_next;
        if gain <= tol * x.abs().max(1.0) {
            break;
        }
    }
    Ok(OracleResult { alpha: x, z: C64::new(x, y_best), method: OracleMethod::CrissCross, certified_tol: tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn scalar_grid() {
        let a = c(0.3, -0.4);
        let t = MatrixFunction::matrix(&ComplexMatrix::from_rows(&[vec![a]]).unwrap()).unwrap();
        let region = Region::new(-1.0, 1.5, -1.5, 1.0, 51).unwrap();
        let r = grid_psa(&t, 0.2, &region, 4).unwrap();
        assert!((r.alpha - 0.5).abs() < 1e-10, "{}", r.alpha);
    }

    #[test]
    fn normal_crisscross() {
        let a = ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        let r = crisscross_matrix(&a, 0.5, 1e-12).unwrap();
        assert!((r.alpha + 0.5).abs() < 1e-12);
    }

    #[test]
    fn region_validation() {
        assert!(Region::new(1.0, 0.0, 0.0, 1.0, 10).is_err());
        assert!(Region::new(0.0, 1.0, 0.0, 1.0, 1).is_err());
        assert!(Region::new(0.0, f64::NAN, 0.0, 1.0, 5).is_err());
    }

    #[test]
    fn nothing_inside() {
        let t = MatrixFunction::matrix(&ComplexMatrix::identity(1)).unwrap();
        let region = Region::new(5.0, 6.0, 5.0, 6.0, 5).unwrap();
        assert_eq!(grid_psa(&t, 0.1, &region, 2), Err(OracleError::NothingInside));
    }
}
