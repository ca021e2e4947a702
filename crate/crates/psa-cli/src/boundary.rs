//! Samples of the pseudospectrum boundary along vertical lines.

use psa_core::nep::{phi, MatrixFunction};
use psa_core::numkernel::C64;
use psa_core::oracle::Region;
use rayon::prelude::*;

use crate::error::CliError;

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { hi } else { lo + step * i as f64 })
}

/// Root of `f` in `[a, b]` given a sign change, to near machine precision.
fn bisect(f: impl Fn(f64) -> Result<f64, CliError>, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64, CliError> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) <= 1e-14 * m.abs().max(1.0) {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn column(t: &MatrixFunction, eps: f64, x: f64, region: &Region, rows: usize) -> Result<Vec<(f64, f64)>, CliError> {
    let f = |y: f64| -> Result<f64, CliError> { Ok(phi(t, C64::new(x, y))? - eps) };
    let ys: Vec<f64> = linspace(region.im_min, region.im_max, rows).collect();
    let vals = ys.iter().map(|&y| f(y)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for i in 0..ys.len() {
        if vals[i] == 0.0 {
            out.push((x, ys[i]));
        } else if i + 1 < ys.len() && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0) {
            out.push((x, bisect(f, ys[i], ys[i + 1], vals[i])?));
        }
    }
    Ok(out)
}

/// Points `(x, y)` with `phi(x + iy) = eps` on `columns` equally spaced
/// vertical lines of `region`, each scanned at `rows` heights. Output is
/// ordered by column, then by `y`.
pub fn boundary_points(
    t: &MatrixFunction,
    eps: f64,
    region: &Region,
    columns: usize,
    rows: usize,
) -> Result<Vec<(f64, f64)>, CliError> {
    if columns == 0 || rows < 2 {
        return Err(CliError::Usage("need at least one column and two rows".into()));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CliError::Usage(format!("eps must be positive, got {eps}")));
    }
    let xs: Vec<f64> = linspace(region.re_min, region.re_max, columns).collect();
    let cols = xs.par_iter().map(|&x| column(t, eps, x, region, rows)).collect::<Result<Vec<_>, _>>()?;
    Ok(cols.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use psa_core::numkernel::ComplexMatrix;

    #[test]
    fn unit_circle() {
        let t = MatrixFunction::matrix(&ComplexMatrix::zeros(1, 1)).unwrap();
        let region = Region::new(-1.5, 1.5, -1.5, 1.5, 2).unwrap();
        let pts = boundary_points(&t, 1.0, &region, 40, 101).unwrap();
        assert!(pts.len() >= 50);
        for (x, y) in pts {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() <= 1e-8);
        }
    }
}
