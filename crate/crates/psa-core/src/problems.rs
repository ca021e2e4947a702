//! Test-problem generators and Matrix Market input/output.

use std::path::Path;

use thiserror::Error;

use crate::nep::{MatrixFunction, NepError};
use crate::numkernel::{spd_sqrt, ComplexMatrix, KernelError, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Nep(#[from] NepError),
    #[error("invalid problem specification: {0}")]
    InvalidSpec(String),
    #[error("unknown generator '{0}'")]
    UnknownName(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed Matrix Market header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: index ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds { line: usize, row: usize, col: usize, rows: usize, cols: usize },
    #[error("matrix of size {rows}x{cols} exceeds the cap of {cap} entries")]
    TooLarge { rows: usize, cols: usize, cap: usize },
}

pub type Result<T, E = ProblemError> = std::result::Result<T, E>;

/// Mass-spring chain with internal damping and optional point dampers.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingSpec {
    pub n: usize,
    /// Internal damping ratio.
    pub xi: f64,
    /// Spring stiffness between neighbouring masses.
    pub k: f64,
    /// `(mass index, viscosity)` with 1-based indices.
    pub dampers: Vec<(usize, f64)>,
    /// Perturbation weights on `(M, C, K)`.
    pub weights: [f64; 3],
}

impl DampingSpec {
    pub fn new(n: usize, xi: f64, k: f64) -> Self {
        Self { n, xi, k, dampers: Vec::new(), weights: [1.0; 3] }
    }

    pub fn with_damper(mut self, index: usize, viscosity: f64) -> Self {
        self.dampers.push((index, viscosity));
        self
    }

    pub fn with_weights(mut self, weights: [f64; 3]) -> Self {
        self.weights = weights;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(ProblemError::InvalidSpec(format!("need at least 2 masses, got {}", self.n)));
        }
        if !(self.xi >= 0.0 && self.xi.is_finite()) {
            return Err(ProblemError::InvalidSpec(format!("internal damping must be nonnegative, got {}", self.xi)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(ProblemError::InvalidSpec(format!("stiffness must be positive, got {}", self.k)));
        }
        for &(i, nu) in &self.dampers {
            if i == 0 || i > self.n {
                return Err(ProblemError::InvalidSpec(format!("damper index {i} outside 1..={}", self.n)));
            }
            if !nu.is_finite() {
                return Err(ProblemError::InvalidSpec(format!("damper viscosity {nu} is not finite")));
            }
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(ProblemError::InvalidSpec(format!("weights must be nonnegative, got {:?}", self.weights)));
        }
        Ok(())
    }
}

/// Mass, damping and stiffness matrices of a damped system.
#[derive(Debug, Clone, PartialEq)]
pub struct Damping {
    pub m: ComplexMatrix,
    pub c: ComplexMatrix,
    pub k: ComplexMatrix,
}

/// `M = diag(1..n)`, `K = tridiag(-k, 2k, -k)` and
/// `C = 2 xi M^(1/2) sqrt(M^(-1/2) K M^(-1/2)) M^(1/2)` plus the dampers.
pub fn gen_damping(spec: &DampingSpec) -> Result<Damping> {
    spec.validate()?;
    let n = spec.n;
    let re = |x: f64| C64::new(x, 0.0);
    let masses: Vec<C64> = (1..=n).map(|i| re(i as f64)).collect();
    let m = ComplexMatrix::from_diag(&masses)?;
    let k = ComplexMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => re(2.0 * spec.k),
        1 => re(-spec.k),
        _ => re(0.0),
    });
    let root_m: Vec<f64> = (1..=n).map(|i| (i as f64).sqrt()).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| k.get(i, j) / (root_m[i] * root_m[j]));
    let s = spd_sqrt(&scaled)?;
    let mut c = ComplexMatrix::from_fn(n, n, |i, j| {
        let v = 2.0 * spec.xi * root_m[i] * s.get(i, j).re * root_m[j];
        re(v)
    });
    // Symmetrize away rounding so downstream code sees an exactly symmetric C.
    c = ComplexMatrix::from_fn(n, n, |i, j| (c.get(i, j) + c.get(j, i)) * 0.5);
    for &(idx, nu) in &spec.dampers {
        let mut e = vec![re(0.0); n];
        e[idx - 1] = re(1.0);
        c.add_outer(re(nu), &e, &e);
    }
    Ok(Damping { m, c, k })
}

/// The quadratic `lambda^2 M + lambda C + K` weighted by `spec.weights`.
pub fn damping_function(spec: &DampingSpec) -> Result<MatrixFunction> {
    let d = gen_damping(spec)?;
    Ok(MatrixFunction::quadratic(&d.m, &d.c, &d.k, spec.weights)?)
}

/// Toeplitz matrix with `-1` below the diagonal and ones on the diagonal and
/// the first `k` superdiagonals.
pub fn grcar(n: usize, k: usize) -> Result<ComplexMatrix> {
    check_size(n)?;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            C64::new(-1.0, 0.0)
        } else if j >= i && j - i <= k {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Angle used by the EigTool demo: `sin(theta)^(n-1) = 0.1`, so the
/// diagonal decays from 1 to 0.1.
pub fn kahan_default_theta(n: usize) -> f64 {
    0.1f64.powf(1.0 / (n.max(2) - 1) as f64).asin()
}

/// Upper-triangular `diag(s^i) (I - c * strict_upper_ones)` with
/// `s = sin(theta)`, `c = cos(theta)`.
pub fn kahan(n: usize, theta: f64) -> Result<ComplexMatrix> {
    check_size(n)?;
    let (s, c) = theta.sin_cos();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let scale = s.powi(i as i32);
        let v = match j.cmp(&i) {
            std::cmp::Ordering::Equal => scale,
            std::cmp::Ordering::Greater => -c * scale,
            std::cmp::Ordering::Less => 0.0,
        };
        C64::new(v, 0.0)
    }))
}

/// `c1 * G1 + i * c2 * G2` with standard normal entries drawn from
/// [`NormalStream`], `G1` then `G2`, each in row-major order.
pub fn random(n: usize, c1: f64, c2: f64, seed: u64) -> Result<ComplexMatrix> {
    check_size(n)?;
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(ProblemError::InvalidSpec("random scale factors must be finite".into()));
    }
    let mut rng = NormalStream::new(seed);
    let g1: Vec<f64> = (0..n * n).map(|_| rng.next_normal()).collect();
    let g2: Vec<f64> = (0..n * n).map(|_| rng.next_normal()).collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| C64::new(c1 * g1[i * n + j], c2 * g2[i * n + j])))
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(ProblemError::InvalidSpec(format!("matrix size must be at least 2, got {n}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedMatrix {
    Grcar,
    Kahan,
    Random { c1: f64, c2: f64, seed: u64 },
}

impl std::str::FromStr for NamedMatrix {
    type Err = ProblemError;

    /// Accepts `grcar`, `kahan` and `random`; the latter defaults to
    /// `c1 = 1, c2 = 1, seed = 0`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grcar" => Ok(Self::Grcar),
            "kahan" => Ok(Self::Kahan),
            "random" => Ok(Self::Random { c1: 1.0, c2: 1.0, seed: 0 }),
            _ => Err(ProblemError::UnknownName(s.to_string())),
        }
    }
}

pub fn gen_named(name: NamedMatrix, n: usize) -> Result<ComplexMatrix> {
    match name {
        NamedMatrix::Grcar => grcar(n, 3),
        NamedMatrix::Kahan => kahan(n, kahan_default_theta(n)),
        NamedMatrix::Random { c1, c2, seed } => random(n, c1, c2, seed),
    }
}

/// Counter-based SplitMix64 stream with Box-Muller normals.
///
/// Draw `i` is `mix(seed + (i + 1) * 0x9E3779B97F4A7C15)`; each pair of
/// uniforms yields two normals, cosine branch first.
#[derive(Debug, Clone)]
pub struct NormalStream {
    seed: u64,
    counter: u64,
    spare: Option<f64>,
}

impl NormalStream {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let mut z = self.seed.wrapping_add(self.counter.wrapping_mul(Self::GOLDEN));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `(0, 1]`.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Largest number of entries accepted by the Matrix Market reader.
pub const DEFAULT_ENTRY_CAP: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| ProblemError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_matrix_market(&text, DEFAULT_ENTRY_CAP)
}

/// Parses a dense or coordinate Matrix Market matrix, expanding symmetric,
/// skew-symmetric and Hermitian storage. Duplicate coordinate entries add up.
pub fn parse_matrix_market(text: &str, cap: usize) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| ProblemError::Header("empty input".into()))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(ProblemError::Header(header.trim().to_string()));
    }
    let coordinate = match words[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(ProblemError::Header(format!("unsupported format '{other}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" => Field::Real,
        "complex" => Field::Complex,
        "integer" => Field::Integer,
        "pattern" if coordinate => Field::Pattern,
        other => return Err(ProblemError::Header(format!("unsupported field '{other}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" if field == Field::Complex => Symmetry::Hermitian,
        other => return Err(ProblemError::Header(format!("unsupported symmetry '{other}'"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size_text) = body.next().ok_or_else(|| ProblemError::Header("missing size line".into()))?;
    let dims: Vec<usize> = size_text
        .split_whitespace()
        .map(|w| w.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| ProblemError::Parse { line: size_line, msg: format!("bad size line: {e}") })?;
    let expected = if coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(ProblemError::Parse { line: size_line, msg: format!("expected {expected} integers on the size line") });
    }
    let (rows, cols) = (dims[0], dims[1]);
    let too_large = || ProblemError::TooLarge { rows, cols, cap };
    let total = rows.checked_mul(cols).ok_or_else(too_large)?;
    if total > cap {
        return Err(too_large());
    }
    if rows == 0 || cols == 0 {
        return Err(KernelError::Empty.into());
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(ProblemError::Parse { line: size_line, msg: "symmetric storage requires a square matrix".into() });
    }

    let mut data = vec![C64::new(0.0, 0.0); total];
    let parse_value = |line: usize, words: &[&str]| -> Result<C64> {
        let num = |w: &str| {
            w.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ProblemError::Parse { line, msg: format!("bad number '{w}'") })
        };
        let want = match field {
            Field::Pattern => 0,
            Field::Complex => 2,
            _ => 1,
        };
        if words.len() != want {
            return Err(ProblemError::Parse { line, msg: format!("expected {want} value(s), got {}", words.len()) });
        }
        Ok(match field {
            Field::Pattern => C64::new(1.0, 0.0),
            Field::Complex => C64::new(num(words[0])?, num(words[1])?),
            Field::Real | Field::Integer => C64::new(num(words[0])?, 0.0),
        })
    };
    let mut place = |i: usize, j: usize, v: C64| {
        data[i + j * rows] += v;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => data[j + i * rows] += v,
                Symmetry::SkewSymmetric => data[j + i * rows] -= v,
                Symmetry::Hermitian => data[j + i * rows] += v.conj(),
            }
        }
    };

    if coordinate {
        let nnz = dims[2];
        if nnz > total {
            return Err(ProblemError::Parse { line: size_line, msg: format!("{nnz} entries exceed the matrix size") });
        }
        let mut seen = 0;
        for (line, text) in body {
            let words: Vec<&str> = text.split_whitespace().collect();
            if seen == nnz {
                return Err(ProblemError::Parse { line, msg: "more entries than declared".into() });
            }
            if words.len() < 2 {
                return Err(ProblemError::Parse { line, msg: "missing indices".into() });
            }
            let idx = |w: &str| {
                w.parse::<usize>().map_err(|e| ProblemError::Parse { line, msg: format!("bad index '{w}': {e}") })
            };
            let (r, c) = (idx(words[0])?, idx(words[1])?);
            if r == 0 || c == 0 || r > rows || c > cols {
                return Err(ProblemError::IndexOutOfBounds { line, row: r, col: c, rows, cols });
            }
            let v = parse_value(line, &words[2..])?;
            place(r - 1, c - 1, v);
            seen += 1;
        }
        if seen != nnz {
            return Err(ProblemError::Parse { line: size_line, msg: format!("declared {nnz} entries, found {seen}") });
        }
    } else {
        // Column-major; packed storage lists the lower triangle only.
        let mut slots = Vec::new();
        for j in 0..cols {
            let first = match symmetry {
                Symmetry::General => 0,
                Symmetry::Symmetric | Symmetry::Hermitian => j,
                Symmetry::SkewSymmetric => j + 1,
            };
            slots.extend((first..rows).map(|i| (i, j)));
        }
        let mut slot_iter = slots.into_iter();
        for (line, text) in body {
            let words: Vec<&str> = text.split_whitespace().collect();
            let (i, j) = slot_iter
                .next()
                .ok_or_else(|| ProblemError::Parse { line, msg: "more entries than the declared size".into() })?;
            place(i, j, parse_value(line, &words)?);
        }
        if slot_iter.next().is_some() {
            return Err(ProblemError::Parse { line: size_line, msg: "fewer entries than the declared size".into() });
        }
    }
    if data.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(ProblemError::Parse { line: size_line, msg: "summed entries overflow".into() });
    }
    Ok(ComplexMatrix::try_from_fn(rows, cols, |i, j| data[i + j * rows])?)
}

/// Dense complex array format with round-trip exact decimal values.
pub fn write_matrix_market(a: &ComplexMatrix) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("%%MatrixMarket matrix array complex general\n");
    let _ = writeln!(out, "{} {}", a.nrows(), a.ncols());
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a.get(i, j);
            let _ = writeln!(out, "{:e} {:e}", z.re, z.im);
        }
    }
    out
}

pub fn save_matrix_market(a: &ComplexMatrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), write_matrix_market(a))
        .map_err(|e| ProblemError::Io(format!("{}: {e}", path.as_ref().display())))
}
