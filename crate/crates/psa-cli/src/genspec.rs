//! Parser for built-in problem specifications such as `grcar:100`,
//! `random:n=8,c1=1,c2=0.5,seed=7` or `damping:n=20,xi=0.005,k=25,nu=10`.

use std::fmt;
use std::str::FromStr;

use crate::error::CliError;

/// Largest dimension accepted from a specification string.
pub const MAX_DIM: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Grcar { n: usize, k: usize },
    /// `theta` defaults to the angle that makes the last diagonal entry 0.1.
    Kahan { n: usize, theta: Option<f64> },
    Random { n: usize, c1: f64, c2: f64, seed: u64 },
    /// Mass-spring chain; `nu` is the viscosity of a damper on mass `at`.
    Damping { n: usize, xi: f64, k: f64, nu: f64, at: usize },
}

impl GenSpec {
    pub fn dim(&self) -> usize {
        match *self {
            GenSpec::Grcar { n, .. } | GenSpec::Kahan { n, .. } | GenSpec::Random { n, .. } | GenSpec::Damping { n, .. } => n,
        }
    }

    pub fn is_damping(&self) -> bool {
        matches!(self, GenSpec::Damping { .. })
    }

    /// Same problem with the damper viscosity replaced.
    pub fn with_viscosity(&self, value: f64) -> Result<Self, CliError> {
        match self {
            GenSpec::Damping { n, xi, k, at, .. } => Ok(GenSpec::Damping { n: *n, xi: *xi, k: *k, nu: value, at: *at }),
            _ => Err(CliError::Usage("a parameter sweep needs a damping problem".into())),
        }
    }

    fn validate(self) -> Result<Self, CliError> {
        let bad = |msg: String| Err(CliError::Spec(msg));
        let n = self.dim();
        if !(2..=MAX_DIM).contains(&n) {
            return bad(format!("dimension must lie in [2, {MAX_DIM}], got {n}"));
        }
        match self {
            GenSpec::Grcar { k, .. } if k >= n => bad(format!("grcar needs k < n, got k={k}")),
            GenSpec::Kahan { theta: Some(t), .. } if !t.is_finite() => bad("kahan angle must be finite".into()),
            GenSpec::Random { c1, c2, .. } if !(c1.is_finite() && c2.is_finite()) => {
                bad("random scales must be finite".into())
            }
            GenSpec::Damping { xi, k, nu, at, .. } => {
                if !(xi.is_finite() && xi >= 0.0) {
                    bad(format!("xi must be finite and nonnegative, got {xi}"))
                } else if !(k.is_finite() && k > 0.0) {
                    bad(format!("k must be finite and positive, got {k}"))
                } else if !(nu.is_finite() && nu >= 0.0) {
                    bad(format!("nu must be finite and nonnegative, got {nu}"))
                } else if !(1..=n).contains(&at) {
                    bad(format!("damper position {at} outside 1..={n}"))
                } else {
                    Ok(self)
                }
            }
            other => Ok(other),
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| CliError::Spec(format!("bad value '{value}' for '{key}'")))
}

fn parse_real(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = parse_num(key, value)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Spec(format!("'{key}' must be finite")))
    }
}

impl FromStr for GenSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let name = name.trim().to_ascii_lowercase();
        let mut spec = match name.as_str() {
            "grcar" => GenSpec::Grcar { n: 100, k: 3 },
            "kahan" => GenSpec::Kahan { n: 100, theta: None },
            "random" => GenSpec::Random { n: 100, c1: 1.0, c2: 1.0, seed: 0 },
            "damping" => GenSpec::Damping { n: 20, xi: 0.005, k: 25.0, nu: 0.0, at: 2 },
            _ => return Err(CliError::Spec(format!("unknown generator '{name}'"))),
        };
        let rest = rest.trim();
        if rest.is_empty() {
            return spec.validate();
        }
        for (pos, item) in rest.split(',').enumerate() {
            let (key, value) = match item.split_once('=') {
                Some((k, v)) => (k.trim(), v),
                // a bare leading number is the dimension
                None if pos == 0 => ("n", item),
                None => return Err(CliError::Spec(format!("expected key=value, got '{item}'"))),
            };
            match (&mut spec, key) {
                (GenSpec::Grcar { n, .. }, "n")
                | (GenSpec::Kahan { n, .. }, "n")
                | (GenSpec::Random { n, .. }, "n")
                | (GenSpec::Damping { n, .. }, "n") => *n = parse_num(key, value)?,
                (GenSpec::Grcar { k, .. }, "k") => *k = parse_num(key, value)?,
                (GenSpec::Kahan { theta, .. }, "theta") => *theta = Some(parse_real(key, value)?),
                (GenSpec::Random { c1, .. }, "c1") => *c1 = parse_real(key, value)?,
                (GenSpec::Random { c2, .. }, "c2") => *c2 = parse_real(key, value)?,
                (GenSpec::Random { seed, .. }, "seed") => *seed = parse_num(key, value)?,
                (GenSpec::Damping { xi, .. }, "xi") => *xi = parse_real(key, value)?,
                (GenSpec::Damping { k, .. }, "k") => *k = parse_real(key, value)?,
                (GenSpec::Damping { nu, .. }, "nu") => *nu = parse_real(key, value)?,
                (GenSpec::Damping { at, .. }, "at") => *at = parse_num(key, value)?,
                _ => return Err(CliError::Spec(format!("unknown key '{key}' for {name}"))),
            }
        }
        spec.validate()
    }
}

/// Canonical form, accepted back by `from_str`.
impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Grcar { n, k } => write!(f, "grcar:n={n},k={k}"),
            GenSpec::Kahan { n, theta: None } => write!(f, "kahan:n={n}"),
            GenSpec::Kahan { n, theta: Some(t) } => write!(f, "kahan:n={n},theta={t:?}"),
            GenSpec::Random { n, c1, c2, seed } => write!(f, "random:n={n},c1={c1:?},c2={c2:?},seed={seed}"),
            GenSpec::Damping { n, xi, k, nu, at } => write!(f, "damping:n={n},xi={xi:?},k={k:?},nu={nu:?},at={at}"),
        }
    }
}
