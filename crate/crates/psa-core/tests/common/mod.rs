#![allow(dead_code)]

use psa_core::nep::{MatrixFunction, ScalarFunction};
use psa_core::numkernel::{ComplexMatrix, C64};
use psa_core::problems::{random, NormalStream};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rand_matrix(n: usize, seed: u64) -> ComplexMatrix {
    random(n.max(2), 1.0, 1.0, seed).unwrap()
}

/// Quadratic with random complex coefficients, identity-dominated leading term
/// and random positive weights.
pub fn rand_quadratic(n: usize, seed: u64) -> MatrixFunction {
    let m = random(n, 0.1, 0.1, seed).unwrap();
    let m = ComplexMatrix::try_from_fn(n, n, |i, j| m.get(i, j) + if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).unwrap();
    let cm = random(n, 1.0, 1.0, seed ^ 0xA5A5).unwrap();
    let k = random(n, 1.0, 1.0, seed ^ 0x5A5A).unwrap();
    let mut rng = NormalStream::new(seed.wrapping_mul(31));
    let w = [0.2 + rng.next_uniform(), 0.2 + rng.next_uniform(), 0.2 + rng.next_uniform()];
    MatrixFunction::quadratic(&m, &cm, &k, w).unwrap()
}

/// Delay-type function `z I - A - exp(-z) B`.
pub fn rand_delay(n: usize, seed: u64) -> MatrixFunction {
    let a = random(n, 0.5, 0.5, seed).unwrap();
    let b = random(n, 0.3, 0.3, seed ^ 0xFF).unwrap();
    MatrixFunction::new(
        vec![
            (ScalarFunction::monomial(1), ComplexMatrix::identity(n)),
            (ScalarFunction::monomial(0), a.scaled(c(-1.0, 0.0))),
            (ScalarFunction::exponential(-1.0), b.scaled(c(-1.0, 0.0))),
        ],
        vec![0.0, 1.0, 1.0],
    )
    .unwrap()
}

/// Normal matrix `H D H` with a Householder reflector `H`.
pub fn normal_matrix(diag: &[C64], seed: u64) -> ComplexMatrix {
    let n = diag.len();
    let mut rng = NormalStream::new(seed);
    let v: Vec<C64> = (0..n).map(|_| c(rng.next_normal(), rng.next_normal())).collect();
    let vv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let h = ComplexMatrix::try_from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        c(id, 0.0) - v[i] * v[j].conj() * (2.0 / vv)
    })
    .unwrap();
    let d = ComplexMatrix::from_diag(diag).unwrap();
    h.matmul(&d).unwrap().matmul(&h).unwrap()
}

pub fn mat_norm_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.sub(b).fro_norm()
}
