mod common;

use common::{c, rand_matrix};
use proptest::prelude::*;
use psa_core::numkernel::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smallest_singular_triple_is_consistent(n in 1usize..9, seed in any::<u64>()) {
        let a = rand_matrix(n.max(2), seed);
        let tr = min_singular_triple(&a).unwrap();
        let scale = a.fro_norm();
        let av = a.mul_vec(&tr.v);
        let ahu = a.adjoint_mul_vec(&tr.u);
        for i in 0..a.nrows() {
            prop_assert!((av[i] - tr.u[i] * tr.sigma).norm() <= 1e-12 * scale);
            prop_assert!((ahu[i] - tr.v[i] * tr.sigma).norm() <= 1e-12 * scale);
        }
        prop_assert!((norm2(&tr.u) - 1.0).abs() < 1e-12);
        prop_assert!((norm2(&tr.v) - 1.0).abs() < 1e-12);
        if let Some(next) = tr.sigma_next {
            prop_assert!(next >= tr.sigma);
        }
    }

    #[test]
    fn eigenpairs_have_small_residuals(n in 2usize..10, seed in any::<u64>()) {
        let a = rand_matrix(n, seed);
        let es = eig_full(&a).unwrap();
        let scale = a.fro_norm();
        for (k, &lam) in es.values.iter().enumerate() {
            let (x, y) = (&es.right[k], &es.left[k]);
            let ax = a.mul_vec(x);
            let ahy = a.adjoint_mul_vec(y);
            for i in 0..n {
                prop_assert!((ax[i] - x[i] * lam).norm() <= 1e-10 * scale);
                prop_assert!((ahy[i] - y[i] * lam.conj()).norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn quadratic_eigenvalues_make_the_polynomial_singular(n in 1usize..6, seed in any::<u64>()) {
        let n = n.max(2);
        let m = ComplexMatrix::identity(n);
        let cm = rand_matrix(n, seed);
        let k = rand_matrix(n, seed ^ 1);
        let ev = quad_eig(&m, &cm, &k).unwrap();
        prop_assert_eq!(ev.len(), 2 * n);
        for lam in ev {
            let p = ComplexMatrix::try_from_fn(n, n, |i, j| {
                m.get(i, j) * lam * lam + cm.get(i, j) * lam + k.get(i, j)
            }).unwrap();
            let scale = lam.norm_sqr() + lam.norm() * cm.fro_norm() + k.fro_norm();
            prop_assert!(min_singular_value(&p).unwrap() <= 1e-9 * scale);
        }
    }

    #[test]
    fn rightmost_has_maximal_real_part(vals in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..20)) {
        let zs: Vec<C64> = vals.iter().map(|&(r, i)| c(r, i)).collect();
        let k = rightmost(&zs, TieRule::LargestImag).unwrap();
        prop_assert!(zs.iter().all(|z| z.re <= zs[k].re));
    }
}

#[test]
fn spd_sqrt_squares_back() {
    let s = ComplexMatrix::from_real_rows(&[vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 0.5], vec![0.0, 0.5, 2.0]]).unwrap();
    let r = spd_sqrt(&s).unwrap();
    assert!(r.matmul(&r).unwrap().sub(&s).fro_norm() < 1e-12);
    assert!(r.hermitian_defect() < 1e-14);
}

#[test]
fn non_finite_input_is_rejected() {
    let bad = ComplexMatrix::from_rows(&[vec![c(f64::NAN, 0.0)]]);
    assert!(matches!(bad, Err(KernelError::NonFinite { .. })));
    assert!(matches!(rightmost(&[], TieRule::LargestImag), Err(KernelError::EmptyList)));
}

#[test]
fn rightmost_tie_rules() {
    let zs = [c(1.0, -2.0), c(1.0, 3.0), c(0.0, 9.0)];
    assert_eq!(rightmost(&zs, TieRule::LargestImag).unwrap(), 1);
    assert_eq!(rightmost(&zs, TieRule::SmallestImag).unwrap(), 0);
}
