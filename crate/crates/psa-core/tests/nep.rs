mod common;

use common::{c, rand_delay, rand_quadratic};
use proptest::prelude::*;
use psa_core::nep::*;
use psa_core::numkernel::*;
use psa_core::problems::{damping_function, DampingSpec, NormalStream};

fn random_dense(t: &MatrixFunction, seed: u64, target_norm: f64) -> Perturbation {
    let n = t.dim();
    let mut rng = NormalStream::new(seed);
    let blocks: Vec<ComplexMatrix> = (0..t.num_terms())
        .map(|_| ComplexMatrix::try_from_fn(n, n, |_, _| c(rng.next_normal(), rng.next_normal())).unwrap())
        .collect();
    let p = Perturbation::Dense(blocks.clone());
    let s = target_norm / p.norm().unwrap();
    Perturbation::Dense(blocks.iter().map(|b| b.scaled(c(s, 0.0))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The minimal perturbation has norm phi, makes z an eigenvalue, and no
    /// perturbation of smaller norm can do so.
    #[test]
    fn backward_error_postconditions(
        n in 2usize..6,
        seed in any::<u64>(),
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
        delay in any::<bool>(),
    ) {
        let t = if delay { rand_delay(n, seed) } else { rand_quadratic(n, seed) };
        let z = c(re, im);
        let be = backward_error(&t, z).unwrap();
        let g = gamma(&t, z).unwrap().g;
        prop_assert!(be.phi >= 0.0);
        prop_assert!((be.minimal.norm().unwrap() - be.phi).abs() <= 1e-12 * be.phi.max(1.0));

        let mut perturbed = t.value(z).unwrap();
        perturbed.add_scaled(c(1.0, 0.0), &be.minimal.evaluate(&t, z).unwrap());
        let scale = t.value(z).unwrap().fro_norm().max(1.0);
        prop_assert!(min_singular_value(&perturbed).unwrap() <= 1e-11 * scale);

        let smaller = random_dense(&t, seed ^ 0x1234, 0.9 * be.phi);
        let dz = smaller.evaluate(&t, z).unwrap();
        prop_assert!(spectral_norm(&dz).unwrap() <= g * 0.9 * be.phi * (1.0 + 1e-10));
        let mut other = t.value(z).unwrap();
        other.add_scaled(c(1.0, 0.0), &dz);
        prop_assert!(min_singular_value(&other).unwrap() >= 0.1 * be.triple.sigma * (1.0 - 1e-8) - 1e-13 * scale);

        let m = membership(&t, z, be.phi * 1.01).unwrap();
        prop_assert!(m.inside);
        prop_assert!(!membership(&t, z, be.phi * 0.99).unwrap().inside);
    }

    /// Moving along the optimal direction shifts the eigenvalue right at the
    /// predicted rate.
    #[test]
    fn optimal_direction_rate_matches_finite_difference(n in 2usize..5, seed in any::<u64>()) {
        let t = rand_quadratic(n, seed);
        let ev = t.eigenvalues().unwrap();
        let mu = ev[rightmost(&ev, TieRule::LargestImag).unwrap()];
        let (x, y) = null_vectors(&t, mu).unwrap();
        let Ok(opt) = optimal_direction(&t, mu, &x, &y) else { return Ok(()) };
        let sens = eig_sensitivity(&t, mu, &opt.x, &y, &opt.dir).unwrap();
        prop_assert!((sens.re - opt.rate).abs() <= 1e-8 * opt.rate.max(1.0));
        prop_assert!(sens.im.abs() <= 1e-8 * opt.rate.max(1.0));

        let h = 1e-6;
        let moved = t.perturbed(&opt.dir, h).unwrap().eigenvalues().unwrap();
        let (k, d1, d2) = nearest(&moved, mu).unwrap();
        prop_assume!(d2 > 100.0 * d1);
        let fd = (moved[k].re - mu.re) / h;
        prop_assert!((fd - opt.rate).abs() <= 1e-3 * opt.rate.max(1.0), "fd {} rate {}", fd, opt.rate);
    }
}

#[test]
fn damping_fixed_point_is_rbvt() {
    let t = damping_function(&DampingSpec::new(20, 0.005, 25.0)).unwrap();
    let z = c(0.3049279775324, 7.7520367793692);
    let report = rbvt_check(&t, z, 0.1, RbvtTolerances::for_eps(0.1)).unwrap();
    assert_eq!(report.verdict, Verdict::Rbvt, "{report:?}");
    let s = s_map(&t, z).unwrap();
    assert!(s.re > 0.0 && s.im.abs() < 1e-6 * s.norm());
}

#[test]
fn interior_and_exterior_verdicts() {
    let t = damping_function(&DampingSpec::new(20, 0.005, 25.0)).unwrap();
    let eig = c(-0.03863301248340148, 7.7265059135456235);
    let inside = rbvt_check(&t, eig, 0.1, RbvtTolerances::for_eps(0.1)).unwrap();
    assert_eq!(inside.verdict, Verdict::Interior);
    let outside = rbvt_check(&t, c(5.0, 7.7), 0.1, RbvtTolerances::for_eps(0.1)).unwrap();
    assert_eq!(outside.verdict, Verdict::Exterior);
}

#[test]
fn damping_top_eigenvalue() {
    let t = damping_function(&DampingSpec::new(20, 0.005, 25.0)).unwrap();
    let ev = t.eigenvalues().unwrap();
    let top = ev.iter().copied().max_by(|a, b| a.im.total_cmp(&b.im)).unwrap();
    assert!((top - c(-0.03863, 7.72651)).norm() < 1e-5, "{top}");
}

#[test]
fn delay_eigenvalue_refinement() {
    let t = rand_delay(3, 11);
    let guess = c(0.2, 0.1);
    let mu = refine_eigenvalue(&t, guess, 1e-14, 100).unwrap();
    let s = min_singular_value(&t.value(mu).unwrap()).unwrap();
    assert!(s < 1e-10, "sigma {s}");
}
