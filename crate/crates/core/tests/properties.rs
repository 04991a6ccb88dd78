use std::f64::consts::PI;

use gabor_phase::ansatz::{band_pairs, build_predictor, EntireFunction};
use gabor_phase::gabor::{box_points, dual_window, Signal, LATTICE_STEP};
use gabor_phase::graph::{build_graph, c_stab};
use gabor_phase::numerics::{hermitian_eig, real_embed, symmetric_eig, theta3, HermitianMatrix, SplitMix64};
use gabor_phase::pipeline::{align_phase, calibrated_eps_prime, coefficient_bound, max_sampling_step};
use gabor_phase::sdp::psd_project;
use num_complex::Complex64;
use proptest::prelude::*;

fn random_hermitian(dim: usize, seed: u64) -> HermitianMatrix {
    let mut g = SplitMix64::new(seed);
    HermitianMatrix::from_upper_fn(dim, |_, _| Complex64::new(g.normal(), g.normal()))
}

fn random_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut g = SplitMix64::new(seed);
    (0..dim).map(|_| Complex64::new(g.normal(), g.normal())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta3_even_and_periodic(z in -3.0f64..3.0, q in 0.01f64..0.9) {
        let a = theta3(z, q).unwrap();
        prop_assert!((a - theta3(-z, q).unwrap()).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!((a - theta3(z + PI, q).unwrap()).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn theta3_at_zero_increases_with_q(q in 0.01f64..0.85, dq in 0.001f64..0.1) {
        prop_assert!(theta3(0.0, q + dq).unwrap() > theta3(0.0, q).unwrap());
    }

    #[test]
    fn eigenvalues_sum_to_trace(dim in 1usize..12, seed in any::<u64>()) {
        let m = random_hermitian(dim, seed);
        let e = hermitian_eig(&m).unwrap();
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - m.trace()).abs() <= 1e-9 * (1.0 + m.frobenius_norm()));
    }

    #[test]
    fn real_embedding_doubles_the_spectrum(dim in 1usize..8, seed in any::<u64>()) {
        let m = random_hermitian(dim, seed);
        let mut want: Vec<f64> = hermitian_eig(&m).unwrap().values.iter().flat_map(|&l| [l, l]).collect();
        let (mut got, _) = symmetric_eig(&real_embed(&m));
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + m.frobenius_norm()));
        }
    }

    #[test]
    fn psd_projection_is_idempotent_and_psd(dim in 1usize..10, seed in any::<u64>()) {
        let p = psd_project(&random_hermitian(dim, seed)).unwrap();
        prop_assert!(hermitian_eig(&p).unwrap().min_value() >= -1e-10);
        prop_assert!(psd_project(&p).unwrap().sub(&p).max_abs() <= 1e-10);
    }

    #[test]
    fn laplacian_scales_with_weights(seed in any::<u64>(), k in 0.1f64..10.0) {
        let pts = box_points(LATTICE_STEP, 1.5, 1.5);
        let mut g = SplitMix64::new(seed);
        let w: Vec<f64> = pts.iter().map(|_| g.uniform(0.0, 2.0)).collect();
        let kw: Vec<f64> = w.iter().map(|x| k * x).collect();
        let l1 = build_graph(&pts, &w, 1.01).unwrap().spectral_gap().unwrap();
        let lk = build_graph(&pts, &kw, 1.01).unwrap().spectral_gap().unwrap();
        prop_assert!((lk - k * l1).abs() <= 1e-9 * (1.0 + lk));
    }

    #[test]
    fn laplacian_annihilates_sqrt_weights(seed in any::<u64>()) {
        let pts = box_points(LATTICE_STEP, 1.5, 1.5);
        let mut g = SplitMix64::new(seed);
        let w: Vec<f64> = pts.iter().map(|_| g.uniform(0.0, 2.0)).collect();
        let l = build_graph(&pts, &w, 1.42).unwrap().laplacian();
        let h: Vec<Complex64> = w.iter().map(|x| Complex64::new(x.sqrt(), 0.0)).collect();
        prop_assert!(l.matvec(&h).iter().all(|z| z.norm() <= 1e-12));
        prop_assert!(hermitian_eig(&l).unwrap().min_value() >= -1e-12);
    }

    #[test]
    fn alignment_is_phase_invariant(seed in any::<u64>(), theta in 0.0f64..(2.0 * PI)) {
        let a = random_vector(7, seed);
        let b = random_vector(7, seed ^ 0x5555);
        let rot = Complex64::from_polar(1.0, theta);
        let rb: Vec<Complex64> = b.iter().map(|z| z * rot).collect();
        let (_, e1) = align_phase(&a, &b);
        let (_, e2) = align_phase(&a, &rb);
        prop_assert!((e1 - e2).abs() <= 1e-9 * (1.0 + e1));
        let (t, e) = align_phase(&a, &a.iter().map(|z| z * rot).collect::<Vec<_>>());
        prop_assert!(e <= 1e-9);
        prop_assert!((Complex64::from_polar(1.0, t) - rot).norm() <= 1e-9);
    }

    #[test]
    fn predictor_is_exact_for_true_spectrogram(seed in 0u64..1000) {
        let f = Signal::random(LATTICE_STEP, 1.0, 1.0, seed).unwrap();
        let lambda = box_points(LATTICE_STEP, 1.0, 1.0);
        let table = build_predictor(&EntireFunction::SpectrogramOf(&f), &lambda, 1.01).unwrap();
        let x: Vec<Complex64> = lambda.iter().map(|&z| f.gabor_transform(z)).collect();
        prop_assert!(table.max_deviation(&HermitianMatrix::outer(&x)) <= 1e-10);
        prop_assert_eq!(table.len(), band_pairs(&lambda, 1.01).len());
    }

    #[test]
    fn dual_window_is_even_and_enveloped(t in -6.0f64..6.0) {
        let v = dual_window(t);
        prop_assert!((v - dual_window(-t)).abs() <= 1e-12);
        prop_assert!(v.abs() <= (-PI * t.abs() / 2f64.sqrt()).exp());
    }

    #[test]
    fn gabor_transform_commutes_with_scaling(seed in 0u64..1000, re in -2.0f64..2.0, im in -2.0f64..2.0, x in -2.0f64..2.0, w in -2.0f64..2.0) {
        let f = Signal::random(LATTICE_STEP, 1.0, 1.0, seed).unwrap();
        let k = Complex64::new(re, im);
        let z = [x, w];
        let lhs = f.scaled(k).gabor_transform(z);
        prop_assert!((lhs - k * f.gabor_transform(z)).norm() <= 1e-12 * (1.0 + lhs.norm()));
        prop_assert!((f.scaled(k).spectrogram(z) - k.norm_sqr() * f.spectrogram(z)).abs() <= 1e-10 * (1.0 + lhs.norm_sqr()));
    }

    #[test]
    fn bound_formulas_are_monotone(eps in 1e-14f64..1e-2, l2 in 1e-4f64..10.0, r in 0.5f64..1.6) {
        prop_assert!(calibrated_eps_prime(eps, r) < calibrated_eps_prime(2.0 * eps, r));
        prop_assert!(max_sampling_step(eps) < max_sampling_step(2.0 * eps));
        prop_assert!(c_stab(1.0, 2.0 * l2, r) < c_stab(1.0, l2, r));
        let cs = c_stab(1.0, l2, r);
        let ratio = coefficient_bound(cs, 16.0 * eps) / coefficient_bound(cs, eps);
        prop_assert!((ratio - 2.0).abs() <= 1e-12);
    }
}
