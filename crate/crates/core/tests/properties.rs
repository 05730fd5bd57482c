use num_complex::Complex64;
use proptest::prelude::*;

use qcoherent::coherent::{
    make_state, mandel_q, mean_photon, metric_factor, overlap, photon_variance,
    quadrature_variances, snr, snr_bounds, squeeze_ratio,
};
use qcoherent::oscillator::{
    frame_from_alphabeta, gur_residual, spectrum_forms_residual, OscillatorConfig,
};
use qcoherent::qmath::{classical, q_derivative, q_exp_ln, q_factorial_ln, q_number};
use qcoherent::quadrature::{
    integrate_semiinfinite, integrate_truncated, moment_integral, moment_integrand,
};
use qcoherent::QParam;

fn qp(q: f64) -> QParam {
    QParam::new(q).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn q_number_recurrence_and_ordering(q in 1.0001f64..4.0, n in 0u64..200) {
        let p = qp(q);
        let a = q_number(n, p).unwrap();
        let b = q_number(n + 1, p).unwrap();
        // [n+1]_q = 1 + q [n]_q
        prop_assert!((b - (1.0 + q * a)).abs() <= 1e-12 * b);
        prop_assert!(b > a);
        prop_assert!(a >= n as f64 * (1.0 - 1e-12));
    }

    #[test]
    fn q_factorial_dominates_factorial(q in 1.0001f64..4.0, n in 0u64..150) {
        let p = qp(q);
        let lq = q_factorial_ln(n, p).ln_magnitude();
        prop_assert!(lq >= classical::factorial_ln(n) - 1e-9);
    }

    #[test]
    fn q_exp_approaches_exp(t in 0.0f64..8.0) {
        let p = qp(1.0 + 1e-7);
        let e = q_exp_ln(t, p).unwrap().ln_magnitude();
        prop_assert!((e - classical::exp_ln(t)).abs() <= 1e-5 * t.max(1.0));
    }

    #[test]
    fn q_exp_below_exp(q in 1.01f64..3.0, t in 0.01f64..20.0) {
        let e = q_exp_ln(t, qp(q)).unwrap().ln_magnitude();
        prop_assert!(e < t);
        prop_assert!(e > 0.0);
    }

    #[test]
    fn q_derivative_lowers_power(q in 1.01f64..3.0, n in 1u32..25, re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let p = qp(q);
        let xi = Complex64::new(re, im);
        prop_assume!(xi.norm() > 1e-3);
        let d = q_derivative(|x| Ok(x.powu(n)), xi, p).unwrap();
        let expect = xi.powu(n - 1) * q_number(u64::from(n), p).unwrap();
        prop_assert!((d - expect).norm() <= 1e-11 * expect.norm());
    }

    #[test]
    fn state_is_normalized(q in 1.05f64..3.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let cs = make_state(Complex64::new(re, im), qp(q)).unwrap();
        let total: f64 = cs.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(cs.tail_mass() <= 1e-13);
    }

    #[test]
    fn overlap_is_contractive(q in 1.05f64..3.0, a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0) {
        let z1 = Complex64::new(a, b);
        let z2 = Complex64::new(c, d);
        let p = qp(q);
        let o = overlap(z1, z2, p).unwrap();
        prop_assert!(o.norm() <= 1.0 + 1e-12);
        let self_o = overlap(z1, z1, p).unwrap();
        prop_assert!((self_o - 1.0).norm() <= 1e-12);
        let rev = overlap(z2, z1, p).unwrap();
        prop_assert!((rev - o.conj()).norm() <= 1e-12);
    }

    #[test]
    fn quadrature_uncertainty_floor(q in 1.01f64..3.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let z = Complex64::new(re, im);
        let (vx, vp) = quadrature_variances(z, qp(q)).unwrap();
        prop_assert!(vx * vp >= 0.25 * (1.0 - 1e-12));
    }

    #[test]
    fn photon_statistics_sub_poissonian(q in 1.05f64..2.5, t in 0.01f64..4.0) {
        let p = qp(q);
        prop_assert!(mandel_q(t, p).unwrap() < 0.0);
        prop_assert!(photon_variance(t, p).unwrap() > 0.0);
        prop_assert!(mean_photon(t, p).unwrap() < t);
    }

    #[test]
    fn metric_and_squeezing_below_one(q in 1.05f64..2.5, t in 0.01f64..4.0) {
        let p = qp(q);
        prop_assert!(metric_factor(t, p).unwrap() < 1.0);
        prop_assert!(metric_factor(t + 0.05, p).unwrap() < metric_factor(t, p).unwrap());
        if t <= 1.0 {
            prop_assert!(squeeze_ratio(t, p).unwrap() < 1.0);
        }
    }

    #[test]
    fn snr_within_bounds(q in 1.2f64..1.5, t in 0.05f64..2.0) {
        let p = qp(q);
        let s = snr(t, p).unwrap();
        let (lo, hi) = snr_bounds(t, p).unwrap();
        prop_assert!(lo < s && s < hi);
    }

    #[test]
    fn gur_equality(alpha in 0.01f64..0.8, ratio in 0.2f64..5.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let beta = alpha * ratio;
        prop_assume!(alpha * beta < 1.0);
        let cfg = OscillatorConfig::new(1.0, 1.0, 1.0, alpha, beta).unwrap();
        let frame = frame_from_alphabeta(&cfg).unwrap();
        prop_assert!(frame.frame_identity_residual() <= 1e-12);
        let r = gur_residual(Complex64::new(re, im), &frame, &cfg).unwrap();
        prop_assert!(r <= 1e-12);
    }

    #[test]
    fn spectrum_forms_agree(q in 1.01f64..3.0, n in 0u64..=40) {
        prop_assert!(spectrum_forms_residual(n, qp(q)).unwrap() <= 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn integration_is_linear(a in 0.1f64..3.0, b in 0.1f64..3.0, c in -2.0f64..2.0) {
        let f = move |t: f64| (-a * t).exp();
        let g = move |t: f64| t * (-b * t).exp();
        let ia = integrate_semiinfinite(f, 1e-11, 1e-14).unwrap().value;
        let ib = integrate_semiinfinite(g, 1e-11, 1e-14).unwrap().value;
        let ic = integrate_semiinfinite(move |t| f(t) + c * g(t), 1e-11, 1e-14).unwrap().value;
        prop_assert!((ic - (ia + c * ib)).abs() <= 1e-9 * (ia.abs() + (c * ib).abs()));
        prop_assert!((ia - 1.0 / a).abs() <= 1e-9 / a);
    }

    #[test]
    fn moments_stable_under_wider_cutoff(q in 1.1f64..2.5, n in 0u32..=8) {
        let p = qp(q);
        let r = moment_integral(n, p, 1e-10, 1e-14).unwrap();
        let wide = integrate_truncated(moment_integrand(n, p), 2.0 * r.cutoff, 1e-10, 1e-14).unwrap();
        prop_assert!((wide.value - r.value).abs() <= 1e-9);
        prop_assert!((r.value - 1.0).abs() <= 1e-8);
    }
}
