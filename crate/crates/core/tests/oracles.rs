//! Independent oracles for the scalar q-functions: exact rational
//! arithmetic for q-factorials and partial sums of E_q, and the
//! infinite-product form of Jackson's q-exponential.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use num_complex::Complex64;

use qcoherent::coherent::{
    bargmann_eigen_residual, label_continuity_modulus, overlap, weight_tilde,
};
use qcoherent::qmath::{
    jackson_exp_ln, jackson_identity_residual, q_derivative, q_exp_complex, q_exp_ln,
    q_factorial_ln, q_gamma_consistency, q_number,
};
use qcoherent::QParam;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rat_q_number(n: u32, q: &BigRational) -> BigRational {
    let mut s = BigRational::zero();
    let mut p = BigRational::one();
    for _ in 0..n {
        s += &p;
        p *= q;
    }
    s
}

fn rat_q_factorial(n: u32, q: &BigRational) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| acc * rat_q_number(k, q))
}

/// Σ_{n<terms} tⁿ/[n]_q!, exactly.
fn rat_q_exp(t: &BigRational, q: &BigRational, terms: u32) -> BigRational {
    let mut sum = BigRational::zero();
    let mut tn = BigRational::one();
    let mut fact = BigRational::one();
    for n in 0..terms {
        if n > 0 {
            tn *= t;
            fact *= rat_q_number(n, q);
        }
        sum += &tn / &fact;
    }
    sum
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

fn qp(q: f64) -> QParam {
    QParam::new(q).unwrap()
}

#[test]
fn q_number_direct_sum() {
    let q = rat(3, 2);
    assert_eq!(f(&rat_q_number(4, &q)), 8.125);
    for n in 0..40 {
        let exact = f(&rat_q_number(n, &q));
        let v = q_number(u64::from(n), qp(1.5)).unwrap();
        assert!((v - exact).abs() <= 1e-14 * exact.max(1.0), "n={n}");
    }
}

#[test]
fn q_factorial_exact_products() {
    let q = rat(3, 2);
    let exact = rat_q_factorial(5, &q);
    assert_eq!(exact, rat(1_302_925, 1_024));
    assert_eq!(f(&exact), 1272.3876953125);
    let v = q_factorial_ln(5, qp(1.5)).ln_magnitude();
    assert!((v - 1272.3876953125f64.ln()).abs() < 1e-14);

    for (num, den) in [(11, 10), (13, 10), (2, 1), (5, 2)] {
        let q = rat(num, den);
        let qf = num as f64 / den as f64;
        for n in [1u32, 7, 20, 45] {
            let exact = f(&rat_q_factorial(n, &q)).ln();
            let v = q_factorial_ln(u64::from(n), qp(qf)).ln_magnitude();
            assert!(
                (v - exact).abs() <= 1e-13 * exact.abs().max(1.0),
                "q={qf} n={n}"
            );
        }
    }
}

#[test]
fn q_exp_against_exact_partial_sums() {
    // 60 terms are far past convergence for these arguments.
    let cases = [
        ((5, 2), (2, 1)),
        ((1, 1), (3, 2)),
        ((7, 1), (13, 10)),
        ((3, 10), (11, 10)),
    ];
    for ((tn, td), (qn, qd)) in cases {
        let exact = f(&rat_q_exp(&rat(tn, td), &rat(qn, qd), 60));
        let t = tn as f64 / td as f64;
        let q = qn as f64 / qd as f64;
        let v = q_exp_ln(t, qp(q)).unwrap().value();
        assert!(
            (v / exact - 1.0).abs() < 1e-12,
            "t={t} q={q}: {v} vs {exact}"
        );
    }
}

#[test]
fn weight_at_one_against_exact_series() {
    // W̃_{1.5}(1) = (0.5/ln 1.5) / E_{1.5}(1.5)
    let e = f(&rat_q_exp(&rat(3, 2), &rat(3, 2), 60));
    let expect = 0.5 / 1.5f64.ln() / e;
    let w = weight_tilde(1.0, qp(1.5)).unwrap();
    assert!(w > 0.0);
    assert!((w / expect - 1.0).abs() < 1e-12);
}

#[test]
fn q_gamma_relation_grid() {
    for q in [1.1, 1.5, 2.0, 2.5, 3.0] {
        for n in 0..=30 {
            let d = q_gamma_consistency(n, qp(q)).unwrap();
            assert!(d <= 1e-12, "q={q} n={n}: {d}");
        }
    }
}

/// ln (−x; b)_∞ = Σ_k ln(1 + x b^k).
fn jackson_product_ln(x: f64, b: f64) -> f64 {
    let mut s = 0.0;
    let mut bk = 1.0;
    while x * bk > 1e-20 {
        s += (x * bk).ln_1p();
        bk *= b;
    }
    s
}

#[test]
fn jackson_series_matches_product() {
    for b in [1.0 / 1.1, 0.5, 0.4] {
        for x in [0.1, 1.0, 5.0, 30.0] {
            let s = jackson_exp_ln(x, b).unwrap().ln_magnitude();
            let p = jackson_product_ln(x, b);
            assert!(
                (s - p).abs() <= 1e-12 * p.abs().max(1.0),
                "b={b} x={x}: {s} vs {p}"
            );
        }
    }
}

#[test]
fn jackson_identity_grid() {
    assert!(jackson_identity_residual(1.0, qp(1.5)).unwrap() <= 1e-10);
    assert!(jackson_identity_residual(10.0, qp(2.0)).unwrap() <= 1e-10);
    for q in [1.1, 1.5, 2.0, 2.5, 3.0] {
        for i in 0..=40 {
            let t = 0.5 * i as f64;
            let r = jackson_identity_residual(t, qp(q)).unwrap();
            assert!(r <= 1e-10, "q={q} t={t}: {r}");
        }
    }
}

#[test]
fn q_derivative_eigenrelation_of_q_exp() {
    let p = qp(1.5);
    let z = Complex64::new(0.5, 0.0);
    let d = q_derivative(
        |x| Ok(q_exp_complex(z * x, p)?.to_complex()),
        Complex64::new(1.0, 0.0),
        p,
    )
    .unwrap();
    let expect = 0.5 * q_exp_ln(0.5, p).unwrap().value();
    assert!((d.re - expect).abs() < 1e-12 * expect && d.im.abs() < 1e-14);
}

#[test]
fn q_derivative_of_powers() {
    for q in [1.1, 1.5, 2.0, 2.5] {
        let p = qp(q);
        for n in 0..=15u32 {
            let xi = Complex64::new(0.8, -0.3);
            let d = q_derivative(|x| Ok(x.powu(n)), xi, p).unwrap();
            let expect = if n == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                xi.powu(n - 1) * q_number(u64::from(n), p).unwrap()
            };
            assert!(
                (d - expect).norm() <= 1e-12 * expect.norm().max(1e-300) + 1e-300,
                "q={q} n={n}"
            );
        }
    }
}

#[test]
fn overlap_against_amplitude_sum() {
    // ⟨0.3|0.5⟩ = Σ c_n(0.3) c_n(0.5), with amplitudes from exact q-factorials.
    let q = rat(3, 2);
    let p = qp(1.5);
    let (a, b) = (0.5f64, 0.3f64);
    let mut sum = 0.0;
    for n in 0..50u32 {
        let fact = f(&rat_q_factorial(n, &q));
        sum += (a * b).powi(n as i32) / fact;
    }
    let na = f(&rat_q_exp(&rat(1, 4), &q, 50));
    let nb = f(&rat_q_exp(&rat(9, 100), &q, 50));
    let expect = sum / (na * nb).sqrt();
    let v = overlap(Complex64::new(a, 0.0), Complex64::new(b, 0.0), p).unwrap();
    assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-15);
}

#[test]
fn continuity_is_quadratic_in_step() {
    let p = qp(2.0);
    let z = Complex64::new(1.0, 0.0);
    let mut dz = 0.1;
    let mut prev = label_continuity_modulus(z, Complex64::new(dz, 0.0), p).unwrap();
    let mut last_ratio = 0.0;
    for _ in 0..10 {
        dz *= 0.5;
        let cur = label_continuity_modulus(z, Complex64::new(dz, 0.0), p).unwrap();
        assert!(cur < prev);
        last_ratio = cur / prev;
        prev = cur;
    }
    assert!((last_ratio - 0.25).abs() < 1e-3, "{last_ratio}");
}

#[test]
fn bargmann_eigen_equation() {
    let p = qp(1.5);
    for (z, xi) in [
        (Complex64::new(0.5, 0.0), Complex64::new(0.7, 0.0)),
        (Complex64::new(0.3, -0.8), Complex64::new(-0.2, 1.1)),
        (Complex64::new(1.5, 0.5), Complex64::new(0.4, 0.4)),
    ] {
        let r = bargmann_eigen_residual(z, xi, p).unwrap();
        assert!(r <= 1e-10, "z={z} xi={xi}: {r}");
    }
}
