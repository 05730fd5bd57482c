//! The verification suite: every library identity and claim evaluated on a
//! fixed grid, reported as the worst residual against a tolerance.
//!
//! Strict inequalities (`Q < 0`, `R < 1`, ...) are reported as the largest
//! signed violation with tolerance 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qcoherent::coherent::{self, oracle};
use qcoherent::fock::{self, FockSpace};
use qcoherent::oscillator::{self, frame_from_alphabeta, OscillatorConfig};
use qcoherent::qmath::{self, classical};
use qcoherent::quadrature::moment_check;
use qcoherent::QParam;

use crate::sweep::{matched_config, OscillatorParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Qmath,
    Moments,
    Fock,
    Coherent,
    Oscillator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub grid_size: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerificationReport {
    fn new(name: &str, tolerance: f64, outcome: qcoherent::Result<Worst>) -> Self {
        let (grid_size, worst_residual) = match outcome {
            Ok(w) => (w.count, w.value),
            // A failed evaluation cannot pass.
            Err(_) => (0, f64::INFINITY),
        };
        VerificationReport {
            check_name: name.to_string(),
            grid_size,
            worst_residual,
            tolerance,
            passed: worst_residual <= tolerance,
        }
    }
}

/// Running maximum over a grid. NaN propagates as +inf.
#[derive(Debug, Clone, Copy)]
struct Worst {
    count: usize,
    value: f64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            count: 0,
            value: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, r: f64) {
        self.count += 1;
        self.value = if r.is_nan() {
            f64::INFINITY
        } else {
            self.value.max(r)
        };
    }
}

fn qp(q: f64) -> qcoherent::Result<QParam> {
    QParam::new(q)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `n` points evenly spaced in `(0, t_max]`.
fn open_grid(t_max: f64, n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| t_max * i as f64 / n as f64)
}

const MOMENT_QS: [f64; 4] = [1.1, 1.5, 2.0, 2.5];
const FIG_QS: [f64; 3] = [1.1, 1.2, 1.3];
const IDENTITY_QS: [f64; 5] = [1.1, 1.5, 2.0, 2.5, 3.0];

// qmath

fn q_gamma_relation() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in IDENTITY_QS {
        for n in 0..=30 {
            w.add(qmath::q_gamma_consistency(n, qp(q)?)?);
        }
    }
    Ok(w)
}

fn jackson_identity() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in IDENTITY_QS {
        for i in 0..=80 {
            w.add(qmath::jackson_identity_residual(0.25 * i as f64, qp(q)?)?);
        }
    }
    Ok(w)
}

fn q_number_recurrence() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in IDENTITY_QS {
        let p = qp(q)?;
        for n in 0..200 {
            let next = qmath::q_number(n + 1, p)?;
            w.add(rel(1.0 + q * qmath::q_number(n, p)?, next));
        }
    }
    Ok(w)
}

fn q_derivative_powers() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let xi = Complex64::new(0.7, -0.4);
    for q in IDENTITY_QS {
        let p = qp(q)?;
        for n in 1..=20u32 {
            let d = qmath::q_derivative(|x| Ok(x.powu(n)), xi, p)?;
            let expect = xi.powu(n - 1) * qmath::q_number(u64::from(n), p)?;
            w.add((d - expect).norm() / expect.norm());
        }
    }
    Ok(w)
}

// moments

fn moment_identity() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in MOMENT_QS {
        for n in 0..=12 {
            w.add(moment_check(n, qp(q)?, 1e-10)?);
        }
    }
    Ok(w)
}

fn classical_weight_limit() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let p = qp(1.0 + 1e-9)?;
    for i in 0..=1000 {
        let t = 0.01 * i as f64;
        w.add((coherent::weight_tilde(t, p)? - classical::weight_tilde(t)).abs());
    }
    Ok(w)
}

// fock

fn fock_residual(f: impl Fn(&FockSpace) -> qcoherent::Result<f64>) -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in MOMENT_QS {
        w.add(f(&FockSpace::new(60, qp(q)?)?)?);
    }
    Ok(w)
}

/// Labels with `|z|² ≤ 4`: five radii times eight phases.
fn disc_labels() -> Vec<Complex64> {
    let mut out = Vec::new();
    for r in [0.0, 0.5, 1.0, 1.5, 2.0] {
        for k in 0..8 {
            out.push(Complex64::from_polar(
                r,
                std::f64::consts::FRAC_PI_4 * k as f64,
            ));
        }
    }
    out
}

fn eigenstates() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in MOMENT_QS {
        let fs = FockSpace::new(80, qp(q)?)?;
        for z in disc_labels() {
            let cs = coherent::make_state(z, qp(q)?)?;
            w.add(coherent::eigenstate_residual(&cs, &fs)?);
        }
    }
    Ok(w)
}

fn hermiticity() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in MOMENT_QS {
        let fs = FockSpace::new(60, qp(q)?)?;
        let (x, p) = fs.quadratures();
        let (xx, pp) = fs.position_momentum(0.7, 1.3);
        for m in [x, p, xx, pp, fs.number(), fs.q_number_operator()] {
            w.add(m.hermiticity_residual());
        }
    }
    Ok(w)
}

// coherent

fn normalization() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in MOMENT_QS {
        for z in disc_labels() {
            let cs = coherent::make_state(z * 1.5, qp(q)?)?;
            w.add((cs.probabilities().iter().sum::<f64>() - 1.0).abs());
        }
    }
    Ok(w)
}

fn overlap_bound() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let labels = disc_labels();
    for q in [1.1, 2.0] {
        for &a in &labels {
            for &b in labels.iter().step_by(3) {
                w.add(coherent::overlap(a, b, qp(q)?)?.norm() - 1.0);
            }
        }
    }
    Ok(w)
}

fn mandel_negative() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in FIG_QS {
        for t in open_grid(4.0, 200) {
            w.add(coherent::mandel_q(t, qp(q)?)?);
        }
    }
    Ok(w)
}

fn mandel_small_t() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let t = 0.01;
    for q in FIG_QS {
        w.add(rel(
            coherent::mandel_q(t, qp(q)?)?,
            -(q - 1.0) * t / (q + 1.0),
        ));
    }
    Ok(w)
}

fn mandel_paths() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in FIG_QS {
        for t in open_grid(4.0, 40) {
            let p = qp(q)?;
            let a = coherent::mandel_q(t, p)?;
            w.add((a - coherent::mandel_q_operator_path(t, p)?).abs() / a.abs());
        }
    }
    Ok(w)
}

/// Central difference of `ω` at `t = 0.005`, relative to `−2(q−1)/(q+1)`.
fn metric_slope() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let (t, h) = (0.005, 1e-3);
    for q in [1.5, 2.0, 2.5] {
        let p = qp(q)?;
        let slope =
            (coherent::metric_factor(t + h, p)? - coherent::metric_factor(t - h, p)?) / (2.0 * h);
        w.add(rel(slope, -2.0 * (q - 1.0) / (q + 1.0)));
    }
    Ok(w)
}

fn metric_decreasing() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in [1.1, 1.2, 1.3, 1.5, 2.0, 2.5] {
        let p = qp(q)?;
        let mut prev = coherent::metric_factor(0.0, p)?;
        for t in open_grid(4.0, 200) {
            let cur = coherent::metric_factor(t, p)?;
            w.add((cur - prev).max(cur - 1.0));
            prev = cur;
        }
    }
    Ok(w)
}

fn metric_fd_agreement() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in FIG_QS {
        for t in open_grid(4.0, 20) {
            let p = qp(q)?;
            w.add((coherent::metric_factor(t, p)? - coherent::metric_factor_fd(t, p)?).abs());
        }
    }
    Ok(w)
}

fn squeeze_below_one() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in FIG_QS {
        for t in open_grid(1.0, 100) {
            w.add(coherent::squeeze_ratio(t, qp(q)?)? - 1.0);
        }
    }
    Ok(w)
}

fn squeeze_origin() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in FIG_QS {
        w.add((coherent::squeeze_ratio(0.0, qp(q)?)? - 1.0).abs());
    }
    Ok(w)
}

fn squeeze_oracle() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in FIG_QS {
        for t in open_grid(1.0, 10) {
            let z = Complex64::new(t.sqrt(), 0.0);
            let o = oracle::observables(z, qp(q)?, oracle::DEFAULT_DIM)?;
            w.add((coherent::squeeze_ratio(t, qp(q)?)? - o.squeeze_ratio()).abs());
        }
    }
    Ok(w)
}

/// Largest of `4N − σ` and `σ − 4N(N+1)`, relative to `σ`.
fn snr_bounds() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in [1.2, 1.5] {
        for i in 0..=39 {
            let t = 0.05 + 0.05 * i as f64;
            let p = qp(q)?;
            let s = coherent::snr(t, p)?;
            let (lo, hi) = coherent::snr_bounds(t, p)?;
            w.add((lo - s).max(s - hi) / s);
        }
    }
    Ok(w)
}

fn snr_small_t() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in [1.2, 1.5] {
        w.add((coherent::snr(0.01, qp(q)?)? / 0.04 - 1.0).abs());
    }
    Ok(w)
}

fn series_vs_oracle() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in FIG_QS {
        let p = qp(q)?;
        for z in disc_labels() {
            let t = z.norm_sqr();
            let o = oracle::observables(z, p, oracle::DEFAULT_DIM)?;
            let (vx, vp) = coherent::quadrature_variances(z, p)?;
            let (mx, mp) = coherent::quadrature_means(z, p)?;
            for (a, b) in [
                (coherent::mean_photon(t, p)?, o.mean_n),
                (coherent::photon_variance(t, p)?, o.var_n),
                (vx, o.var_x),
                (vp, o.var_p),
                (mx, o.mean_x),
                (mp, o.mean_p),
            ] {
                w.add((a - b).abs() / b.abs().max(1.0));
            }
        }
    }
    Ok(w)
}

fn bargmann() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in [1.1, 1.5, 2.5] {
        for z in disc_labels() {
            for xi in [Complex64::new(0.6, 0.0), Complex64::new(-0.3, 1.2)] {
                w.add(coherent::bargmann_eigen_residual(z, xi, qp(q)?)?);
            }
        }
    }
    Ok(w)
}

// oscillator

/// `(α, β)` pairs across the admissible region `ħ²αβ < 1` with `ħ = 1`.
fn alpha_beta_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for coupling in [0.05, 0.2, 1.0 / 3.0, 0.6, 0.9] {
        for ratio in [0.25, 1.0, 4.0, 10.0] {
            let beta = coupling / f64::sqrt(ratio);
            out.push((ratio * beta, beta));
        }
    }
    out
}

fn gur_equality() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let labels = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(-1.0, 1.0),
        Complex64::new(0.3, -1.7),
        Complex64::new(2.0, 0.5),
    ];
    for (alpha, beta) in alpha_beta_grid() {
        let cfg = OscillatorConfig::new(1.0, 1.0, 1.0, alpha, beta)?;
        let frame = frame_from_alphabeta(&cfg)?;
        for z in labels {
            w.add(oscillator::gur_residual(z, &frame, &cfg)?);
        }
    }
    Ok(w)
}

fn frame_identity() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for (alpha, beta) in alpha_beta_grid() {
        let cfg = OscillatorConfig::new(1.0, 1.0, 1.0, alpha, beta)?;
        w.add(frame_from_alphabeta(&cfg)?.frame_identity_residual());
    }
    Ok(w)
}

fn spectrum_forms() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    for q in IDENTITY_QS {
        for n in 0..=40 {
            w.add(oscillator::spectrum_forms_residual(n, qp(q)?)?);
        }
    }
    Ok(w)
}

fn matched_matrix_spectrum() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let dim = 60;
    for q in [1.1, 1.5, 2.0] {
        let cfg = matched_config(q, OscillatorParams::default())?;
        let frame = frame_from_alphabeta(&cfg)?;
        let fs = FockSpace::new(dim, frame.qp)?;
        let ev = oscillator::matrix_spectrum(&fs, &cfg, &frame);
        for (n, e) in ev.iter().take(dim - 10).enumerate() {
            w.add(rel(
                *e,
                oscillator::spectrum(n as u64, frame.qp, cfg.hbar * cfg.omega)?,
            ));
        }
    }
    Ok(w)
}

fn xp_oracle() -> qcoherent::Result<Worst> {
    let mut w = Worst::new();
    let cfg = OscillatorConfig::new(1.0, 1.0, 1.0, 0.2, 0.3)?;
    let frame = frame_from_alphabeta(&cfg)?;
    for z in disc_labels() {
        let a = oscillator::xp_statistics(z, &frame);
        let b = oscillator::xp_statistics_oracle(z, &frame, 80)?;
        for (u, v) in [
            (a.mean_x, b.mean_x),
            (a.mean_p, b.mean_p),
            (a.var_x, b.var_x),
            (a.var_p, b.var_p),
        ] {
            w.add((u - v).abs() / u.abs().max(1.0));
        }
    }
    Ok(w)
}

type CheckFn = fn() -> qcoherent::Result<Worst>;

const CHECKS: &[(Suite, &str, f64, CheckFn)] = &[
    (Suite::Qmath, "q_gamma_relation", 1e-12, q_gamma_relation),
    (Suite::Qmath, "jackson_identity", 1e-10, jackson_identity),
    (
        Suite::Qmath,
        "q_number_recurrence",
        1e-13,
        q_number_recurrence,
    ),
    (
        Suite::Qmath,
        "q_derivative_powers",
        1e-11,
        q_derivative_powers,
    ),
    (Suite::Moments, "moment_identity", 1e-8, moment_identity),
    (
        Suite::Moments,
        "classical_weight_limit",
        1e-6,
        classical_weight_limit,
    ),
    (Suite::Fock, "commutator", 1e-12, || {
        fock_residual(|fs| Ok(fock::commutator_residual(fs)))
    }),
    (Suite::Fock, "boson_map", 1e-12, || {
        fock_residual(|fs| Ok(fock::boson_map_residual(fs)))
    }),
    (Suite::Fock, "hamiltonian_diagonal", 1e-12, || {
        fock_residual(|fs| fock::spectrum_residual(fs, 1.0))
    }),
    (Suite::Fock, "eigenstate", 1e-8, eigenstates),
    (Suite::Fock, "hermiticity", 1e-15, hermiticity),
    (Suite::Coherent, "normalization", 1e-12, normalization),
    (Suite::Coherent, "overlap_bound", 1e-12, overlap_bound),
    (Suite::Coherent, "mandel_negative", 0.0, mandel_negative),
    (Suite::Coherent, "mandel_small_t", 0.2, mandel_small_t),
    (Suite::Coherent, "mandel_two_paths", 1e-10, mandel_paths),
    (Suite::Coherent, "metric_small_t_slope", 0.05, metric_slope),
    (
        Suite::Coherent,
        "metric_decreasing_below_one",
        0.0,
        metric_decreasing,
    ),
    (
        Suite::Coherent,
        "metric_finite_difference",
        1e-6,
        metric_fd_agreement,
    ),
    (Suite::Coherent, "squeeze_below_one", 0.0, squeeze_below_one),
    (Suite::Coherent, "squeeze_origin", 0.0, squeeze_origin),
    (Suite::Coherent, "squeeze_oracle", 1e-9, squeeze_oracle),
    (Suite::Coherent, "snr_bounds", 0.0, snr_bounds),
    (Suite::Coherent, "snr_small_t", 1e-3, snr_small_t),
    (Suite::Coherent, "series_vs_oracle", 1e-9, series_vs_oracle),
    (Suite::Coherent, "bargmann_eigen", 1e-10, bargmann),
    (Suite::Oscillator, "gur_equality", 1e-12, gur_equality),
    (Suite::Oscillator, "frame_identity", 1e-12, frame_identity),
    (Suite::Oscillator, "spectrum_forms", 1e-13, spectrum_forms),
    (
        Suite::Oscillator,
        "matched_matrix_spectrum",
        1e-10,
        matched_matrix_spectrum,
    ),
    (Suite::Oscillator, "xp_oracle", 1e-9, xp_oracle),
];

/// Names of the checks in `suite`, in run order.
pub fn check_names(suite: Suite) -> Vec<&'static str> {
    CHECKS
        .iter()
        .filter(|c| suite == Suite::All || c.0 == suite)
        .map(|c| c.1)
        .collect()
}

pub fn run_verify(suite: Suite) -> Vec<VerificationReport> {
    CHECKS
        .iter()
        .filter(|c| suite == Suite::All || c.0 == suite)
        .map(|&(_, name, tol, f)| VerificationReport::new(name, tol, f()))
        .collect()
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

/// One line per report: `PASS name  worst=… tol=… (n points)`.
pub fn format_plain(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!(
            "{} {:<28} worst={:.3e} tol={:.1e} ({} points)\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.check_name,
            r.worst_residual,
            r.tolerance,
            r.grid_size
        ));
    }
    s
}
