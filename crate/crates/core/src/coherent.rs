//! The q-deformed coherent states
//! `|z⟩_q = E_q(|z|²)^{−1/2} Σ zⁿ/√([n]_q!) |n⟩_q` and their observables.
//!
//! Expectation values of conventional-boson operators reduce to the series
//!
//! ```text
//! ⟨(a†)^p a^r⟩ = (z*)^p z^r S^{(p,r)}(t),
//! S^{(p,r)}(t) = E_q(t)^{-1} Σ_n √((n+p)!(n+r)! / ([n+p]_q! [n+r]_q!)) tⁿ/n!
//! ```
//!
//! with `t = |z|²`. All sums run in the log domain. The [`oracle`] submodule
//! recomputes the same quantities from dense Fock-space matrices.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{
    self, q_derivative, q_exp_complex, q_exp_ln, q_number_ln, LogValue, QFactorialLn, QParam,
    RealLogSum,
};

/// Omitted photon-number mass allowed past `n_max`.
pub const TAIL_MASS_TARGET: f64 = 1e-14;
/// Extra terms kept beyond the tail rule.
pub const GUARD_TERMS: usize = 10;
/// Largest `p`, `r` accepted by [`s_coefficient`].
pub const S_INDEX_CAP: u32 = 4;

/// Table of `ln [n]_q!` grown on demand.
#[derive(Debug, Clone)]
struct LnQFactorials {
    gen: QFactorialLn,
    values: Vec<f64>,
}

impl LnQFactorials {
    fn new(qp: QParam) -> Self {
        LnQFactorials {
            gen: QFactorialLn::new(qp),
            values: Vec::new(),
        }
    }

    fn get(&mut self, n: usize) -> f64 {
        while self.values.len() <= n {
            let v = self.gen.next_value();
            self.values.push(v);
        }
        self.values[n]
    }
}

fn ln_factorial(n: usize) -> f64 {
    qmath::classical::factorial_ln(n as u64)
}

/// `Σ_n g(n) p_n(t)` for a non-negative `g` given through `ln g(n)`, where
/// `p_n(t) = tⁿ / ([n]_q! E_q(t))`. Requires `t > 0`.
fn distribution_sum<G>(t: f64, qp: QParam, ln_g: G) -> Result<f64>
where
    G: Fn(usize) -> f64,
{
    let ln_t = t.ln();
    let mut fact = QFactorialLn::new(qp);
    let num = RealLogSum::sum_series(|n| (ln_g(n) + n as f64 * ln_t - fact.next_value(), 1.0))?;
    if num.is_zero() {
        return Ok(0.0);
    }
    Ok((num.ln_magnitude() - q_exp_ln(t, qp)?.ln_magnitude()).exp())
}

fn check_t(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!(
            "t = |z|^2 must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

fn check_z(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("coherent-state label"));
    }
    Ok(())
}

/// A normalized coherent state `|z⟩_q`.
#[derive(Debug, Clone)]
pub struct CoherentState {
    z: Complex64,
    t: f64,
    qp: QParam,
    n_max: usize,
    /// `ln |zⁿ/√([n]_q!)|` for `n = 0..=n_max`; the phase is `n·arg z`.
    amp_ln: Vec<LogValue>,
    norm_ln: f64,
}

impl CoherentState {
    pub fn new(z: Complex64, qp: QParam) -> Result<Self> {
        check_z(z)?;
        let t = z.norm_sqr();
        let norm_ln = q_exp_ln(t, qp)?.ln_magnitude();
        let ln_r = z.norm().ln();
        let mut fact = QFactorialLn::new(qp);
        let mut amp_ln = Vec::new();
        let mut n_max = None;
        for n in 0..qmath::TERM_CAP {
            let lf = fact.next_value();
            let a = if t == 0.0 && n > 0 {
                LogValue::ZERO
            } else if n == 0 {
                LogValue::ONE
            } else {
                LogValue::positive(n as f64 * ln_r - 0.5 * lf)
            };
            amp_ln.push(a);
            if n_max.is_none() && tail_mass_after(n, t, qp, lf, norm_ln) < TAIL_MASS_TARGET {
                n_max = Some(n + GUARD_TERMS);
            }
            if let Some(m) = n_max {
                if n >= m {
                    break;
                }
            }
        }
        let n_max = n_max.ok_or(Error::NonConvergence {
            terms: qmath::TERM_CAP,
        })?;
        Ok(CoherentState {
            z,
            t,
            qp,
            n_max,
            amp_ln,
            norm_ln,
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `t = |z|²`.
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn qp(&self) -> QParam {
        self.qp
    }

    /// Highest stored Fock index.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amp_ln(&self) -> &[LogValue] {
        &self.amp_ln
    }

    /// `ln E_q(t)`.
    pub fn norm_ln(&self) -> f64 {
        self.norm_ln
    }

    /// Photon-number distribution `p_n` for `n = 0..=n_max`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amp_ln
            .iter()
            .map(|a| match a.ln() {
                Some(l) => (2.0 * l - self.norm_ln).exp(),
                None => 0.0,
            })
            .collect()
    }

    /// Upper bound on `Σ_{n > n_max} p_n`.
    pub fn tail_mass(&self) -> f64 {
        let lf = qmath::q_factorial_ln(self.n_max as u64, self.qp).ln_magnitude();
        tail_mass_after(self.n_max, self.t, self.qp, lf, self.norm_ln)
    }

    /// Normalized amplitude `⟨n|z⟩_q` for any `n` (not limited to `n_max`).
    pub fn amplitude(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::from_polar((-0.5 * self.norm_ln).exp(), 0.0);
        }
        if self.t == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let lf = qmath::q_factorial_ln(n as u64, self.qp).ln_magnitude();
        let ln_mag = n as f64 * self.z.norm().ln() - 0.5 * lf - 0.5 * self.norm_ln;
        Complex64::from_polar(ln_mag.exp(), n as f64 * self.z.arg())
    }

    /// The state truncated to the first `dim` Fock states.
    pub fn to_vector(&self, dim: usize) -> DVector<Complex64> {
        let mut fact = QFactorialLn::new(self.qp);
        let ln_r = self.z.norm().ln();
        let arg = self.z.arg();
        DVector::from_iterator(
            dim,
            (0..dim).map(|n| {
                let lf = fact.next_value();
                if n == 0 {
                    Complex64::new((-0.5 * self.norm_ln).exp(), 0.0)
                } else if self.t == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let ln_mag = n as f64 * ln_r - 0.5 * lf - 0.5 * self.norm_ln;
                    Complex64::from_polar(ln_mag.exp(), n as f64 * arg)
                }
            }),
        )
    }
}

/// Bound on `Σ_{m > n} p_m` using the ratio `p_{m+1}/p_m = t/[m+1]_q`,
/// which is decreasing in `m`.
fn tail_mass_after(n: usize, t: f64, qp: QParam, ln_qfact_n: f64, norm_ln: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let ln_next = (n + 1) as f64 * t.ln() - ln_qfact_n - q_number_ln(n as u64 + 1, qp) - norm_ln;
    let ratio = (t.ln() - q_number_ln(n as u64 + 2, qp)).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    ln_next.exp() / (1.0 - ratio)
}

/// Builds `|z⟩_q`.
pub fn make_state(z: Complex64, qp: QParam) -> Result<CoherentState> {
    CoherentState::new(z, qp)
}

/// `‖(b − z)|z⟩‖` on a truncated Fock space.
pub fn eigenstate_residual(cs: &CoherentState, fs: &crate::fock::FockSpace) -> Result<f64> {
    if fs.dim() < cs.n_max() {
        return Err(Error::DimensionMismatch {
            expected: cs.n_max(),
            got: fs.dim(),
        });
    }
    let v = cs.to_vector(fs.dim());
    let (b, _) = fs.build_ladder();
    let r = b.matrix() * &v - &v * cs.z();
    Ok(r.norm())
}

/// `⟨z₂|z₁⟩_q = [E_q(|z₁|²) E_q(|z₂|²)]^{−1/2} E_q(z₂* z₁)`.
pub fn overlap(z1: Complex64, z2: Complex64, qp: QParam) -> Result<Complex64> {
    check_z(z1)?;
    check_z(z2)?;
    let kernel = q_exp_complex(z2.conj() * z1, qp)?;
    let ln_norms =
        q_exp_ln(z1.norm_sqr(), qp)?.ln_magnitude() + q_exp_ln(z2.norm_sqr(), qp)?.ln_magnitude();
    Ok(kernel.mantissa * (kernel.ln_scale - 0.5 * ln_norms).exp())
}

/// `‖|z+dz⟩ − |z⟩‖² = 2(1 − Re⟨z|z+dz⟩)`.
pub fn label_continuity_modulus(z: Complex64, dz: Complex64, qp: QParam) -> Result<f64> {
    if dz.norm() == 0.0 {
        check_z(z)?;
        return Ok(0.0);
    }
    Ok(2.0 * (1.0 - overlap(z + dz, z, qp)?.re))
}

/// `ln W̃_q(t) = ln((q−1)/ln q) − ln E_q(qt)`.
pub fn weight_tilde_ln(t: f64, qp: QParam) -> Result<f64> {
    check_t(t)?;
    Ok(qp.weight_prefactor().ln() - q_exp_ln(qp.q() * t, qp)?.ln_magnitude())
}

/// The moment-problem weight `W̃_q(t) = (q−1)/ln q · E_q(qt)^{−1}`,
/// whose power moments are `[n]_q!`.
pub fn weight_tilde(t: f64, qp: QParam) -> Result<f64> {
    Ok(weight_tilde_ln(t, qp)?.exp())
}

/// The resolution-of-unity weight
/// `W_q(t) = (q−1)/(π ln q) · E_q(t)/E_q(qt) = E_q(t) W̃_q(t)/π`.
pub fn weight_full(t: f64, qp: QParam) -> Result<f64> {
    let ln = weight_tilde_ln(t, qp)? + q_exp_ln(t, qp)?.ln_magnitude();
    Ok(ln.exp() / PI)
}

/// `S^{(p,r)}_q(t)`.
pub fn s_coefficient(p: u32, r: u32, t: f64, qp: QParam) -> Result<f64> {
    check_t(t)?;
    if p > S_INDEX_CAP || r > S_INDEX_CAP {
        return Err(Error::Domain(format!(
            "S^(p,r) supports p, r <= {S_INDEX_CAP}, got ({p}, {r})"
        )));
    }
    let (p, r) = (p as usize, r as usize);
    let mut qf = LnQFactorials::new(qp);
    let mut ln_term = |n: usize| {
        0.5 * (ln_factorial(n + p) + ln_factorial(n + r) - qf.get(n + p) - qf.get(n + r))
            - ln_factorial(n)
    };
    if t == 0.0 {
        return Ok(ln_term(0).exp());
    }
    let ln_t = t.ln();
    let num = RealLogSum::sum_series(|n| (ln_term(n) + n as f64 * ln_t, 1.0))?;
    Ok((num.ln_magnitude() - q_exp_ln(t, qp)?.ln_magnitude()).exp())
}

/// `⟨N⟩_q = t S^{(1,1)}_q(t)`.
pub fn mean_photon(t: f64, qp: QParam) -> Result<f64> {
    Ok(t * s_coefficient(1, 1, t, qp)?)
}

/// `⟨N⟩` and `⟨N(N−1)⟩` summed directly over the photon distribution.
pub fn photon_moments(t: f64, qp: QParam) -> Result<(f64, f64)> {
    check_t(t)?;
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mean = distribution_sum(t, qp, |n| (n as f64).ln())?;
    let fact2 = distribution_sum(t, qp, |n| ((n * n.saturating_sub(1)) as f64).ln())?;
    Ok((mean, fact2))
}

/// `(ΔN)² = ⟨N²⟩ − ⟨N⟩²` from the photon distribution.
pub fn photon_variance(t: f64, qp: QParam) -> Result<f64> {
    let (mean, fact2) = photon_moments(t, qp)?;
    Ok(fact2 + mean - mean * mean)
}

/// The metric factor `ω_q(t) = d⟨N⟩_q/dt`, differentiated term by term:
/// `ω = E⁻¹ Σ n² t^{n−1}/[n]_q! − ⟨N⟩ S^{(1,1)}`.
pub fn metric_factor(t: f64, qp: QParam) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let ln_t = t.ln();
    let g = distribution_sum(t, qp, |n| 2.0 * (n as f64).ln() - ln_t)?;
    let s11 = s_coefficient(1, 1, t, qp)?;
    Ok(g - t * s11 * s11)
}

/// Central-difference step used by [`metric_factor_fd`].
pub fn metric_fd_step(t: f64) -> f64 {
    1e-5 * t.max(1.0)
}

/// `ω_q(t)` by central finite difference of [`mean_photon`]; a one-sided
/// difference is used when `t < h`.
pub fn metric_factor_fd(t: f64, qp: QParam) -> Result<f64> {
    check_t(t)?;
    let h = metric_fd_step(t);
    if t >= h {
        Ok((mean_photon(t + h, qp)? - mean_photon(t - h, qp)?) / (2.0 * h))
    } else {
        let f0 = mean_photon(t, qp)?;
        let f1 = mean_photon(t + h, qp)?;
        let f2 = mean_photon(t + 2.0 * h, qp)?;
        Ok((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h))
    }
}

fn check_positive_t(t: f64) -> Result<()> {
    check_t(t)?;
    if t == 0.0 {
        return Err(Error::Domain(
            "Mandel Q is 0/0 at t = 0 (its limit is 0 from below)".into(),
        ));
    }
    Ok(())
}

/// Mandel parameter `Q = ((ΔN)² − ⟨N⟩)/⟨N⟩`, from the photon distribution.
pub fn mandel_q(t: f64, qp: QParam) -> Result<f64> {
    check_positive_t(t)?;
    let (mean, fact2) = photon_moments(t, qp)?;
    Ok((fact2 - mean * mean) / mean)
}

/// Mandel parameter through `⟨N²⟩ = t² S^{(2,2)} + t S^{(1,1)}`.
pub fn mandel_q_operator_path(t: f64, qp: QParam) -> Result<f64> {
    check_positive_t(t)?;
    let s11 = s_coefficient(1, 1, t, qp)?;
    let s22 = s_coefficient(2, 2, t, qp)?;
    let mean = t * s11;
    Ok((t * t * s22 - mean * mean) / mean)
}

/// The `S` values entering the quadrature formulas at `t`.
#[derive(Debug, Clone, Copy)]
struct QuadratureSeries {
    s10: f64,
    s20: f64,
    s11: f64,
}

impl QuadratureSeries {
    fn at(t: f64, qp: QParam) -> Result<Self> {
        Ok(QuadratureSeries {
            s10: s_coefficient(1, 0, t, qp)?,
            s20: s_coefficient(2, 0, t, qp)?,
            s11: s_coefficient(1, 1, t, qp)?,
        })
    }

    fn variance(&self, component: f64, t: f64) -> f64 {
        2.0 * component * component * (self.s20 - self.s10 * self.s10)
            + t * (self.s11 - self.s20)
            + 0.5
    }
}

/// Variances of `X = (a + a†)/√2` and `P = (a − a†)/(i√2)` in `|z⟩_q`.
pub fn quadrature_variances(z: Complex64, qp: QParam) -> Result<(f64, f64)> {
    check_z(z)?;
    let t = z.norm_sqr();
    let s = QuadratureSeries::at(t, qp)?;
    Ok((s.variance(z.re, t), s.variance(z.im, t)))
}

/// `⟨X⟩` and `⟨P⟩` in `|z⟩_q`.
pub fn quadrature_means(z: Complex64, qp: QParam) -> Result<(f64, f64)> {
    check_z(z)?;
    let s10 = s_coefficient(1, 0, z.norm_sqr(), qp)?;
    Ok((
        std::f64::consts::SQRT_2 * z.re * s10,
        std::f64::consts::SQRT_2 * z.im * s10,
    ))
}

fn real_label(t: f64) -> Result<Complex64> {
    check_t(t)?;
    Ok(Complex64::new(t.sqrt(), 0.0))
}

/// `R_q(t) = 2(ΔX)²` for the real label `z = √t`.
pub fn squeeze_ratio(t: f64, qp: QParam) -> Result<f64> {
    let (var_x, _) = quadrature_variances(real_label(t)?, qp)?;
    Ok(2.0 * var_x)
}

/// Signal-to-quantum-noise ratio `σ_q = ⟨X⟩²/(ΔX)²` at `z = √t`.
pub fn snr(t: f64, qp: QParam) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let s = QuadratureSeries::at(t, qp)?;
    Ok(2.0 * t * s.s10 * s.s10 / s.variance(t.sqrt(), t))
}

/// Reference values `(4⟨N⟩, 4⟨N⟩(⟨N⟩ + 1))` reached by conventional
/// coherent and squeezed states with the same photon number.
pub fn snr_bounds(t: f64, qp: QParam) -> Result<(f64, f64)> {
    let n = mean_photon(t, qp)?;
    Ok((4.0 * n, 4.0 * n * (n + 1.0)))
}

/// Bargmann function `ψ_z(ξ) = E_q(|z|²)^{−1/2} E_q(zξ)`.
pub fn bargmann_eval(z: Complex64, xi: Complex64, qp: QParam) -> Result<Complex64> {
    check_z(z)?;
    check_z(xi)?;
    let k = q_exp_complex(z * xi, qp)?;
    let ln_norm = q_exp_ln(z.norm_sqr(), qp)?.ln_magnitude();
    Ok(k.mantissa * (k.ln_scale - 0.5 * ln_norm).exp())
}

/// Relative residual of `D_q ψ_z(ξ) = z ψ_z(ξ)`.
pub fn bargmann_eigen_residual(z: Complex64, xi: Complex64, qp: QParam) -> Result<f64> {
    let d = q_derivative(|x| bargmann_eval(z, x, qp), xi, qp)?;
    let rhs = z * bargmann_eval(z, xi, qp)?;
    let scale = rhs.norm();
    if scale == 0.0 {
        return Ok(d.norm());
    }
    Ok((d - rhs).norm() / scale)
}

pub mod oracle {
    //! Observables recomputed as expectation values on a truncated Fock
    //! space; independent of the `S^{(p,r)}` series.

    use num_complex::Complex64;

    use super::CoherentState;
    use crate::error::Result;
    use crate::fock::FockSpace;
    use crate::qmath::QParam;

    /// Default truncation dimension.
    pub const DEFAULT_DIM: usize = 80;

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct OracleObservables {
        pub mean_n: f64,
        pub var_n: f64,
        pub mean_x: f64,
        pub var_x: f64,
        pub mean_p: f64,
        pub var_p: f64,
        /// Coherent-state mass outside the truncation.
        pub tail_mass: f64,
    }

    impl OracleObservables {
        pub fn mandel_q(&self) -> f64 {
            (self.var_n - self.mean_n) / self.mean_n
        }

        pub fn squeeze_ratio(&self) -> f64 {
            2.0 * self.var_x
        }

        pub fn snr(&self) -> f64 {
            self.mean_x * self.mean_x / self.var_x
        }
    }

    pub fn observables(z: Complex64, qp: QParam, dim: usize) -> Result<OracleObservables> {
        let fs = FockSpace::new(dim, qp)?;
        let cs = CoherentState::new(z, qp)?;
        let v = cs.to_vector(dim);
        let captured: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let (x, p) = fs.quadratures();
        // For Hermitian A: ⟨A⟩ = v†Av and ⟨A²⟩ = ‖Av‖².
        let moments = |m: &nalgebra::DMatrix<Complex64>| {
            let av = m * &v;
            (v.dotc(&av).re, av.norm_squared())
        };
        let (mean_n, n2) = moments(fs.number().matrix());
        let (mean_x, x2) = moments(x.matrix());
        let (mean_p, p2) = moments(p.matrix());
        Ok(OracleObservables {
            mean_n,
            var_n: n2 - mean_n * mean_n,
            mean_x,
            var_x: x2 - mean_x * mean_x,
            mean_p,
            var_p: p2 - mean_p * mean_p,
            tail_mass: (1.0 - captured).max(0.0),
        })
    }

    /// `ω_q(t)` as a central difference of the matrix `⟨N⟩` at `z = √t`.
    pub fn metric_factor(t: f64, qp: QParam, dim: usize) -> Result<f64> {
        let h = super::metric_fd_step(t);
        let mean = |s: f64| observables(Complex64::new(s.sqrt(), 0.0), qp, dim).map(|o| o.mean_n);
        if t >= h {
            Ok((mean(t + h)? - mean(t - h)?) / (2.0 * h))
        } else {
            Ok((-3.0 * mean(t)? + 4.0 * mean(t + h)? - mean(t + 2.0 * h)?) / (2.0 * h))
        }
    }
}
