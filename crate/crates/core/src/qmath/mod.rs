//! Scalar q-arithmetic for the maths-type q-boson algebra `bb† − q b†b = I`
//! with `q > 1`.
//!
//! Everything that involves `[n]_q!` is evaluated in the log domain; see
//! [`LogValue`].

mod logvalue;
pub(crate) mod series;

use num_complex::Complex64;

use crate::error::{Error, Result};
pub use logvalue::LogValue;
pub(crate) use series::RealLogSum;
pub use series::{ScaledComplex, TERM_CAP};

/// Validated deformation parameter `q > 1` with cached `ln q` and `q − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam {
    q: f64,
    ln_q: f64,
    qm1: f64,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::InvalidQ(q));
        }
        let qm1 = q - 1.0;
        Ok(QParam {
            q,
            ln_q: qm1.ln_1p(),
            qm1,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }

    pub fn qm1(&self) -> f64 {
        self.qm1
    }

    /// `(q − 1)/ln q`, the value of the moment weight at the origin.
    pub fn weight_prefactor(&self) -> f64 {
        self.qm1 / self.ln_q
    }
}

/// `[n]_q = (qⁿ − 1)/(q − 1)`.
pub fn q_number(n: u64, qp: QParam) -> Result<f64> {
    let y = n as f64 * qp.ln_q;
    if y >= f64::MAX.ln() {
        return Err(Error::Overflow { n, q: qp.q });
    }
    Ok(y.exp_m1() / qp.qm1)
}

/// `ln [n]_q`; `-inf` for `n = 0`.
pub fn q_number_ln(n: u64, qp: QParam) -> f64 {
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    let y = n as f64 * qp.ln_q;
    let ln_expm1 = if y > 30.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    };
    ln_expm1 - qp.qm1.ln()
}

/// Incrementally produces `ln [n]_q!` for `n = 0, 1, 2, ...`.
#[derive(Debug, Clone)]
pub(crate) struct QFactorialLn {
    qp: QParam,
    n: u64,
    value: f64,
}

impl QFactorialLn {
    pub(crate) fn new(qp: QParam) -> Self {
        QFactorialLn {
            qp,
            n: 0,
            value: 0.0,
        }
    }

    /// Returns `ln [n]_q!` for the next `n` (starting with `n = 0`).
    pub(crate) fn next_value(&mut self) -> f64 {
        if self.n > 0 {
            self.value += q_number_ln(self.n, self.qp);
        }
        self.n += 1;
        self.value
    }
}

/// `[n]_q! = [n]_q [n−1]_q ⋯ [1]_q` in log form.
pub fn q_factorial_ln(n: u64, qp: QParam) -> LogValue {
    LogValue::positive((1..=n).map(|k| q_number_ln(k, qp)).sum())
}

/// `ln Γ_b(x)` for a base `0 < b < 1` and `x > 0`, from the product
/// `Γ_b(x) = (b; b)_∞ / (b^x; b)_∞ · (1 − b)^{1−x}`.
pub fn q_gamma_ln(x: f64, base: f64) -> Result<f64> {
    if !(base > 0.0 && base < 1.0) {
        return Err(Error::Domain(format!(
            "q-gamma base must lie in (0, 1), got {base}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "q-gamma argument must be positive, got {x}"
        )));
    }
    let ln_b = base.ln();
    let mut sum = 0.0;
    for k in 0..TERM_CAP {
        let k = k as f64;
        let a = ((k + 1.0) * ln_b).exp();
        let c = ((k + x) * ln_b).exp();
        sum += (-a).ln_1p() - (-c).ln_1p();
        if a.max(c) < 1e-18 {
            return Ok(sum + (1.0 - x) * (-base).ln_1p());
        }
    }
    Err(Error::NonConvergence { terms: TERM_CAP })
}

/// Relative discrepancy between `ln [n]_q!` and
/// `n(n−1)/2 · ln q + ln Γ_{1/q}(n+1)`.
pub fn q_gamma_consistency(n: u64, qp: QParam) -> Result<f64> {
    let lhs = q_factorial_ln(n, qp).ln_magnitude();
    let nf = n as f64;
    let rhs = 0.5 * nf * (nf - 1.0) * qp.ln_q + q_gamma_ln(nf + 1.0, 1.0 / qp.q)?;
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

/// `E_q(t) = Σ tⁿ/[n]_q!`, the coherent-state normalization, in log form.
///
/// Converges for every real `t` when `q > 1`; negative arguments give an
/// alternating series whose sign is carried in the result.
pub fn q_exp_ln(t: f64, qp: QParam) -> Result<LogValue> {
    if !t.is_finite() {
        return Err(Error::NonFinite("q_exp argument"));
    }
    if t == 0.0 {
        return Ok(LogValue::ONE);
    }
    let ln_t = t.abs().ln();
    let mut fact = QFactorialLn::new(qp);
    RealLogSum::sum_series(|n| {
        let sign = if t < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        (n as f64 * ln_t - fact.next_value(), sign)
    })
}

/// `E_q(w)` for complex `w`, same series as [`q_exp_ln`].
pub fn q_exp_complex(w: Complex64, qp: QParam) -> Result<ScaledComplex> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::NonFinite("q_exp argument"));
    }
    if w.norm() == 0.0 {
        return Ok(ScaledComplex {
            ln_scale: 0.0,
            mantissa: Complex64::new(1.0, 0.0),
        });
    }
    let (ln_r, arg) = (w.norm().ln(), w.arg());
    let mut fact = QFactorialLn::new(qp);
    series::sum_complex_series(|n| (n as f64 * ln_r - fact.next_value(), n as f64 * arg))
}

/// Jackson's q-exponential of base `0 < b < 1`,
/// `Σ b^{n(n−1)/2} xⁿ / (b; b)_n = (−x; b)_∞`, summed from its series.
pub fn jackson_exp_ln(x: f64, base: f64) -> Result<LogValue> {
    if !(base > 0.0 && base < 1.0) {
        return Err(Error::Domain(format!(
            "Jackson base must lie in (0, 1), got {base}"
        )));
    }
    if x < 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Jackson argument must be finite and >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(LogValue::ONE);
    }
    let (ln_b, ln_x) = (base.ln(), x.ln());
    let mut ln_poch = 0.0;
    RealLogSum::sum_series(|n| {
        let nf = n as f64;
        if n > 0 {
            ln_poch += (-(nf * ln_b).exp()).ln_1p();
        }
        (0.5 * nf * (nf - 1.0) * ln_b + nf * ln_x - ln_poch, 1.0)
    })
}

/// Relative residual of `E^J_{1/q}[(q − 1)t] = E_q(qt)`.
pub fn jackson_identity_residual(t: f64, qp: QParam) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!(
            "Jackson identity needs t >= 0, got {t}"
        )));
    }
    let lhs = jackson_exp_ln(qp.qm1 * t, 1.0 / qp.q)?.ln_magnitude();
    let rhs = q_exp_ln(qp.q * t, qp)?.ln_magnitude();
    Ok((lhs - rhs).exp_m1().abs())
}

/// Step used for the `ξ = 0` limit of [`q_derivative`].
pub const Q_DERIVATIVE_ORIGIN_STEP: f64 = 1e-6;

/// The q-difference operator `D_q f(ξ) = [f(ξ) − f(qξ)] / [(1 − q)ξ]`.
///
/// At `ξ = 0` the quotient is undefined and its limit `f′(0)` is
/// approximated by the central difference `[f(h) − f(−h)]/(2h)`.
pub fn q_derivative<F>(f: F, xi: Complex64, qp: QParam) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if xi.norm() == 0.0 {
        let h = Q_DERIVATIVE_ORIGIN_STEP;
        let hc = Complex64::new(h, 0.0);
        return Ok((f(hc)? - f(-hc)?) / (2.0 * h));
    }
    let num = f(xi)? - f(xi * qp.q)?;
    Ok(num / (xi * (1.0 - qp.q)))
}

/// Undeformed (`q = 1`) reference values. `QParam` rejects `q = 1`, so
/// classical-limit curves and checks go through here instead.
pub mod classical {
    /// `ln E_1(t) = t`.
    pub fn exp_ln(t: f64) -> f64 {
        t
    }

    /// `ln n!`.
    pub fn factorial_ln(n: u64) -> f64 {
        (1..=n).map(|k| (k as f64).ln()).sum()
    }

    /// `[n]_1 = n`.
    pub fn number(n: u64) -> f64 {
        n as f64
    }

    /// The `q → 1` moment weight `e^{−t}`.
    pub fn weight_tilde(t: f64) -> f64 {
        (-t).exp()
    }
}
