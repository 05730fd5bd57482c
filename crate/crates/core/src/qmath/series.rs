//! Log-domain accumulation of power series with super-geometric decay.
//!
//! Terms are supplied as `(ln |term|, sign)` (or a phase for complex terms)
//! and summed relative to the largest magnitude seen so far, so neither the
//! terms nor the partial sums need to be representable in f64.

use num_complex::Complex64;

use super::LogValue;
use crate::error::{Error, Result};

/// Hard cap on the number of summed terms.
pub const TERM_CAP: usize = 10_000;

/// ln(2^-52).
const LN_EPS: f64 = -36.04365338911715;

/// Running signed sum `exp(scale) * acc`.
#[derive(Debug, Clone)]
pub(crate) struct RealLogSum {
    scale: f64,
    acc: f64,
    below: usize,
    terms: usize,
}

impl RealLogSum {
    pub(crate) fn new() -> Self {
        RealLogSum {
            scale: f64::NEG_INFINITY,
            acc: 0.0,
            below: 0,
            terms: 0,
        }
    }

    /// Adds a term and reports whether the stopping rule is satisfied:
    /// two consecutive terms below machine epsilon relative to the sum.
    pub(crate) fn push(&mut self, ln_term: f64, sign: f64) -> Result<bool> {
        self.terms += 1;
        if self.terms > TERM_CAP {
            return Err(Error::NonConvergence { terms: TERM_CAP });
        }
        // Exactly-zero terms (e.g. n = 0 in Σ n p_n) say nothing about decay.
        if ln_term == f64::NEG_INFINITY {
            return Ok(false);
        }
        if ln_term > self.scale {
            self.acc = self.acc * (self.scale - ln_term).exp() + sign;
            self.scale = ln_term;
        } else {
            self.acc += sign * (ln_term - self.scale).exp();
        }
        let ln_sum = self.scale + self.acc.abs().ln();
        if ln_term < LN_EPS + ln_sum {
            self.below += 1;
        } else {
            self.below = 0;
        }
        Ok(self.below >= 2)
    }

    pub(crate) fn value(&self) -> LogValue {
        if self.acc == 0.0 {
            return LogValue::ZERO;
        }
        LogValue::new(
            self.scale + self.acc.abs().ln(),
            if self.acc > 0.0 { 1 } else { -1 },
        )
    }

    /// Drives the accumulator over `term(n)` for `n = 0, 1, ...` until the
    /// stopping rule fires.
    pub(crate) fn sum_series<F>(mut term: F) -> Result<LogValue>
    where
        F: FnMut(usize) -> (f64, f64),
    {
        let mut s = RealLogSum::new();
        for n in 0.. {
            let (ln_t, sign) = term(n);
            if s.push(ln_t, sign)? {
                break;
            }
        }
        Ok(s.value())
    }
}

/// A complex number stored as `exp(ln_scale) * mantissa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub ln_scale: f64,
    pub mantissa: Complex64,
}

impl ScaledComplex {
    pub fn to_complex(&self) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * self.ln_scale.exp()
    }
}

/// Complex analogue of [`RealLogSum`]; terms carry a phase instead of a sign.
pub(crate) fn sum_complex_series<F>(mut term: F) -> Result<ScaledComplex>
where
    F: FnMut(usize) -> (f64, f64),
{
    let mut scale = f64::NEG_INFINITY;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut below = 0;
    for n in 0..=TERM_CAP {
        if n == TERM_CAP {
            return Err(Error::NonConvergence { terms: TERM_CAP });
        }
        let (ln_t, phase) = term(n);
        if ln_t > f64::NEG_INFINITY {
            let unit = Complex64::from_polar(1.0, phase);
            if ln_t > scale {
                acc = acc * (scale - ln_t).exp() + unit;
                scale = ln_t;
            } else {
                acc += unit * (ln_t - scale).exp();
            }
            // Cancellation can shrink |acc| well below the largest term; the
            // threshold is taken against the largest term in that case too.
            let ln_ref = scale + acc.norm().ln().max(LN_EPS);
            if ln_t < LN_EPS + ln_ref {
                below += 1;
            } else {
                below = 0;
            }
        }
        if below >= 2 {
            break;
        }
    }
    Ok(ScaledComplex {
        ln_scale: scale,
        mantissa: acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_series_matches_exp() {
        // sum t^n / n!
        let t: f64 = 3.7;
        let mut lnfact = 0.0;
        let v = RealLogSum::sum_series(|n| {
            if n > 0 {
                lnfact += (n as f64).ln();
            }
            (n as f64 * t.ln() - lnfact, 1.0)
        })
        .unwrap();
        assert!((v.ln().unwrap() - t).abs() < 1e-14);
    }

    #[test]
    fn alternating_series() {
        let t: f64 = 2.0;
        let mut lnfact = 0.0;
        let v = RealLogSum::sum_series(|n| {
            if n > 0 {
                lnfact += (n as f64).ln();
            }
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            (n as f64 * t.ln() - lnfact, s)
        })
        .unwrap();
        assert!((v.value() - (-t).exp()).abs() < 1e-15);
    }

    #[test]
    fn divergent_series_hits_cap() {
        let r = RealLogSum::sum_series(|n| (n as f64, 1.0));
        assert_eq!(r, Err(Error::NonConvergence { terms: TERM_CAP }));
    }

    #[test]
    fn complex_exponential() {
        let w = Complex64::new(0.3, -1.2);
        let mut lnfact = 0.0;
        let v = sum_complex_series(|n| {
            if n > 0 {
                lnfact += (n as f64).ln();
            }
            (n as f64 * w.norm().ln() - lnfact, n as f64 * w.arg())
        })
        .unwrap();
        assert!((v.to_complex() - w.exp()).norm() < 1e-14);
    }
}
