use std::cmp::Ordering;
use std::ops::Mul;

/// A real number stored as `sign * exp(ln_magnitude)`.
///
/// Used wherever q-factorials appear, since `[n]_q!` grows like
/// `q^{n(n-1)/2}` and leaves the f64 range long before the series that
/// contain it stop contributing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    ln_magnitude: f64,
    sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln_magnitude: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogValue = LogValue {
        ln_magnitude: 0.0,
        sign: 1,
    };

    /// Builds a value from its log-magnitude and sign. A zero sign yields
    /// [`LogValue::ZERO`] regardless of `ln_magnitude`.
    pub fn new(ln_magnitude: f64, sign: i8) -> Self {
        match sign.cmp(&0) {
            Ordering::Equal => Self::ZERO,
            Ordering::Greater => LogValue {
                ln_magnitude,
                sign: 1,
            },
            Ordering::Less => LogValue {
                ln_magnitude,
                sign: -1,
            },
        }
    }

    pub fn positive(ln_magnitude: f64) -> Self {
        Self::new(ln_magnitude, 1)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(x.abs().ln(), if x > 0.0 { 1 } else { -1 })
        }
    }

    pub fn ln_magnitude(&self) -> f64 {
        self.ln_magnitude
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of a strictly positive value; `None` otherwise.
    pub fn ln(&self) -> Option<f64> {
        (self.sign > 0).then_some(self.ln_magnitude)
    }

    /// Converts back to f64, saturating to ±inf or 0 outside the range.
    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_magnitude.exp(),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        (self.sign != 0).then(|| LogValue {
            ln_magnitude: -self.ln_magnitude,
            sign: self.sign,
        })
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.ln_magnitude + rhs.ln_magnitude, self.sign * rhs.sign)
    }
}
