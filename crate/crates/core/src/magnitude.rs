//! Log-domain magnitudes for long weight products.
//!
//! Orbit coefficients of weighted shifts are products like `alpha^n`, which
//! leave the range of `f64` around `n ~ 1000`. A [`Magnitude`] stores the
//! natural log of the absolute value instead, so products become sums and
//! threshold comparisons never see an overflowed infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Magnitude {
    /// Natural log of the absolute value. Meaningless when `is_zero` is set.
    pub log_abs: f64,
    pub is_zero: bool,
}

impl Magnitude {
    pub const ONE: Magnitude = Magnitude { log_abs: 0.0, is_zero: false };
    pub const ZERO: Magnitude = Magnitude { log_abs: 0.0, is_zero: true };

    pub fn from_log(log_abs: f64) -> Self {
        Magnitude { log_abs, is_zero: false }
    }

    pub fn from_abs(value: f64) -> Self {
        let value = value.abs();
        if value == 0.0 {
            Self::ZERO
        } else {
            Self::from_log(value.ln())
        }
    }

    pub fn of(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            Self::ZERO
        } else {
            // hypot avoids overflow in the squared modulus
            Self::from_log(z.re.hypot(z.im).ln())
        }
    }

    /// `ln |x|`, with `-inf` for zero.
    pub fn ln(self) -> f64 {
        if self.is_zero {
            f64::NEG_INFINITY
        } else {
            self.log_abs
        }
    }

    /// Converts back to a plain float; saturates to `inf`/`0` outside the `f64` range.
    pub fn value(self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            self.log_abs.exp()
        }
    }

    pub fn recip(self) -> Option<Self> {
        if self.is_zero {
            None
        } else {
            Some(Self::from_log(-self.log_abs))
        }
    }

    pub fn powf(self, exponent: f64) -> Self {
        if self.is_zero {
            if exponent > 0.0 {
                Self::ZERO
            } else {
                Self::ONE
            }
        } else {
            Self::from_log(self.log_abs * exponent)
        }
    }

    /// `self >= threshold`, evaluated in the log domain.
    pub fn at_least(self, threshold: f64) -> bool {
        if threshold <= 0.0 {
            return true;
        }
        !self.is_zero && self.log_abs >= threshold.ln()
    }

    /// `self <= threshold`, evaluated in the log domain.
    pub fn at_most(self, threshold: f64) -> bool {
        if self.is_zero {
            return threshold >= 0.0;
        }
        threshold > 0.0 && self.log_abs <= threshold.ln()
    }
}

impl Mul for Magnitude {
    type Output = Magnitude;

    fn mul(self, rhs: Magnitude) -> Magnitude {
        if self.is_zero || rhs.is_zero {
            Magnitude::ZERO
        } else {
            Magnitude::from_log(self.log_abs + rhs.log_abs)
        }
    }
}

impl Div for Magnitude {
    type Output = Magnitude;

    /// Division by zero is only defined for a zero numerator here; callers
    /// check invertibility before dividing.
    fn div(self, rhs: Magnitude) -> Magnitude {
        assert!(!rhs.is_zero, "division by a zero magnitude");
        if self.is_zero {
            Magnitude::ZERO
        } else {
            Magnitude::from_log(self.log_abs - rhs.log_abs)
        }
    }
}

impl PartialEq for Magnitude {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_total(other) == Ordering::Equal
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_total(other))
    }
}

impl Magnitude {
    fn cmp_total(&self, other: &Self) -> Ordering {
        match (self.is_zero, other.is_zero) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.log_abs.total_cmp(&other.log_abs),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero {
            write!(f, "0")
        } else if self.log_abs.abs() < 700.0 {
            write!(f, "{:e}", self.log_abs.exp())
        } else {
            write!(f, "exp({})", self.log_abs)
        }
    }
}
