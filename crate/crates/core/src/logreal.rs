//! Signed reals stored as `sign · exp(log_magnitude)`.
//!
//! Factorial-scale quantities (counts of graphs with hundreds of vertices,
//! Beta weights with arguments near `10^12`) overflow any float; products of
//! them are exact sums of logs here, and sums use the log-sum-exp identity.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;
use serde::Serialize;

use crate::scalar::{ln_biguint, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogReal<F> {
    sign: i8,
    log_magnitude: F,
}

impl<F: Real> LogReal<F> {
    pub fn zero() -> Self {
        LogReal {
            sign: 0,
            log_magnitude: F::neg_infinity(),
        }
    }

    pub fn one() -> Self {
        Self::from_log(F::zero())
    }

    /// Positive value `exp(log)`.
    pub fn from_log(log: F) -> Self {
        if log == F::neg_infinity() {
            return Self::zero();
        }
        LogReal {
            sign: 1,
            log_magnitude: log,
        }
    }

    pub fn from_signed_log(sign: i8, log: F) -> Self {
        match sign.signum() {
            0 => Self::zero(),
            s => {
                if log == F::neg_infinity() {
                    Self::zero()
                } else {
                    LogReal {
                        sign: s,
                        log_magnitude: log,
                    }
                }
            }
        }
    }

    pub fn from_real(x: F) -> Self {
        if x == F::zero() {
            Self::zero()
        } else if x > F::zero() {
            Self::from_log(x.ln())
        } else {
            Self::from_signed_log(-1, (-x).ln())
        }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        if x.bits() == 0 {
            Self::zero()
        } else {
            Self::from_log(ln_biguint(x))
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(&self) -> F {
        if self.sign == 0 {
            F::neg_infinity()
        } else {
            self.log_magnitude
        }
    }

    pub fn to_real(&self) -> F {
        match self.sign {
            0 => F::zero(),
            s => F::from_i8(s).unwrap() * self.log_magnitude.exp(),
        }
    }

    pub fn powf(&self, e: F) -> Self {
        assert!(self.sign >= 0, "powf of a negative LogReal");
        if self.sign == 0 {
            return Self::zero();
        }
        Self::from_log(self.log_magnitude * e)
    }

    pub fn is_finite(&self) -> bool {
        self.sign == 0 || self.log_magnitude.is_finite()
    }
}

impl<F: Real> Mul for LogReal<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::zero();
        }
        LogReal {
            sign: self.sign * rhs.sign,
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
        }
    }
}

impl<F: Real> Div for LogReal<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "LogReal division by zero");
        if self.sign == 0 {
            return Self::zero();
        }
        LogReal {
            sign: self.sign * rhs.sign,
            log_magnitude: self.log_magnitude - rhs.log_magnitude,
        }
    }
}

impl<F: Real> Neg for LogReal<F> {
    type Output = Self;
    fn neg(self) -> Self {
        LogReal {
            sign: -self.sign,
            log_magnitude: self.log_magnitude,
        }
    }
}

impl<F: Real> Add for LogReal<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_magnitude >= rhs.log_magnitude {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = (small.log_magnitude - big.log_magnitude).exp();
        if big.sign == small.sign {
            LogReal {
                sign: big.sign,
                log_magnitude: big.log_magnitude + d.ln_1p(),
            }
        } else if d == F::one() {
            Self::zero()
        } else {
            LogReal {
                sign: big.sign,
                log_magnitude: big.log_magnitude + (-d).ln_1p(),
            }
        }
    }
}

impl<F: Real> Sub for LogReal<F> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Real> PartialOrd for LogReal<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_magnitude.partial_cmp(&other.log_magnitude),
                _ => other.log_magnitude.partial_cmp(&self.log_magnitude),
            },
            o => Some(o),
        }
    }
}

/// Sum of non-negative terms in a fixed left-to-right order: shift by the
/// maximum, add the exponentials sequentially. The result depends only on
/// the order of `terms`, never on how the terms were produced.
pub fn sum_nonneg<F: Real>(terms: &[LogReal<F>]) -> LogReal<F> {
    let max = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| {
            assert!(t.sign > 0, "sum_nonneg got a negative term");
            t.log_magnitude
        })
        .fold(F::neg_infinity(), F::max);
    if max == F::neg_infinity() {
        return LogReal::zero();
    }
    let mut acc = F::zero();
    for t in terms.iter().filter(|t| !t.is_zero()) {
        acc = acc + (t.log_magnitude - max).exp();
    }
    LogReal::from_log(max + acc.ln())
}
