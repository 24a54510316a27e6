//! Floating-point scalar abstraction and the special functions built on it.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the asymptotic and log-space code.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable literal")
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("representable integer")
    }
}

impl Real for f32 {}
impl Real for f64 {}

// Bernoulli coefficients B_{2j} / (2j (2j-1)) of the Stirling series.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

const STIRLING_MIN: f64 = 12.0;

fn stirling_tail<F: Real>(x: F) -> F {
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut acc = F::zero();
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + F::lit(*c);
    }
    acc * inv
}

/// `ln Γ(x)` for `x > 0`.
///
/// Shifts small arguments up to the Stirling range and sums the asymptotic
/// series there; relative error is around `1e-15` in `f64`.
pub fn ln_gamma<F: Real>(x: F) -> F {
    assert!(x > F::zero(), "ln_gamma requires a positive argument");
    let min = F::lit(STIRLING_MIN);
    let mut y = x;
    // Γ(x) = Γ(x + m) / (x (x+1) ... (x+m-1)); at most 12 factors
    let mut prod = F::one();
    while y < min {
        prod = prod * y;
        y = y + F::one();
    }
    let shift = prod.ln();
    let half = F::lit(0.5);
    (y - half) * y.ln() - y + half * (F::TAU()).ln() + stirling_tail(y) - shift
}

/// `ln Γ(x + m) - ln Γ(x)` without the cancellation of two large `ln Γ`
/// values. `x > 0`, `x + m > 0`.
pub fn ln_gamma_ratio<F: Real>(x: F, m: F) -> F {
    if m == F::zero() {
        return F::zero();
    }
    let min = F::lit(STIRLING_MIN);
    let y = x + m;
    if x < min || y < min {
        return ln_gamma(y) - ln_gamma(x);
    }
    let half = F::lit(0.5);
    // (y - 1/2) ln y - (x - 1/2) ln x - m
    //   = (x - 1/2) ln(1 + m/x) + m ln y - m
    (x - half) * (m / x).ln_1p() + m * y.ln() - m + stirling_tail(y) - stirling_tail(x)
}

/// `ln n!`.
pub fn ln_factorial<F: Real>(n: u64) -> F {
    ln_gamma(F::from_u64(n).expect("representable") + F::one())
}

/// Natural log of a positive arbitrary-precision integer.
pub fn ln_biguint<F: Real>(x: &BigUint) -> F {
    assert!(x.bits() > 0, "ln of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return F::lit(x.to_f64().expect("fits in f64").ln());
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let top = top.to_f64().expect("64-bit value").ln();
    F::lit(top + shift as f64 * std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_fact_exact(n: u64) -> f64 {
        (1..=n).map(|i| (i as f64).ln()).sum()
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        for n in [0u64, 1, 2, 5, 10, 11, 12, 13, 50, 170, 1000] {
            let got: f64 = ln_factorial(n);
            let want = ln_fact_exact(n);
            let tol = 1e-12 * want.abs().max(1.0);
            assert!((got - want).abs() <= tol, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn ln_gamma_half_integer() {
        // Γ(1/2) = √π
        let got: f64 = ln_gamma(0.5);
        assert!((got - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        // Γ(7/2) = 15√π/8
        let got: f64 = ln_gamma(3.5);
        let want = (15.0 * std::f64::consts::PI.sqrt() / 8.0).ln();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn ratio_agrees_with_direct_difference() {
        for (x, m) in [(1.0, 3.0), (20.5, 7.0), (1e6, 30.0), (3.0, 0.5), (15.0, 100.0)] {
            let a: f64 = ln_gamma_ratio(x, m);
            let b: f64 = ln_gamma(x + m) - ln_gamma(x);
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{x},{m}: {a} vs {b}");
        }
    }

    #[test]
    fn ratio_is_stable_at_huge_arguments() {
        // ln(x^(m)) rising factorial, summed exactly in logs
        let x = 5.0e11_f64;
        let m = 40.0;
        let want: f64 = (0..40).map(|i| (x + i as f64).ln()).sum();
        let got: f64 = ln_gamma_ratio(x, m);
        assert!((got - want).abs() < 1e-10 * want, "{got} vs {want}");
    }

    #[test]
    fn f32_instantiation() {
        let got: f32 = ln_gamma(5.0f32);
        assert!((got - 24f32.ln()).abs() < 1e-5);
    }

    #[test]
    fn ln_of_big_integers() {
        let x = BigUint::from(10u32).pow(500);
        let got: f64 = ln_biguint(&x);
        assert!((got - 500.0 * 10f64.ln()).abs() < 1e-10);
        let small = BigUint::from(12345u32);
        let got: f64 = ln_biguint(&small);
        assert!((got - 12345f64.ln()).abs() < 1e-14);
    }
}
