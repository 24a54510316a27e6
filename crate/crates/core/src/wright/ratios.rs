use num_traits::Zero;

use super::constants::WrightConstants;
use crate::enumerate::{bridge_count_exact, ExcessTable};
use crate::error::{invalid, Error, Result};
use crate::logreal::{sum_nonneg, LogReal};
use crate::scalar::{ln_biguint, ln_gamma, Real};
use crate::series::{biguint_to_rational, tree_polynomial};
use crate::Rational;

/// Slack absorbing the dropped `1 + o(1)` factors of [`cr_upper_bound`].
pub const CR_BOUND_SLACK: f64 = 2.0;

/// `6l · c'(k,k+l+1) / (k² c(k,k+l))`.
pub fn theorem1_ratio<F: Real>(table: &ExcessTable, k: usize, ell: i64) -> Result<F> {
    if ell < 1 {
        return Err(invalid("ell", "must be at least 1"));
    }
    let denom = table.try_count(k, ell)?;
    if denom.is_zero() {
        return Err(Error::ZeroDenominator {
            context: format!("c({k}, {k}{ell:+})"),
        });
    }
    let cp = bridge_count_exact(table, k, ell)?;
    if cp.is_zero() {
        return Ok(F::zero());
    }
    let log = (6.0 * ell as f64).ln() + ln_biguint::<f64>(&cp)
        - 2.0 * (k as f64).ln()
        - ln_biguint::<f64>(denom);
    Ok(F::lit(log.exp()))
}

/// Main factor of the upper bound on `c^r(k,k+l+1)`:
/// `(√(48π) l)^{-1} (e/12l)^{l/2} k^{k+3l/2+3/2} exp(√3 l^{3/2} / √k)`.
pub fn cr_upper_bound<F: Real>(k: usize, ell: usize) -> Result<LogReal<F>> {
    if k < 1 {
        return Err(invalid("k", "must be at least 1"));
    }
    if ell < 1 {
        return Err(invalid("ell", "must be at least 1"));
    }
    let kf = F::from_usize_lossy(k);
    let lf = F::from_usize_lossy(ell);
    let half = F::lit(0.5);
    let three = F::lit(3.0);
    let log = -((F::lit(48.0) * F::PI()).sqrt() * lf).ln()
        + half * lf * (F::E() / (F::lit(12.0) * lf)).ln()
        + (kf + F::lit(1.5) * lf + F::lit(1.5)) * kf.ln()
        + three.sqrt() * lf.powf(F::lit(1.5)) / kf.sqrt();
    Ok(LogReal::from_log(log))
}

/// `(b_l t_{0,k}(3l) - c_l t_{0,k}(3l-1), b_l t_{0,k}(3l))`, the Wright
/// sandwich around `c(k, k+l)`.
pub fn wright_sandwich(consts: &WrightConstants, k: usize, ell: usize) -> Result<(Rational, Rational)> {
    if ell < 1 || ell > consts.l_max() {
        return Err(invalid("ell", format!("must be in 1..={}", consts.l_max())));
    }
    let top = biguint_to_rational(&tree_polynomial(0, k, 3 * ell as u32)?);
    let next = biguint_to_rational(&tree_polynomial(0, k, 3 * ell as u32 - 1)?);
    let upper = consts.b(ell).clone() * top;
    let lower = upper.clone() - consts.c(ell).clone() * next;
    Ok((lower, upper))
}

/// `c_1..c_5` of the exponent in [`lemma4_sum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma4Coefficients<F> {
    pub c: [F; 5],
}

impl<F: Real> Default for Lemma4Coefficients<F> {
    fn default() -> Self {
        Lemma4Coefficients { c: [F::zero(); 5] }
    }
}

/// `2^{a+1} 3^{(a-2)/3} Γ((a+1)/3) n^{2(a+1)/3}`, i.e.
/// `∫_0^∞ t^a exp(-t³/24n²) dt`.
pub fn lemma4_closed_form<F: Real>(a: F, n: F) -> LogReal<F> {
    let one = F::one();
    let three = F::lit(3.0);
    let log = (a + one) * F::LN_2() + (a - F::lit(2.0)) / three * three.ln()
        + ln_gamma((a + one) / three)
        + F::lit(2.0) * (a + one) / three * n.ln();
    LogReal::from_log(log)
}

/// `(Σ_{k=1}^{⌊n/c⌋} k^a exp(E(k)), closed form)` with
/// `E(k) = -k³/24n² + c1 k⁴/n³ + c2 l k/n + c3 l²/k + c4 l³/k² + c5 l^{3/2}/√k`.
pub fn lemma4_sum<F: Real>(
    a: F,
    n: F,
    coeffs: Lemma4Coefficients<F>,
    ell: F,
    cutoff_divisor: F,
) -> Result<(LogReal<F>, LogReal<F>)> {
    if !(a > F::zero()) {
        return Err(invalid("a", "must be positive"));
    }
    if !(n >= F::one()) {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(cutoff_divisor > F::zero()) {
        return Err(invalid("cutoff_divisor", "must be positive"));
    }
    let [c1, c2, c3, c4, c5] = coeffs.c;
    let k_max = (n / cutoff_divisor).floor().to_usize().unwrap_or(0);
    let n2 = n * n;
    let n3 = n2 * n;
    let l15 = ell.powf(F::lit(1.5));
    let terms: Vec<LogReal<F>> = (1..=k_max)
        .map(|k| {
            let kf = F::from_usize_lossy(k);
            let k2 = kf * kf;
            let e = -k2 * kf / (F::lit(24.0) * n2)
                + c1 * k2 * k2 / n3
                + c2 * ell * kf / n
                + c3 * ell * ell / kf
                + c4 * ell * ell * ell / k2
                + c5 * l15 / kf.sqrt();
            LogReal::from_log(a * kf.ln() + e)
        })
        .collect();
    Ok((sum_nonneg(&terms), lemma4_closed_form(a, n)))
}
