//! Saddle-point estimate of `t_{a,n}(rho·n + beta)` for `0 < rho < 1`:
//!
//! ```text
//! t_{a,n}(y) ≈ n! / (2√(πn)) · e^{n u0} (1-u0)^{1-beta} / (u0^n (1-u0)^{rho n})
//! ```
//!
//! where `u0 = 1 + rho/2 - √(rho(1 + rho/4))` is the minimum on `(0,1)` of
//! `h(u) = u - ln u - rho ln(1-u)`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::logreal::LogReal;
use crate::scalar::{ln_gamma, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleEvaluation<F> {
    pub rho: F,
    pub beta: F,
    /// Recorded only; the estimate does not depend on `a` at this order.
    pub a: F,
    pub u0: F,
    pub h_u0: F,
    pub tau: F,
    pub value: LogReal<F>,
}

/// `(u0, 1 - u0)`, the second without cancellation.
pub fn saddle_point<F: Real>(rho: F) -> (F, F) {
    let half = F::lit(0.5);
    let root = (rho * (F::one() + rho * F::lit(0.25))).sqrt();
    let one_minus = root - rho * half;
    (F::one() - one_minus, one_minus)
}

fn check_rho<F: Real>(rho: F) -> Result<()> {
    if !(rho > F::zero() && rho < F::one()) {
        return Err(invalid("rho", "must lie in (0, 1)"));
    }
    Ok(())
}

fn h_prime<F: Real>(rho: F, u: F, one_minus: F) -> (F, F) {
    let d = F::one() - u.recip() + rho / one_minus;
    let scale = F::one() + u.recip() + rho / one_minus;
    (d, scale)
}

/// `h(u0)`.
pub fn h_at_saddle<F: Real>(rho: F) -> Result<F> {
    check_rho(rho)?;
    let (u0, v0) = saddle_point(rho);
    Ok(u0 - u0.ln() - rho * v0.ln())
}

pub fn saddle_tree_polynomial<F: Real>(a: F, n: usize, rho: F, beta: F) -> Result<SaddleEvaluation<F>> {
    check_rho(rho)?;
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let (u0, v0) = saddle_point(rho);
    let (d, scale) = h_prime(rho, u0, v0);
    let tol = F::lit(1e-12).max(F::lit(64.0) * F::epsilon());
    assert!(d.abs() <= tol * scale, "h'(u0) = {d} is not zero");

    let nf = F::from_usize_lossy(n);
    let two = F::lit(2.0);
    let log_value = ln_gamma(nf + F::one()) - (two * (F::PI() * nf).sqrt()).ln() + nf * u0
        + (F::one() - beta) * v0.ln()
        - nf * u0.ln()
        - rho * nf * v0.ln();
    let tau = u0 * (F::one() + rho - two * u0 + u0 * u0) / (v0 * v0);
    Ok(SaddleEvaluation {
        rho,
        beta,
        a,
        u0,
        h_u0: u0 - u0.ln() - rho * v0.ln(),
        tau,
        value: LogReal::from_log(log_value),
    })
}
