//! Expected transition counts of the random graph process.
//!
//! For a fixed vertex set of size `k` carrying an `l`-component, the expected
//! number of internal edges added to it over the whole process is
//!
//! ```text
//! alpha(l; k) = C(n,k) c(k,k+l) (C(k,2) - k - l) ∫_0^1 t^{k+l} (1-t)^{M-1} dt,
//! M = (n-k)k + C(k,2) - k - l,
//! ```
//!
//! and the bridge channel replaces `c(k,k+l) (C(k,2)-k-l)` by `c'(k,k+l+1)`.
//! Sums over `k` use exact counts up to a seam and Wright's leading
//! asymptotics beyond it.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{bridge_count_exact, ExcessTable};
use crate::error::{invalid, Error, Result};
use crate::logreal::{sum_nonneg, LogReal};
use crate::scalar::{ln_gamma, ln_gamma_ratio, Real};
use crate::series::{biguint_to_rational, factorial};
use crate::{LogF64, Rational};

fn check_alpha_args(n: usize, k: usize, ell: i64) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid("k", format!("must be in 1..={n}")));
    }
    if ell < -1 {
        return Err(invalid("ell", "must be at least -1"));
    }
    Ok(())
}

/// `C(k,2) - k - l`, the number of edges that can still be added inside.
fn internal_slack(k: usize, ell: i64) -> i64 {
    let k = k as i64;
    k * (k - 1) / 2 - k - ell
}

/// `M = (n-k)k + C(k,2) - k - l`.
fn absent_edges(n: usize, k: usize, ell: i64) -> i64 {
    ((n - k) * k) as i64 + internal_slack(k, ell)
}

/// `ln C(n,k) + ln B(k+l+1, M)`; `None` when `M <= 0`.
fn ln_weight<F: Real>(n: usize, k: usize, ell: i64) -> Option<F> {
    let m = absent_edges(n, k, ell);
    if m <= 0 {
        return None;
    }
    let kf = F::from_usize_lossy(k);
    let nf = F::from_usize_lossy(n);
    let a = F::from_i64(k as i64 + ell + 1).expect("small integer");
    let ln_binom = ln_gamma_ratio(nf - kf + F::one(), kf) - ln_gamma(kf + F::one());
    let ln_beta = ln_gamma(a) - ln_gamma_ratio(F::from_i64(m).expect("representable"), a);
    Some(ln_binom + ln_beta)
}

/// `alpha(l; k)` in log space from a (possibly approximate) count.
pub fn alpha_closed<F: Real>(n: usize, k: usize, ell: i64, count: LogReal<F>) -> Result<LogReal<F>> {
    check_alpha_args(n, k, ell)?;
    let slack = internal_slack(k, ell);
    if slack <= 0 || count.is_zero() {
        return Ok(LogReal::zero());
    }
    let w = ln_weight::<F>(n, k, ell).ok_or_else(|| {
        Error::Inadmissible(format!("negative factorial argument at n={n}, k={k}, l={ell}"))
    })?;
    let slack = F::from_i64(slack).expect("representable");
    Ok(count * LogReal::from_log(w + slack.ln()))
}

fn falling(n: usize, k: usize) -> BigUint {
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn fact_i64(x: i64) -> Result<BigUint> {
    if x < 0 {
        return Err(Error::Inadmissible(format!("factorial of {x}")));
    }
    Ok(factorial(x as usize))
}

/// `alpha(l; k)` exactly, in the factorial form
/// `(n)_k (k+l)!/k! c (k²-3k-2l)/2 (nk-k²/2-3k/2-l-1)! / (nk-k²/2-k/2)!`.
pub fn alpha_exact(n: usize, k: usize, ell: i64, count: &BigUint) -> Result<Rational> {
    check_alpha_args(n, k, ell)?;
    let (ki, ni) = (k as i64, n as i64);
    let pref2 = ki * ki - 3 * ki - 2 * ell;
    if pref2 <= 0 || count.is_zero() {
        return Ok(Rational::zero());
    }
    let top = ni * ki - ki * (ki + 3) / 2 - ell - 1;
    let bottom = ni * ki - ki * (ki + 1) / 2;
    let num = falling(n, k) * fact_i64(ki + ell)? * count * BigUint::from(pref2 as u64) * fact_i64(top)?;
    let den = factorial(k) * BigUint::from(2u32) * fact_i64(bottom)?;
    Ok(biguint_to_rational(&num) / biguint_to_rational(&den))
}

/// `∫_0^1 t^a (1-t)^b dt` by expanding `(1-t)^b`.
fn beta_integral_expanded(a: u64, b: u64) -> Rational {
    let mut sum = Rational::zero();
    let mut binom = BigUint::one();
    for j in 0..=b {
        if j > 0 {
            binom = binom * BigUint::from(b - j + 1) / BigUint::from(j);
        }
        let term = biguint_to_rational(&binom) / Rational::from_integer((a + j + 1).into());
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// `alpha(l; k)` from the integral form, with the Beta integral expanded
/// term by term.
pub fn alpha_integral_exact(n: usize, k: usize, ell: i64, count: &BigUint) -> Result<Rational> {
    check_alpha_args(n, k, ell)?;
    let slack = internal_slack(k, ell);
    if slack <= 0 || count.is_zero() {
        return Ok(Rational::zero());
    }
    let m = absent_edges(n, k, ell);
    let binom = falling(n, k) / factorial(k);
    let pref = biguint_to_rational(&(binom * count * BigUint::from(slack as u64)));
    Ok(pref * beta_integral_expanded((k as i64 + ell) as u64, (m - 1) as u64))
}

/// Exact agreement of the factorial and integral forms of `alpha(l; k)`.
pub fn alpha_beta_identity_check(table: &ExcessTable, n: usize, k: usize, ell: i64) -> Result<bool> {
    let count = table.try_count(k, ell)?;
    Ok(alpha_exact(n, k, ell, count)? == alpha_integral_exact(n, k, ell, count)?)
}

/// Expected number of bridge additions between an `(l-p)`-component on `k1`
/// vertices and a `p`-component on `k2` vertices (ordered pair).
pub fn beta_pair<F: Real>(
    table: &ExcessTable,
    n: usize,
    k1: usize,
    k2: usize,
    p: i64,
    ell: i64,
) -> Result<LogReal<F>> {
    if p < 0 || p > ell {
        return Err(invalid("p", format!("must be in 0..={ell}")));
    }
    if k1 == 0 || k2 == 0 || k1 + k2 > n {
        return Err(invalid("k1", "need k1, k2 >= 1 and k1 + k2 <= n"));
    }
    let k = k1 + k2;
    let a = table.try_count(k1, ell - p)?;
    let b = table.try_count(k2, p)?;
    if a.is_zero() || b.is_zero() {
        return Ok(LogReal::zero());
    }
    let ln_ck = crate::scalar::ln_biguint::<F>(&crate::enumerate::binomial_row(k)[k1]);
    let w = ln_weight::<F>(n, k, ell)
        .ok_or_else(|| Error::Inadmissible(format!("negative factorial argument at n={n}, k={k}")))?;
    let pair = LogReal::from_biguint(a) * LogReal::from_biguint(b);
    let joins = F::from_usize_lossy(k1 * k2).ln();
    Ok(pair * LogReal::from_log(w + ln_ck + joins))
}

/// Bridge-channel term `C(n,k) c'(k,k+l+1) B(k+l+1, M)`.
pub fn z_term<F: Real>(n: usize, k: usize, ell: i64, cprime: LogReal<F>) -> Result<LogReal<F>> {
    check_alpha_args(n, k, ell)?;
    if cprime.is_zero() {
        return Ok(LogReal::zero());
    }
    let w = ln_weight::<F>(n, k, ell)
        .ok_or_else(|| Error::Inadmissible(format!("negative factorial argument at n={n}, k={k}")))?;
    Ok(cprime * LogReal::from_log(w))
}

/// Exact `C(n,k) c'(k,k+l+1) B(k+l+1, M)`.
pub fn z_term_exact(n: usize, k: usize, ell: i64, cprime: &BigUint) -> Result<Rational> {
    check_alpha_args(n, k, ell)?;
    if cprime.is_zero() {
        return Ok(Rational::zero());
    }
    let m = absent_edges(n, k, ell);
    if m <= 0 {
        return Err(Error::Inadmissible(format!("M = {m} at n={n}, k={k}")));
    }
    let binom = falling(n, k) / factorial(k);
    let a = (k as i64 + ell) as usize;
    let beta = biguint_to_rational(&(factorial(a) * factorial(m as usize - 1)))
        / biguint_to_rational(&factorial(a + m as usize));
    Ok(biguint_to_rational(&(binom * cprime)) * beta)
}

/// `Σ_k alpha(l; k)` exactly (small `n`).
pub fn expected_y_exact(n: usize, ell: i64) -> Result<Rational> {
    let table = ExcessTable::build(n.max(1), ell.max(-1))?;
    (1..=n)
        .map(|k| alpha_exact(n, k, ell, table.count(k, ell)))
        .try_fold(Rational::zero(), |acc, a| Ok(acc + a?))
}

/// `Σ_k C(n,k) c'(k,k+l+1) B(k+l+1, M)` exactly (small `n`).
pub fn expected_z_exact(n: usize, ell: i64) -> Result<Rational> {
    if ell < 0 {
        return Err(invalid("ell", "must be non-negative"));
    }
    let table = ExcessTable::build(n.max(1), ell)?;
    (1..=n)
        .map(|k| z_term_exact(n, k, ell, &bridge_count_exact(&table, k, ell)?))
        .try_fold(Rational::zero(), |acc, a| Ok(acc + a?))
}

/// Leading asymptotic model of `c(k, k+l)`:
/// `½√(3/π) (e/12l)^{l/2} k^{k+3l/2-1/2}` for `l >= 1`,
/// `√(π/8) k^{k-1/2}` for `l = 0`, and Cayley's `k^{k-2}` for trees.
pub fn count_asymptotic<F: Real>(k: usize, ell: i64) -> LogReal<F> {
    assert!(ell >= -1);
    let kf = F::from_usize_lossy(k);
    let half = F::lit(0.5);
    let log = match ell {
        -1 => (kf - F::lit(2.0)) * kf.ln(),
        0 => half * (F::PI() / F::lit(8.0)).ln() + (kf - half) * kf.ln(),
        _ => {
            let lf = F::from_i64(ell).expect("small integer");
            (half * (F::lit(3.0) / F::PI()).sqrt()).ln()
                + half * lf * (F::E() / (F::lit(12.0) * lf)).ln()
                + (kf + F::lit(1.5) * lf - half) * kf.ln()
        }
    };
    LogReal::from_log(log)
}

/// `c'(k,k+l+1) ≈ k²/(6l) · c(k,k+l)`, `l >= 1`.
pub fn bridge_count_asymptotic<F: Real>(k: usize, ell: i64) -> LogReal<F> {
    assert!(ell >= 1);
    let kf = F::from_usize_lossy(k);
    let lf = F::from_i64(ell).expect("small integer");
    count_asymptotic::<F>(k, ell) * LogReal::from_log((kf * kf / (F::lit(6.0) * lf)).ln())
}

/// `⌈(l/10) ln(n/l)⌉`.
pub fn omega_cutoff(n: usize, ell: i64) -> Result<usize> {
    if ell < 1 || ell as usize >= n {
        return Err(invalid("ell", format!("must be in 1..{n}")));
    }
    let l = ell as f64;
    Ok(((l / 10.0) * (n as f64 / l).ln()).ceil() as usize)
}

/// Largest order for which `expected_z` with `l = 0` is evaluated exactly.
pub const EXACT_Z_MAX_N: usize = 2000;

/// Default last order taken from the exact table.
pub const DEFAULT_SEAM: usize = 150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailModel {
    Exact,
    HybridAsymptotic,
}

/// Per-`k` terms of the three expectation sums under the hybrid model.
pub struct Hybrid {
    n: usize,
    ell: i64,
    seam: usize,
    table: ExcessTable,
}

impl Hybrid {
    /// Exact counts for `k <= seam` (capped at `n`), asymptotics beyond.
    pub fn new(n: usize, ell: i64, seam: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("n", "must be at least 1"));
        }
        if ell < 0 {
            return Err(invalid("ell", "must be non-negative"));
        }
        if seam < 1 {
            return Err(invalid("seam", "must be at least 1"));
        }
        let seam = seam.min(n);
        let table = ExcessTable::build(seam, ell)?;
        Ok(Hybrid { n, ell, seam, table })
    }

    pub fn exact_k_ceiling(&self) -> usize {
        self.seam
    }

    pub fn tail_model(&self) -> TailModel {
        if self.seam >= self.n {
            TailModel::Exact
        } else {
            TailModel::HybridAsymptotic
        }
    }

    pub fn table(&self) -> &ExcessTable {
        &self.table
    }

    fn count(&self, k: usize, ell: i64) -> LogF64 {
        if k <= self.seam {
            LogReal::from_biguint(self.table.count(k, ell))
        } else {
            count_asymptotic(k, ell)
        }
    }

    /// `alpha(ell; k)` for `k = 1..=n`, with `ell` in `-1..=self.ell`.
    pub fn alpha_terms(&self, ell: i64) -> Result<Vec<LogF64>> {
        assert!((-1..=self.ell).contains(&ell));
        (1..=self.n)
            .into_par_iter()
            .map(|k| alpha_closed(self.n, k, ell, self.count(k, ell)))
            .collect()
    }

    /// Bridge-channel terms for `k = 1..=n`.
    pub fn z_terms(&self) -> Result<Vec<LogF64>> {
        if self.ell == 0 && self.tail_model() != TailModel::Exact {
            return Err(Error::Inadmissible(
                "the bridge channel at l = 0 has no asymptotic tail; use seam >= n".into(),
            ));
        }
        (1..=self.n)
            .into_par_iter()
            .map(|k| {
                let cp = if k <= self.seam {
                    LogReal::from_biguint(&bridge_count_exact(&self.table, k, self.ell)?)
                } else {
                    bridge_count_asymptotic(k, self.ell)
                };
                z_term(self.n, k, self.ell, cp)
            })
            .collect()
    }

    pub fn expected_y(&self) -> Result<f64> {
        Ok(sum_nonneg(&self.alpha_terms(self.ell)?).to_real())
    }

    pub fn expected_z(&self) -> Result<f64> {
        Ok(sum_nonneg(&self.z_terms()?).to_real())
    }

    /// `Σ_k k alpha(l-1; k)`.
    pub fn expected_v(&self) -> Result<f64> {
        let terms: Vec<LogF64> = self
            .alpha_terms(self.ell - 1)?
            .into_iter()
            .enumerate()
            .map(|(i, a)| a * LogReal::from_real((i + 1) as f64))
            .collect();
        Ok(sum_nonneg(&terms).to_real())
    }

    /// Share of `Σ_k alpha(l; k)` coming from `k < omega(n)`.
    pub fn head_share(&self) -> Result<f64> {
        let cutoff = omega_cutoff(self.n, self.ell)?;
        let terms = self.alpha_terms(self.ell)?;
        let head = sum_nonneg(&terms[..cutoff.saturating_sub(1).min(terms.len())]);
        let total = sum_nonneg(&terms);
        if total.is_zero() {
            return Err(Error::ZeroDenominator {
                context: "alpha sum".into(),
            });
        }
        Ok((head / total).to_real())
    }
}

pub fn expected_y(n: usize, ell: i64, seam: usize) -> Result<f64> {
    Hybrid::new(n, ell, seam)?.expected_y()
}

pub fn expected_z(n: usize, ell: i64, seam: usize) -> Result<f64> {
    if ell == 0 {
        if n > EXACT_Z_MAX_N {
            return Err(invalid("n", format!("must be at most {EXACT_Z_MAX_N} at l = 0")));
        }
        return Hybrid::new(n, 0, n)?.expected_z();
    }
    Hybrid::new(n, ell, seam)?.expected_z()
}

pub fn expected_v(n: usize, ell: i64, seam: usize) -> Result<f64> {
    if ell < 1 {
        return Err(invalid("ell", "must be at least 1"));
    }
    Hybrid::new(n, ell, seam)?.expected_v()
}

/// `(12 l)^{1/3} n^{2/3}`.
pub fn v_scale(n: usize, ell: i64) -> f64 {
    (12.0 * ell as f64).cbrt() * (n as f64).powf(2.0 / 3.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationReport {
    pub n: usize,
    pub ell: i64,
    #[serde(rename = "E_Y")]
    pub e_y: f64,
    #[serde(rename = "E_Z")]
    pub e_z: Option<f64>,
    #[serde(rename = "E_V")]
    pub e_v: Option<f64>,
    #[serde(rename = "V_formula_ratio")]
    pub v_formula_ratio: Option<f64>,
    pub cutoff_used: Option<usize>,
    /// Set when `omega(n) > n/10`.
    pub cutoff_flagged: bool,
    pub exact_k_ceiling: usize,
    pub tail_model: TailModel,
}

/// All three expectations at one `(n, l)`.
pub fn expectation_report(n: usize, ell: i64, seam: usize) -> Result<ExpectationReport> {
    let h = Hybrid::new(n, ell, seam)?;
    let e_y = h.expected_y()?;
    let e_z = if ell == 0 {
        if n <= EXACT_Z_MAX_N {
            Some(expected_z(n, 0, seam)?)
        } else {
            None
        }
    } else {
        Some(h.expected_z()?)
    };
    let e_v = if ell >= 1 { Some(h.expected_v()?) } else { None };
    let cutoff = if ell >= 1 && (ell as usize) < n {
        Some(omega_cutoff(n, ell)?)
    } else {
        None
    };
    Ok(ExpectationReport {
        n,
        ell,
        e_y,
        e_z,
        e_v,
        v_formula_ratio: e_v.map(|v| v / v_scale(n, ell)),
        cutoff_used: cutoff,
        cutoff_flagged: cutoff.is_some_and(|c| c as f64 > n as f64 / 10.0),
        exact_k_ceiling: h.exact_k_ceiling(),
        tail_model: h.tail_model(),
    })
}
