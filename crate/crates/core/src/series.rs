//! Truncated power series, the tree function `T(z) = z·exp(T(z))` and tree
//! polynomials `t_{a,n}(y) = n!·[z^n] T^a / (1-T)^y`.
//!
//! Series are generic over the coefficient ring; the crate instantiates them
//! with exact rationals ([`crate::RationalSeries`]). The truncation order is
//! always explicit and every operation keeps it.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{FromPrimitive, Num, One, Zero};

use crate::error::{invalid, Error, Result};
use crate::Rational;

/// Coefficient ring of a [`PowerSeries`].
pub trait Coeff: Clone + Num + Neg<Output = Self> + FromPrimitive + Debug {}
impl<T: Clone + Num + Neg<Output = T> + FromPrimitive + Debug> Coeff for T {}

/// `Σ_{i ≤ order} coeffs[i] z^i + O(z^{order+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<C> {
    coeffs: Vec<C>,
}

fn from_usize<C: Coeff>(n: usize) -> C {
    C::from_usize(n).expect("coefficient ring holds small integers")
}

impl<C: Coeff> PowerSeries<C> {
    /// Builds a series of the given order, padding or truncating `coeffs`.
    pub fn new(order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(order + 1, C::zero());
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn constant(order: usize, c: C) -> Self {
        Self::new(order, vec![c])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, C::one())
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        Self::new(order, vec![C::zero(), C::one()])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(PowerSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(PowerSeries { coeffs })
    }

    pub fn scale(&self, c: &C) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut coeffs = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// `exp(f)` for `f(0) = 0`, from `n g_n = Σ_{k=1}^{n} k f_k g_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n_max = self.order();
        let mut g = vec![C::zero(); n_max + 1];
        g[0] = C::one();
        for n in 1..=n_max {
            let mut acc = C::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc = acc + from_usize::<C>(k) * self.coeffs[k].clone() * g[n - k].clone();
                }
            }
            g[n] = acc / from_usize(n);
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// `h^alpha` for a series with `h(0) = 1`, by the ϑ-recurrence
    /// `n g_n = Σ_{k=1}^{n} ((alpha+1) k - n) h_k g_{n-k}`.
    pub fn pow_unit(&self, alpha: &C) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(invalid("series", "pow_unit needs constant term 1"));
        }
        let n_max = self.order();
        let mut g = vec![C::zero(); n_max + 1];
        g[0] = C::one();
        let alpha1 = alpha.clone() + C::one();
        for n in 1..=n_max {
            let mut acc = C::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    let w = alpha1.clone() * from_usize(k) - from_usize(n);
                    acc = acc + w * self.coeffs[k].clone() * g[n - k].clone();
                }
            }
            g[n] = acc / from_usize(n);
        }
        Ok(PowerSeries { coeffs: g })
    }
}

/// The tree function to the given order: `[z^n] T = n^{n-1}/n!`.
pub fn tree_series<C: Coeff>(n_max: usize) -> PowerSeries<C> {
    let mut coeffs = vec![C::zero(); n_max + 1];
    let mut fact = C::one();
    for n in 1..=n_max {
        fact = fact * from_usize(n);
        let nn = from_usize::<C>(n);
        let mut pow = C::one();
        for _ in 1..n {
            pow = pow * nn.clone();
        }
        coeffs[n] = pow / fact.clone();
    }
    PowerSeries { coeffs }
}

/// `(1 - t)^{-y}` for a series `t` without constant term.
pub fn series_geom_inv_pow<C: Coeff>(t: &PowerSeries<C>, y: u32) -> Result<PowerSeries<C>> {
    if !t.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if y == 0 {
        return Err(invalid("y", "must be at least 1"));
    }
    let h = PowerSeries::one(t.order()).sub(t)?;
    let alpha = -C::from_u32(y).expect("small integer");
    h.pow_unit(&alpha)
}

pub fn series_mul<C: Coeff>(a: &PowerSeries<C>, b: &PowerSeries<C>) -> Result<PowerSeries<C>> {
    a.mul(b)
}

/// Exact integer value of a rational, failing unless the denominator is 1.
pub fn rational_to_integer(r: &Rational, context: &str) -> Result<BigInt> {
    if !r.denom().is_one() {
        return Err(Error::InexactDivision {
            context: context.to_string(),
        });
    }
    Ok(r.numer().clone())
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn check_tree_polynomial_args(n: usize, y: u32) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if y == 0 {
        return Err(invalid("y", "must be at least 1"));
    }
    Ok(())
}

/// `t_{a,n}(y)` through exact series arithmetic. Runs in `O(n^2)` rational
/// operations, so it serves moderate `n`; see [`tree_polynomial`] for the
/// closed form used at large `n`.
pub fn tree_polynomial_series(a: usize, n: usize, y: u32) -> Result<BigUint> {
    check_tree_polynomial_args(n, y)?;
    let t: PowerSeries<Rational> = tree_series(n);
    let inv = series_geom_inv_pow(&t, y)?;
    let f = t.powi(a as u32).mul(&inv)?;
    let value = f.coeff(n).clone() * Rational::from_integer(factorial(n).into());
    let int = rational_to_integer(&value, "tree polynomial")?;
    Ok(int.to_biguint().expect("tree polynomial is non-negative"))
}

/// `t_{a,n}(y)` by Lagrange inversion on `T = z·e^T`:
///
/// `t_{a,n}(y) = (n-1)! · [u^{n-1}] (a u^{a-1} (1-u)^{-y} + y u^a (1-u)^{-y-1}) e^{nu}`,
///
/// where every term `(n-1)!·n^i/i!` is an integer, so the whole evaluation
/// stays in exact integer arithmetic with `O(n)` big-integer steps.
pub fn tree_polynomial(a: usize, n: usize, y: u32) -> Result<BigUint> {
    check_tree_polynomial_args(n, y)?;
    let mut total = BigUint::zero();
    if a >= 1 {
        total += lagrange_sum(n, a - 1, y as usize) * BigUint::from(a);
    }
    total += lagrange_sum(n, a, y as usize + 1) * BigUint::from(y);
    Ok(total)
}

// Σ_{j=0}^{n-1-b} C(s+j-1, j) · (n-1)! n^i / i!,  i = n-1-b-j.
fn lagrange_sum(n: usize, b: usize, s: usize) -> BigUint {
    if b > n - 1 {
        return BigUint::zero();
    }
    let i_max = n - 1 - b;
    let nn = BigUint::from(n);
    // P_i = (n-1)!/i! · n^i, walked downward via P_{i-1} = P_i · i / n.
    let falling = ((i_max + 1)..n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
    let mut p = nn.pow(i_max as u32) * falling;
    let mut binom = BigUint::one();
    let mut sum = BigUint::zero();
    for j in 0..=i_max {
        if j > 0 {
            binom = binom * BigUint::from(s + j - 1) / BigUint::from(j);
            let i = i_max - j + 1;
            let (q, r) = (p * BigUint::from(i)).div_rem(&nn);
            debug_assert!(r.is_zero());
            p = q;
        }
        sum += &binom * &p;
    }
    sum
}

/// Third route for cross-checks: expand `(1-T)^{-y} = Σ_m C(y+m-1, m) T^m`
/// and use the rooted-forest count `n!·[z^n] T^j = j·(n-1)!/(n-j)!·n^{n-j}`.
pub fn tree_polynomial_forest_sum(a: usize, n: usize, y: u32) -> Result<BigUint> {
    check_tree_polynomial_args(n, y)?;
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    for m in 0..=n {
        if m > 0 {
            binom = binom * BigUint::from(y as usize + m - 1) / BigUint::from(m);
        }
        let j = a + m;
        if j == 0 || j > n {
            continue;
        }
        // n!·[z^n] T^j = j (n-1)!/(n-j)! n^{n-j}
        let falling = ((n - j + 1)..n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
        let term = BigUint::from(j) * falling * BigUint::from(n).pow((n - j) as u32);
        total += term * &binom;
    }
    Ok(total)
}

pub(crate) fn biguint_to_rational(x: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, x.clone()))
}
