use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumerate::ExcessTable;
use crate::error::{invalid, Error, Result};
use crate::series::{biguint_to_rational, factorial, series_geom_inv_pow, tree_series, PowerSeries};
use crate::{Rational, RationalSeries};

/// Lowest exponent of the basis `(1-T)^{-s}`. The numerator of `W_l` in
/// `(1-T)^{-3l}` has degree `3l+2`, which leaves the polynomial terms
/// `(1-T)^0, (1-T)^1, (1-T)^2`.
pub const BASIS_S_MIN: i64 = -2;

/// `W_l = Σ_{s=-2}^{3l} omega(s) (1-T)^{-s}` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisDecomposition {
    pub ell: i64,
    pub order: usize,
    #[serde(serialize_with = "ser_omega")]
    omega: Vec<Rational>,
}

fn ser_omega<S: serde::Serializer>(omega: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(omega.len()))?;
    for w in omega {
        seq.serialize_element(&w.to_string())?;
    }
    seq.end()
}

impl BasisDecomposition {
    pub fn s_range(&self) -> std::ops::RangeInclusive<i64> {
        BASIS_S_MIN..=3 * self.ell
    }

    /// `omega(s)`; zero outside the basis span.
    pub fn omega(&self, s: i64) -> Rational {
        if self.s_range().contains(&s) {
            self.omega[(s - BASIS_S_MIN) as usize].clone()
        } else {
            Rational::zero()
        }
    }

    /// Leading coefficient `b_l = omega(3l)`.
    pub fn b(&self) -> Rational {
        self.omega(3 * self.ell)
    }

    /// `c_l = -omega(3l-1)`.
    pub fn c(&self) -> Rational {
        -self.omega(3 * self.ell - 1)
    }

    /// `Σ_s omega(s) (1-T)^{-s}` to the working order.
    pub fn reconstruct(&self) -> Result<RationalSeries> {
        let basis = basis_series(self.ell, self.order)?;
        let mut acc = RationalSeries::zero(self.order);
        for (w, b) in self.omega.iter().zip(&basis) {
            acc = acc.add(&b.scale(w))?;
        }
        Ok(acc)
    }
}

/// `W_l(z) = Σ_n c(n, n+l) z^n / n!` to the given order.
pub fn w_series(table: &ExcessTable, ell: i64, order: usize) -> Result<RationalSeries> {
    if !table.covers(order, ell) {
        return Err(Error::TableTooSmall {
            k: order,
            ell,
            k_max: table.k_max(),
            l_max: table.l_max(),
        });
    }
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                Rational::zero()
            } else {
                biguint_to_rational(table.count(n, ell)) / biguint_to_rational(&factorial(n))
            }
        })
        .collect();
    Ok(PowerSeries::new(order, coeffs))
}

// (1-T)^{-s} for s = BASIS_S_MIN..=3l.
fn basis_series(ell: i64, order: usize) -> Result<Vec<RationalSeries>> {
    let t: RationalSeries = tree_series(order);
    let one_minus_t = RationalSeries::one(order).sub(&t)?;
    let inv = series_geom_inv_pow(&t, 1)?;
    let mut current = one_minus_t.mul(&one_minus_t)?;
    let mut out = Vec::new();
    for _ in BASIS_S_MIN..=3 * ell {
        out.push(current.clone());
        current = current.mul(&inv)?;
    }
    Ok(out)
}

/// Decomposes `W_l` over `(1-T)^{-s}`, `-2 <= s <= 3l`, with a fresh table.
/// `order >= 3l+2` makes the system square; extra orders are residual checks.
pub fn decompose_w(ell: i64, order: usize) -> Result<BasisDecomposition> {
    if ell < 1 {
        return Err(invalid("ell", "must be at least 1"));
    }
    let table = ExcessTable::build(order.max(1), ell)?;
    decompose_w_with(&table, ell, order)
}

/// [`decompose_w`] against a caller-supplied table.
pub fn decompose_w_with(table: &ExcessTable, ell: i64, order: usize) -> Result<BasisDecomposition> {
    if ell < 1 {
        return Err(invalid("ell", "must be at least 1"));
    }
    let unknowns = (3 * ell - BASIS_S_MIN + 1) as usize;
    if order + 1 < unknowns {
        return Err(invalid("order", format!("must be at least {}", unknowns - 1)));
    }
    let w = w_series(table, ell, order)?;
    let basis = basis_series(ell, order)?;

    // rows z^0..z^{unknowns-1}, columns s
    let mut m: Vec<Vec<Rational>> = (0..unknowns)
        .map(|n| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b.coeff(n).clone()).collect();
            row.push(w.coeff(n).clone());
            row
        })
        .collect();
    let context = format!("basis decomposition of W_{ell}");
    for col in 0..unknowns {
        let pivot = (col..unknowns)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem {
                context: context.clone(),
            })?;
        m.swap(col, pivot);
        let inv = Rational::one() / m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..unknowns {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=unknowns {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    let omega: Vec<Rational> = m.into_iter().map(|row| row[unknowns].clone()).collect();
    let decomposition = BasisDecomposition { ell, order, omega };
    let residual = w.sub(&decomposition.reconstruct()?)?;
    if let Some(index) = residual.coeffs().iter().position(|c| !c.is_zero()) {
        return Err(Error::NonzeroResidual { context, index });
    }
    Ok(decomposition)
}
