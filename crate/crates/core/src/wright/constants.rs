use num_traits::{ToPrimitive, Zero};

use super::decompose::decompose_w;
use crate::error::{invalid, Result};
use crate::series::{biguint_to_rational, factorial};
use crate::Rational;

/// Wright constants `b_l`, `c_l` (exact) for `1 <= l <= l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct WrightConstants {
    b: Vec<Rational>,
    c: Vec<Rational>,
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `b_1 = 5/24` and
/// `2(l+1) b_{l+1} = 3l(l+1) b_l + 3 Σ_{p=1}^{l-1} p(l-p) b_p b_{l-p}`.
pub fn wright_b(l_max: usize) -> Result<Vec<Rational>> {
    if l_max < 1 {
        return Err(invalid("l_max", "must be at least 1"));
    }
    let mut b = vec![Rational::zero(), Rational::new(5.into(), 24.into())];
    for ell in 1..l_max as i64 {
        let mut rhs = r(3 * ell * (ell + 1)) * b[ell as usize].clone();
        for p in 1..ell {
            rhs += r(3 * p * (ell - p)) * b[p as usize].clone() * b[(ell - p) as usize].clone();
        }
        b.push(rhs / r(2 * (ell + 1)));
    }
    b.remove(0);
    Ok(b)
}

/// `c_l` from `c_1` and
/// `2(3l+2) c_{l+1} = 8(l+1) b_{l+1} + 3l b_l + (3l+2)(3l-1) c_l
///                    + 6 Σ_{p=1}^{l-1} p(3l-3p-1) b_p c_{l-p}`.
/// `b` must hold `b_1..b_{l_max}`.
pub fn wright_c(b: &[Rational], c1: Rational) -> Vec<Rational> {
    let l_max = b.len();
    let bb = |l: i64| b[(l - 1) as usize].clone();
    let mut c = vec![c1];
    for ell in 1..l_max as i64 {
        let cc = |l: i64, c: &[Rational]| c[(l - 1) as usize].clone();
        let mut rhs = r(8 * (ell + 1)) * bb(ell + 1)
            + r(3 * ell) * bb(ell)
            + r((3 * ell + 2) * (3 * ell - 1)) * cc(ell, &c);
        for p in 1..ell {
            rhs += r(6 * p * (3 * ell - 3 * p - 1)) * bb(p) * cc(ell - p, &c);
        }
        c.push(rhs / r(2 * (3 * ell + 2)));
    }
    c
}

/// Both recurrences, with `c_1 = -omega(2)` of the decomposition of `W_1`.
pub fn wright_constants(l_max: usize) -> Result<WrightConstants> {
    let b = wright_b(l_max)?;
    let c1 = decompose_w(1, 8)?.c();
    let c = wright_c(&b, c1);
    Ok(WrightConstants { b, c })
}

impl WrightConstants {
    pub fn l_max(&self) -> usize {
        self.b.len()
    }

    /// `b_l`, `1 <= l <= l_max`.
    pub fn b(&self, ell: usize) -> &Rational {
        &self.b[ell - 1]
    }

    /// `c_l`, `1 <= l <= l_max`.
    pub fn c(&self, ell: usize) -> &Rational {
        &self.c[ell - 1]
    }

    /// `d_l = b_l / ((3/2)^l (l-1)!)`, exact.
    pub fn d_exact(&self, ell: usize) -> Rational {
        let three_halves = Rational::new(3.into(), 2.into());
        let mut scale = biguint_to_rational(&factorial(ell - 1));
        for _ in 0..ell {
            scale *= three_halves.clone();
        }
        self.b(ell).clone() / scale
    }

    pub fn d(&self, ell: usize) -> f64 {
        self.d_exact(ell).to_f64().expect("d_l is a moderate real")
    }

    /// `(l, b_l, c_l, d_l)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &Rational, &Rational, f64)> + '_ {
        (1..=self.l_max()).map(|l| (l, self.b(l), self.c(l), self.d(l)))
    }
}
