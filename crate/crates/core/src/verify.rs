//! Named cross-checks. Each returns a [`CheckOutcome`]; the CLI `verify`
//! subcommand and the acceptance tests both run them through [`Suite`].

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumerate::{brute_force_bridge_pairs, brute_force_row, bridge_count_exact, ExcessTable};
use crate::error::{Error, Result};
use crate::expect::{alpha_beta_identity_check, expected_y_exact, v_scale, Hybrid, DEFAULT_SEAM};
use crate::process::{exhaustive_small, monte_carlo, run_process_observed, run_trials, vertex_trajectory_oracle, MonteCarlo};
use crate::scalar::ln_biguint;
use crate::series::{biguint_to_rational, tree_polynomial};
use crate::wright::{
    decompose_w_with, lemma4_sum, saddle_tree_polynomial, theorem1_ratio, wright_constants, wright_sandwich,
    Lemma4Coefficients,
};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Exact-arithmetic identities only.
    Quick,
    /// Adds asymptotic trends and Monte Carlo.
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub criterion: Option<u8>,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Seed of every Monte Carlo batch in the suite.
pub const SUITE_SEED: u64 = 1;

/// `(n, lmax, trials)` of the desk-scale batch and the two trend endpoints.
pub const DESK_BATCH: (usize, usize, usize) = (100_000, 10, 200);
pub const TREND_LOW: (usize, usize, usize) = (10_000, 4, 4000);
pub const TREND_HIGH: (usize, usize, usize) = (300_000, 12, 1000);

type Check = fn(&Suite) -> Result<(bool, String)>;

const CHECKS: &[(&str, Option<u8>, Level, Check)] = &[
    ("oracle-equivalence", Some(1), Level::Quick, oracle_equivalence),
    ("cayley-base", Some(2), Level::Quick, cayley_base),
    ("wright-dual-path", Some(3), Level::Quick, wright_dual_path),
    ("wright-sandwich", Some(4), Level::Quick, wright_sandwich_check),
    ("alpha-beta-identity", Some(5), Level::Quick, alpha_beta_identity),
    ("n4-anchor", Some(6), Level::Quick, n4_anchor),
    ("bridge-oracle", None, Level::Quick, bridge_oracle),
    ("saddle-trend", Some(7), Level::Full, saddle_trend),
    ("theorem1-trend", Some(8), Level::Full, theorem1_trend),
    ("gamma-sum", Some(9), Level::Full, gamma_sum),
    ("desk-scale-windows", Some(10), Level::Full, desk_scale),
    ("single-creation-echo", Some(11), Level::Full, single_creation_echo),
    ("simulator-invariants", Some(12), Level::Full, simulator_invariants),
    ("head-share", Some(13), Level::Full, head_share),
];

/// Check registry plus injected table faults and cached Monte Carlo batches.
#[derive(Default)]
pub struct Suite {
    faults: Vec<(usize, i64)>,
    desk: OnceLock<Result<MonteCarlo>>,
    low: OnceLock<Result<MonteCarlo>>,
    high: OnceLock<Result<MonteCarlo>>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds 1 to `c(k, k+ell)` in every table the checks build.
    pub fn with_fault(mut self, k: usize, ell: i64) -> Self {
        self.faults.push((k, ell));
        self
    }

    pub fn names(level: Level) -> Vec<&'static str> {
        CHECKS
            .iter()
            .filter(|c| level == Level::Full || c.2 == Level::Quick)
            .map(|c| c.0)
            .collect()
    }

    pub fn run(&self, level: Level) -> Vec<CheckOutcome> {
        Self::names(level)
            .into_iter()
            .map(|n| self.run_named(n).expect("registered"))
            .collect()
    }

    pub fn run_criterion(&self, criterion: u8) -> Option<CheckOutcome> {
        let name = CHECKS.iter().find(|c| c.1 == Some(criterion))?.0;
        self.run_named(name)
    }

    pub fn run_named(&self, name: &str) -> Option<CheckOutcome> {
        let &(name, criterion, _, f) = CHECKS.iter().find(|c| c.0 == name)?;
        let t0 = Instant::now();
        let (passed, detail) = match f(self) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        Some(CheckOutcome {
            name,
            criterion,
            passed,
            detail,
            seconds: t0.elapsed().as_secs_f64(),
        })
    }

    fn table(&self, k_max: usize, l_max: i64) -> Result<ExcessTable> {
        let mut t = ExcessTable::build(k_max, l_max)?;
        for &(k, ell) in &self.faults {
            if t.covers(k, ell) {
                let v = t.count(k, ell) + BigUint::one();
                t.override_entry(k, ell, v);
            }
        }
        Ok(t)
    }

    fn batch(cell: &OnceLock<Result<MonteCarlo>>, (n, lmax, trials): (usize, usize, usize)) -> Result<&MonteCarlo> {
        cell.get_or_init(|| monte_carlo(n, lmax, trials, SUITE_SEED))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn desk_batch(&self) -> Result<&MonteCarlo> {
        Self::batch(&self.desk, DESK_BATCH)
    }
}

fn oracle_equivalence(s: &Suite) -> Result<(bool, String)> {
    let table = s.table(7, 14)?;
    let mut checked = 0;
    for k in 3..=7usize {
        let row = brute_force_row(k)?;
        for (m, &bf) in row.iter().enumerate().skip(k - 1) {
            let ell = m as i64 - k as i64;
            if *table.count(k, ell) != BigUint::from(bf) {
                return Ok((false, format!("c({k},{m}) = {} but brute force gives {bf}", table.count(k, ell))));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} entries equal for 3 <= k <= 7")))
}

fn cayley_base(s: &Suite) -> Result<(bool, String)> {
    let table = s.table(200, -1)?;
    for k in 1..=200usize {
        let want = if k == 1 { BigUint::one() } else { BigUint::from(k).pow(k as u32 - 2) };
        if *table.count(k, -1) != want {
            return Ok((false, format!("c({k},{}) != {k}^{}", k - 1, k as i64 - 2)));
        }
    }
    Ok((true, "c(k,k-1) = k^(k-2) for k <= 200".into()))
}

fn wright_dual_path(s: &Suite) -> Result<(bool, String)> {
    let consts = wright_constants(8)?;
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let pins = [q(5, 24), q(5, 16), q(1105, 1152)];
    for (i, p) in pins.iter().enumerate() {
        if consts.b(i + 1) != p {
            return Ok((false, format!("b_{} = {} != {p}", i + 1, consts.b(i + 1))));
        }
    }
    let table = s.table(26, 8)?;
    for ell in 1..=8usize {
        let d = decompose_w_with(&table, ell as i64, 3 * ell + 2)?;
        if d.b() != *consts.b(ell) || d.c() != *consts.c(ell) {
            return Ok((false, format!("l={ell}: decomposition gives b={}, c={}", d.b(), d.c())));
        }
    }
    Ok((true, "b_l, c_l agree for l <= 8; b_1..b_3 pinned".into()))
}

fn wright_sandwich_check(s: &Suite) -> Result<(bool, String)> {
    let consts = wright_constants(4)?;
    let table = s.table(60, 4)?;
    for ell in 1..=4usize {
        for k in 1..=60usize {
            let (lo, hi) = wright_sandwich(&consts, k, ell)?;
            let c = biguint_to_rational(table.count(k, ell as i64));
            if !(lo <= c && c <= hi) {
                return Ok((false, format!("c({k},{k}+{ell}) outside the sandwich")));
            }
        }
    }
    Ok((true, "sandwich holds for l <= 4, k <= 60".into()))
}

fn alpha_beta_identity(s: &Suite) -> Result<(bool, String)> {
    let table = s.table(12, 3)?;
    let (mut checked, mut skipped) = (0, 0);
    for n in 1..=12usize {
        for k in 1..=n {
            for ell in -1..=3i64 {
                match alpha_beta_identity_check(&table, n, k, ell) {
                    Ok(true) => checked += 1,
                    Ok(false) => return Ok((false, format!("mismatch at n={n}, k={k}, l={ell}"))),
                    Err(Error::Inadmissible(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((true, format!("{checked} cases equal, {skipped} inadmissible")))
}

fn n4_anchor(_: &Suite) -> Result<(bool, String)> {
    let ey = expected_y_exact(4, 0)?;
    let ex = exhaustive_small(4, 2, false)?;
    let ok = ey.is_one() && ex.y[0].is_one() && ex.z.iter().all(Zero::is_zero);
    Ok((ok, format!("alpha sum {ey}, exhaustive Y(0) {}, Z {:?}", ex.y[0], ex.z.iter().map(|z| z.to_string()).collect::<Vec<_>>())))
}

fn bridge_oracle(s: &Suite) -> Result<(bool, String)> {
    let table = s.table(7, 14)?;
    for k in 2..=7usize {
        for ell in 0..=1i64 {
            let m = (k as i64 + ell + 1) as usize;
            let exact = bridge_count_exact(&table, k, ell)?;
            let bf = brute_force_bridge_pairs(k, m, 0)?;
            if exact != BigUint::from(bf) {
                return Ok((false, format!("c'({k},{m}) = {exact}, pairs {bf}")));
            }
        }
    }
    Ok((true, "bridge counts match pair enumeration for k <= 7, l <= 1".into()))
}

/// `y = √(5n)`, i.e. `rho = √(5/n)`.
fn saddle_trend(_: &Suite) -> Result<(bool, String)> {
    let mut errs = Vec::new();
    for n in [500usize, 2000, 8000] {
        let y = (5.0 * n as f64).sqrt().round() as u32;
        let exact = tree_polynomial(0, n, y)?;
        let est = saddle_tree_polynomial(0.0f64, n, y as f64 / n as f64, 0.0)?;
        let ratio = (est.value.ln_abs() - ln_biguint::<f64>(&exact)).exp();
        errs.push((ratio - 1.0).abs());
    }
    let ok = errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 0.6;
    Ok((ok, format!("relative errors {:.4} {:.4} {:.4}", errs[0], errs[1], errs[2])))
}

fn theorem1_trend(s: &Suite) -> Result<(bool, String)> {
    let table = s.table(400, 6)?;
    let dev: Vec<f64> = [100usize, 200, 400]
        .iter()
        .map(|&k| theorem1_ratio::<f64>(&table, k, 6).map(|r| (r - 1.0).abs()))
        .collect::<Result<_>>()?;
    let ok = dev[0] > dev[1] && dev[1] > dev[2];
    Ok((ok, format!("|ratio - 1| = {:.5} {:.5} {:.5}", dev[0], dev[1], dev[2])))
}

fn gamma_sum(_: &Suite) -> Result<(bool, String)> {
    let ell = 10.0;
    let (num, closed) = lemma4_sum(15.5f64, 1e6, Lemma4Coefficients::default(), ell, 2.0)?;
    let r = (num / closed).to_real();
    Ok(((0.95..=1.05).contains(&r), format!("sum / closed form = {r:.6}")))
}

struct Ratios {
    v: f64,
    y: f64,
    z: f64,
}

fn ratios(mc: &MonteCarlo, ell: usize) -> Ratios {
    let e = &mc.per_ell[ell];
    Ratios {
        v: e.v_mean / v_scale(mc.n, ell as i64),
        y: e.y_mean,
        z: 3.0 * ell as f64 * e.z_mean,
    }
}

fn desk_scale(s: &Suite) -> Result<(bool, String)> {
    let mid = ratios(s.desk_batch()?, 8);
    let lo = ratios(Suite::batch(&s.low, TREND_LOW)?, TREND_LOW.1);
    let hi = ratios(Suite::batch(&s.high, TREND_HIGH)?, TREND_HIGH.1);
    let windows = (0.6..=1.4).contains(&mid.v) && (0.5..=1.5).contains(&mid.y) && (0.3..=3.0).contains(&mid.z);
    let d = |x: f64| (x - 1.0).abs();
    let trend = d(hi.v) < d(lo.v) && d(hi.y) < d(lo.y) && d(hi.z) < d(lo.z);
    Ok((
        windows && trend,
        format!(
            "l=8: V {:.3} Y {:.3} 3lZ {:.3}; (V, Y, 3lZ) {:.3} {:.3} {:.3} at n=1e4 l=4 vs {:.3} {:.3} {:.3} at n=3e5 l=12",
            mid.v, mid.y, mid.z, lo.v, lo.y, lo.z, hi.v, hi.y, hi.z
        ),
    ))
}

/// The fraction with `Y = 1` must rise strictly. `Y(Y-1)` must not rise and
/// must end at zero, since it is identically zero once `Y <= 1` in every trial.
fn single_creation_echo(s: &Suite) -> Result<(bool, String)> {
    let mc = s.desk_batch()?;
    let at = |l: usize| &mc.per_ell[l];
    let (a, b, c) = (at(2), at(6), at(10));
    let frac_up = a.y_eq1_frac < b.y_eq1_frac && b.y_eq1_frac < c.y_eq1_frac;
    let f2 = [a.y_fact2_mean, b.y_fact2_mean, c.y_fact2_mean];
    let f2_down = f2[0] >= f2[1] && f2[1] >= f2[2] && f2[2] == 0.0;
    let strict = f2[0] > f2[1] && f2[1] > f2[2];
    Ok((
        frac_up && f2_down,
        format!(
            "P(Y=1) {:.3} {:.3} {:.3}; mean Y(Y-1) {:.4} {:.4} {:.4} (strictly decreasing: {strict})",
            a.y_eq1_frac, b.y_eq1_frac, c.y_eq1_frac, f2[0], f2[1], f2[2]
        ),
    ))
}

fn simulator_invariants(_: &Suite) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for trial in 0..1000 {
        let n = rng.gen_range(2..=200usize);
        let lmax = rng.gen_range(0..=4usize);
        let seed: u64 = rng.gen();
        let mut broken = None;
        let run = run_process_observed(n, lmax, seed, |st, _, _| {
            if broken.is_none() {
                broken = st.check_invariants().err();
            }
        })?;
        if let Some(msg) = broken {
            return Ok((false, format!("trial {trial} (n={n}, L={lmax}, seed={seed}): {msg}")));
        }
        let oracle = vertex_trajectory_oracle(n, lmax, seed)?;
        if oracle.v != run.v || oracle.edges != run.edges {
            return Ok((false, format!("trial {trial} (n={n}, L={lmax}, seed={seed}): V {:?} vs oracle {:?}", run.v, oracle.v)));
        }
    }
    let pooled = |threads: usize| -> Result<_> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| -> Result<_> {
            let runs = run_trials(200, 3, 64, SUITE_SEED)?;
            let ey = Hybrid::new(10_000, 3, DEFAULT_SEAM)?.expected_y()?;
            Ok((runs, ey.to_bits()))
        })
    };
    if pooled(1)? != pooled(4)? {
        return Ok((false, "results differ between 1 and 4 threads".into()));
    }
    Ok((true, "1000 trials: invariants after every edge, V equals the oracle; 1 and 4 threads agree".into()))
}

fn head_share(_: &Suite) -> Result<(bool, String)> {
    let share = Hybrid::new(100_000, 10, DEFAULT_SEAM)?.head_share()?;
    Ok((share < 1e-3, format!("head share {share:.3e}")))
}
