//! Exact counts `c(k, k+l)` of connected labelled graphs by excess.
//!
//! The table is filled by Wright's coefficient recurrence
//!
//! ```text
//! (k+l+1) c(k,k+l+1) = (C(k,2) - k - l) c(k,k+l)
//!     + 1/2 Σ_{t=1}^{k-1} Σ_{p=-1}^{l+1} C(k,t) t(k-t) c(t,t+p) c(k-t,k-t+l-p)
//! ```
//!
//! starting from the Cayley row `c(k,k-1) = k^{k-2}`. The `p = -1` and
//! `p = l+1` terms reference row `l+1` only at orders `< k`, so filling rows
//! in ascending excess and each row in ascending order closes the recurrence.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Smallest order of a connected graph with excess `ell`: 1 for trees,
/// otherwise the least `k` with `C(k,2) >= k + ell`.
pub fn min_order(ell: i64) -> usize {
    assert!(ell >= -1, "excess is at least -1");
    if ell == -1 {
        return 1;
    }
    let mut k: i64 = 3;
    while k * (k - 3) / 2 < ell {
        k += 1;
    }
    k as usize
}

/// True when no connected graph with `k` vertices and excess `ell` exists.
pub fn structurally_zero(k: usize, ell: i64) -> bool {
    if k == 0 || ell < -1 {
        return true;
    }
    let ki = k as i64;
    ki + ell > ki * (ki - 1) / 2 || ki + ell < 0 || k < min_order(ell)
}

/// Binomial row `C(k, 0..=k)`.
pub(crate) fn binomial_row(k: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(k + 1);
    row.push(BigUint::one());
    for t in 1..=k {
        let next = &row[t - 1] * BigUint::from(k - t + 1) / BigUint::from(t);
        row.push(next);
    }
    row
}

/// Dense triangular table of `c(k, k+l)` for `1 <= k <= k_max`,
/// `-1 <= l <= l_max`. Entries past the zero threshold are stored as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcessTable {
    k_max: usize,
    l_max: i64,
    // rows[l + 1][k], index 0 unused (k = 0)
    rows: Vec<Vec<BigUint>>,
}

impl ExcessTable {
    pub fn build(k_max: usize, l_max: i64) -> Result<Self> {
        if k_max < 1 {
            return Err(invalid("k_max", "must be at least 1"));
        }
        if l_max < -1 {
            return Err(invalid("l_max", "must be at least -1"));
        }
        let cayley: Vec<BigUint> = (0..=k_max)
            .map(|k| match k {
                0 => BigUint::zero(),
                1 | 2 => BigUint::one(),
                _ => BigUint::from(k).pow(k as u32 - 2),
            })
            .collect();
        let mut table = ExcessTable {
            k_max,
            l_max,
            rows: vec![cayley],
        };
        for ell in -1..l_max {
            let row = table.next_row(ell)?;
            table.rows.push(row);
        }
        Ok(table)
    }

    // Row l+1 from rows -1..=l, plus its own smaller-order entries.
    fn next_row(&self, ell: i64) -> Result<Vec<BigUint>> {
        let target = ell + 1;
        let mut row = vec![BigUint::zero(); self.k_max + 1];
        for k in 1..=self.k_max {
            if structurally_zero(k, target) {
                continue;
            }
            let ki = k as i64;
            let binom = binomial_row(k);
            let mut conv = BigUint::zero();
            for t in 1..k {
                let mut inner = BigUint::zero();
                for p in -1..=target {
                    let q = ell - p;
                    let left = if p == target {
                        &row[t]
                    } else {
                        self.count(t, p)
                    };
                    if left.is_zero() {
                        continue;
                    }
                    let right = if q == target {
                        &row[k - t]
                    } else if q < -1 {
                        continue;
                    } else {
                        self.count(k - t, q)
                    };
                    if right.is_zero() {
                        continue;
                    }
                    inner += left * right;
                }
                if !inner.is_zero() {
                    conv += inner * &binom[t] * BigUint::from(t * (k - t));
                }
            }
            let (half, rem) = conv.div_rem(&BigUint::from(2u32));
            if !rem.is_zero() {
                return Err(Error::InexactDivision {
                    context: format!("bridge convolution at k={k}, l={target}"),
                });
            }
            let mut rhs = half;
            let prev = self.count(k, ell);
            if !prev.is_zero() {
                let slack = ki * (ki - 1) / 2 - ki - ell;
                assert!(slack >= 0, "nonzero count beyond the edge limit");
                rhs += prev * BigUint::from(slack as u64);
            }
            let (value, rem) = rhs.div_rem(&BigUint::from((ki + ell + 1) as u64));
            if !rem.is_zero() {
                return Err(Error::InexactDivision {
                    context: format!("division by k+l+1 at k={k}, l={target}"),
                });
            }
            row[k] = value;
        }
        Ok(row)
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn l_max(&self) -> i64 {
        self.l_max
    }

    pub fn covers(&self, k: usize, ell: i64) -> bool {
        k <= self.k_max && ell >= -1 && ell <= self.l_max
    }

    /// `c(k, k+ell)`. Panics outside the table.
    pub fn count(&self, k: usize, ell: i64) -> &BigUint {
        assert!(
            self.covers(k, ell),
            "c({k}, {k}{ell:+}) outside table (k <= {}, l <= {})",
            self.k_max,
            self.l_max
        );
        &self.rows[(ell + 1) as usize][k]
    }

    pub fn try_count(&self, k: usize, ell: i64) -> Result<&BigUint> {
        if !self.covers(k, ell) {
            return Err(self.too_small(k, ell));
        }
        Ok(self.count(k, ell))
    }

    pub(crate) fn too_small(&self, k: usize, ell: i64) -> Error {
        Error::TableTooSmall {
            k,
            ell,
            k_max: self.k_max,
            l_max: self.l_max,
        }
    }

    /// Replaces one entry. Only used to inject faults into verification runs.
    #[doc(hidden)]
    pub fn override_entry(&mut self, k: usize, ell: i64, value: BigUint) {
        assert!(self.covers(k, ell));
        self.rows[(ell + 1) as usize][k] = value;
    }

    /// `(k, ell, count)` triples in row-major order (excess outer).
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64, &BigUint)> + '_ {
        self.rows.iter().enumerate().flat_map(|(li, row)| {
            row.iter()
                .enumerate()
                .skip(1)
                .map(move |(k, c)| (k, li as i64 - 1, c))
        })
    }
}

/// Largest order handled by the exhaustive oracle.
pub const BRUTE_FORCE_MAX_K: usize = 7;

fn edge_list(k: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..k {
        for u in 0..v {
            edges.push((u, v));
        }
    }
    edges
}

fn adjacency(edges: &[(usize, usize)], mask: u32) -> [u8; BRUTE_FORCE_MAX_K] {
    let mut adj = [0u8; BRUTE_FORCE_MAX_K];
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        m &= m - 1;
        let (u, v) = edges[e];
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

// Vertex set reachable from `start` inside `allowed`.
fn reach(adj: &[u8; BRUTE_FORCE_MAX_K], start: usize, allowed: u8) -> u8 {
    let mut seen = 1u8 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & allowed & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen
}

/// Number of connected graphs on `k <= 7` labelled vertices, by edge count,
/// from exhaustive enumeration of all `2^{C(k,2)}` edge subsets.
pub fn brute_force_row(k: usize) -> Result<Vec<u64>> {
    if k == 0 || k > BRUTE_FORCE_MAX_K {
        return Err(invalid("k", format!("must be in 1..={BRUTE_FORCE_MAX_K}")));
    }
    let edges = edge_list(k);
    let n_edges = edges.len();
    let full: u8 = ((1u16 << k) - 1) as u8;
    let total: u64 = 1u64 << n_edges;
    const SHARD: u64 = 1 << 14;
    let shards = total.div_ceil(SHARD);
    let counts = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut local = vec![0u64; n_edges + 1];
            for mask in (s * SHARD)..((s + 1) * SHARD).min(total) {
                let mask = mask as u32;
                let adj = adjacency(&edges, mask);
                if reach(&adj, 0, full) == full {
                    local[mask.count_ones() as usize] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; n_edges + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts)
}

/// Connected labelled graphs on `k` vertices with exactly `m` edges.
pub fn brute_force_count(k: usize, m: usize) -> Result<BigUint> {
    let row = brute_force_row(k)?;
    Ok(BigUint::from(row.get(m).copied().unwrap_or(0)))
}

/// Exhaustive count of `(graph, edge)` pairs over connected graphs with `k`
/// vertices and `m` edges where the edge is a bridge whose removal leaves two
/// components of excess at least `min_excess` each.
pub fn brute_force_bridge_pairs(k: usize, m: usize, min_excess: i64) -> Result<u64> {
    if k == 0 || k > BRUTE_FORCE_MAX_K {
        return Err(invalid("k", format!("must be in 1..={BRUTE_FORCE_MAX_K}")));
    }
    let edges = edge_list(k);
    let n_edges = edges.len();
    let full: u8 = ((1u16 << k) - 1) as u8;
    let mut pairs = 0u64;
    for mask in 0u32..(1u32 << n_edges) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let adj = adjacency(&edges, mask);
        if reach(&adj, 0, full) != full {
            continue;
        }
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = mask & !(1 << e);
            let adj_rest = adjacency(&edges, rest);
            let (u, _) = edges[e];
            let side = reach(&adj_rest, u, full);
            if side == full {
                continue;
            }
            let edges_in = |set: u8| -> i64 {
                edges
                    .iter()
                    .enumerate()
                    .filter(|(i, (a, b))| {
                        rest & (1 << i) != 0 && set & (1 << a) != 0 && set & (1 << b) != 0
                    })
                    .count() as i64
            };
            let other = full & !side;
            let ex_a = edges_in(side) - side.count_ones() as i64;
            let ex_b = edges_in(other) - other.count_ones() as i64;
            if ex_a >= min_excess && ex_b >= min_excess {
                pairs += 1;
            }
        }
    }
    Ok(pairs)
}

/// How a minimum excess `r` restricts the two sides of a distinguished bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// Both sides have excess at least `r`: `r <= p <= l - r`, halved.
    BothSides,
    /// The convolution index alone satisfies `p >= r`: `r <= p <= l`, with
    /// ordered sides (no halving), i.e. `(graph, bridge, side)` triples whose
    /// chosen side has excess at least `r`.
    OneSide,
}

/// `Σ_t C(k,t) t(k-t) c(t,t+p) c(k-t,k-t+l-p)` for one `p`.
fn bridge_term(table: &ExcessTable, binom: &[BigUint], k: usize, ell: i64, p: i64) -> BigUint {
    let mut sum = BigUint::zero();
    for t in 1..k {
        let a = table.count(t, p);
        if a.is_zero() {
            continue;
        }
        let b = table.count(k - t, ell - p);
        if b.is_zero() {
            continue;
        }
        sum += a * b * &binom[t] * BigUint::from(t * (k - t));
    }
    sum
}

fn check_bridge_args(table: &ExcessTable, k: usize, ell: i64) -> Result<()> {
    if ell < 0 {
        return Err(invalid("ell", "must be non-negative"));
    }
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if !table.covers(k, ell) {
        return Err(table.too_small(k, ell));
    }
    Ok(())
}

fn halve(x: BigUint, context: &str) -> Result<BigUint> {
    let (h, r) = x.div_rem(&BigUint::from(2u32));
    if !r.is_zero() {
        return Err(Error::InexactDivision {
            context: context.to_string(),
        });
    }
    Ok(h)
}

/// `c'(k, k+l+1)`: `(l+1)`-components of order `k` with a distinguished
/// bridge between two components of excess `>= 0`.
pub fn bridge_count_exact(table: &ExcessTable, k: usize, ell: i64) -> Result<BigUint> {
    bridge_count_general(table, k, ell, 0, Restriction::BothSides)
}

/// `c^r(k, k+l+1)`, the bridge count with excess at least `r` on the
/// restricted side(s). `0 <= r <= floor(l/2)`.
pub fn bridge_count_general(
    table: &ExcessTable,
    k: usize,
    ell: i64,
    r: i64,
    restriction: Restriction,
) -> Result<BigUint> {
    check_bridge_args(table, k, ell)?;
    if r < 0 || r > ell / 2 {
        return Err(invalid("r", format!("must be in 0..={}", ell / 2)));
    }
    let binom = binomial_row(k);
    match restriction {
        Restriction::BothSides => {
            let total = (r..=ell - r)
                .map(|p| bridge_term(table, &binom, k, ell, p))
                .fold(BigUint::zero(), |a, b| a + b);
            halve(total, "bridge count")
        }
        Restriction::OneSide => Ok((r..=ell)
            .map(|p| bridge_term(table, &binom, k, ell, p))
            .fold(BigUint::zero(), |a, b| a + b)),
    }
}

/// Precomputed per-`p` bridge convolutions for all `k <= k_max`,
/// `0 <= l <= l_max` of an [`ExcessTable`].
#[derive(Debug, Clone)]
pub struct BridgeTable {
    k_max: usize,
    l_max: i64,
    // terms[l][k][p]
    terms: Vec<Vec<Vec<BigUint>>>,
}

impl BridgeTable {
    pub fn build(table: &ExcessTable) -> Self {
        let k_max = table.k_max();
        let l_max = table.l_max().max(-1);
        let mut terms = Vec::new();
        for ell in 0..=l_max {
            let mut by_k = vec![Vec::new(); k_max + 1];
            for (k, slot) in by_k.iter_mut().enumerate().skip(1) {
                let binom = binomial_row(k);
                *slot = (0..=ell)
                    .map(|p| bridge_term(table, &binom, k, ell, p))
                    .collect();
            }
            terms.push(by_k);
        }
        BridgeTable {
            k_max,
            l_max,
            terms,
        }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn l_max(&self) -> i64 {
        self.l_max
    }

    fn check(&self, k: usize, ell: i64) -> Result<()> {
        if k == 0 || k > self.k_max || ell < 0 || ell > self.l_max {
            return Err(Error::TableTooSmall {
                k,
                ell,
                k_max: self.k_max,
                l_max: self.l_max,
            });
        }
        Ok(())
    }

    /// `c'(k, k+l+1)`.
    pub fn cprime(&self, k: usize, ell: i64) -> Result<BigUint> {
        self.cr(k, ell, 0)
    }

    /// Two-sided `c^r(k, k+l+1)`.
    pub fn cr(&self, k: usize, ell: i64, r: i64) -> Result<BigUint> {
        self.check(k, ell)?;
        if r < 0 || r > ell / 2 {
            return Err(invalid("r", format!("must be in 0..={}", ell / 2)));
        }
        let row = &self.terms[ell as usize][k];
        let total = row[r as usize..=(ell - r) as usize]
            .iter()
            .fold(BigUint::zero(), |a, b| a + b);
        halve(total, "bridge table")
    }
}

/// `c(k, k+l)` as `u64` when it fits; convenience for small tests.
pub fn count_u64(table: &ExcessTable, k: usize, ell: i64) -> Option<u64> {
    table.count(k, ell).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn min_order_matches_closed_form() {
        for ell in 0..200i64 {
            let f = ((3.0 + (9.0 + 8.0 * ell as f64).sqrt()) / 2.0).ceil() as usize;
            assert_eq!(min_order(ell), f, "ell={ell}");
        }
        assert_eq!(min_order(-1), 1);
        assert_eq!(min_order(0), 3);
        assert_eq!(min_order(1), 4);
    }

    #[test]
    fn small_entries() {
        let t = ExcessTable::build(8, 3).unwrap();
        assert_eq!(*t.count(3, 0), big(1));
        assert_eq!(*t.count(4, 0), big(15));
        assert_eq!(*t.count(4, 1), big(6));
        assert_eq!(*t.count(4, 2), big(1));
        assert_eq!(*t.count(5, 0), big(222));
        assert_eq!(*t.count(1, -1), big(1));
        assert_eq!(*t.count(2, -1), big(1));
        assert!(t.count(4, 3).is_zero());
        assert!(t.count(3, 1).is_zero());
    }

    #[test]
    fn zero_pattern_matches_threshold() {
        let t = ExcessTable::build(12, 8).unwrap();
        for (k, ell, c) in t.entries() {
            assert_eq!(c.is_zero(), structurally_zero(k, ell), "k={k} l={ell}");
        }
    }

    #[test]
    fn cayley_row_reproduced() {
        let t = ExcessTable::build(50, 0).unwrap();
        for k in 1..=50usize {
            let want = if k <= 2 {
                big(1)
            } else {
                BigUint::from(k).pow(k as u32 - 2)
            };
            assert_eq!(*t.count(k, -1), want);
        }
    }

    #[test]
    fn brute_force_spot_values() {
        assert_eq!(brute_force_count(3, 2).unwrap(), big(3));
        assert_eq!(brute_force_count(5, 5).unwrap(), big(222));
        assert_eq!(brute_force_count(4, 7).unwrap(), big(0));
        assert!(brute_force_count(8, 3).is_err());
        assert!(brute_force_count(0, 0).is_err());
    }

    #[test]
    fn brute_force_row_sums_are_connected_graph_counts() {
        // connected labelled graphs on k vertices
        let pinned = [1u64, 1, 4, 38, 728, 26704, 1866256];
        for (k, want) in (1..=7).zip(pinned) {
            let s: u64 = brute_force_row(k).unwrap().iter().sum();
            assert_eq!(s, want, "k={k}");
        }
    }

    #[test]
    fn recurrence_matches_brute_force_up_to_six() {
        let t = ExcessTable::build(6, 9).unwrap();
        for k in 1..=6usize {
            let row = brute_force_row(k).unwrap();
            for (m, &want) in row.iter().enumerate() {
                let ell = m as i64 - k as i64;
                if ell < -1 {
                    assert_eq!(want, 0);
                    continue;
                }
                assert_eq!(*t.count(k, ell), big(want), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn bridge_counts_small() {
        let t = ExcessTable::build(12, 3).unwrap();
        assert_eq!(bridge_count_exact(&t, 5, 0).unwrap(), big(0));
        assert_eq!(bridge_count_exact(&t, 6, 0).unwrap(), big(90));
        assert_eq!(
            bridge_count_general(&t, 6, 0, 0, Restriction::BothSides).unwrap(),
            big(90)
        );
        assert!(bridge_count_general(&t, 6, 2, 2, Restriction::BothSides).is_err());
        assert!(bridge_count_exact(&t, 13, 0).is_err());
    }

    #[test]
    fn bridge_count_matches_pair_enumeration_at_seven() {
        let t = ExcessTable::build(7, 2).unwrap();
        for ell in 0..=1i64 {
            let m = (7 + ell + 1) as usize;
            let want = brute_force_bridge_pairs(7, m, 0).unwrap();
            assert_eq!(bridge_count_exact(&t, 7, ell).unwrap(), big(want), "l={ell}");
        }
    }

    #[test]
    fn restricted_count_single_surviving_term() {
        let t = ExcessTable::build(10, 2).unwrap();
        let got = bridge_count_general(&t, 10, 2, 1, Restriction::BothSides).unwrap();
        // only p = 1: 1/2 Σ_t C(10,t) t(10-t) c(t,t+1) c(10-t,10-t+1)
        let binom = binomial_row(10);
        let mut direct = BigUint::zero();
        for tt in 1..10usize {
            direct += &binom[tt]
                * BigUint::from(tt * (10 - tt))
                * t.count(tt, 1)
                * t.count(10 - tt, 1);
        }
        assert_eq!(got, &direct / 2u32);
        // unrestricted minus the p ∈ {0, 2} terms
        let all = bridge_count_exact(&t, 10, 2).unwrap();
        let p0 = bridge_term(&t, &binom, 10, 2, 0);
        let p2 = bridge_term(&t, &binom, 10, 2, 2);
        assert_eq!(got, all - (p0 + p2) / 2u32);
    }

    #[test]
    fn bridge_table_agrees_with_direct() {
        let t = ExcessTable::build(14, 4).unwrap();
        let bt = BridgeTable::build(&t);
        for k in 1..=14usize {
            for ell in 0..=4 {
                assert_eq!(bt.cprime(k, ell).unwrap(), bridge_count_exact(&t, k, ell).unwrap());
                for r in 0..=ell / 2 {
                    assert_eq!(
                        bt.cr(k, ell, r).unwrap(),
                        bridge_count_general(&t, k, ell, r, Restriction::BothSides).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn bridge_count_bounded_by_edge_markings() {
        let t = ExcessTable::build(20, 5).unwrap();
        for k in 1..=20usize {
            for ell in 0..=4i64 {
                let cp = bridge_count_exact(&t, k, ell).unwrap();
                let bound = t.count(k, ell + 1) * BigUint::from((k as i64 + ell + 1) as u64);
                assert!(cp <= bound, "k={k} l={ell}");
            }
        }
    }

    #[test]
    fn one_sided_restriction_at_zero_doubles() {
        let t = ExcessTable::build(12, 3).unwrap();
        let two = bridge_count_general(&t, 12, 3, 0, Restriction::BothSides).unwrap();
        let one = bridge_count_general(&t, 12, 3, 0, Restriction::OneSide).unwrap();
        assert_eq!(one, two * 2u32);
    }

    #[test]
    fn convolution_symmetry() {
        // Σ_{t=1}^{k-1} equals twice the sum over t < k/2 plus the middle term
        let t = ExcessTable::build(16, 3).unwrap();
        for k in 2..=16usize {
            let binom = binomial_row(k);
            for ell in 0..=2i64 {
                let term = |tt: usize| -> BigUint {
                    (-1..=ell + 1)
                        .filter(|p| ell - p >= -1 && ell - p <= 3)
                        .map(|p| t.count(tt, p) * t.count(k - tt, ell - p))
                        .fold(BigUint::zero(), |a, b| a + b)
                        * &binom[tt]
                        * BigUint::from(tt * (k - tt))
                };
                let full: BigUint = (1..k).map(term).fold(BigUint::zero(), |a, b| a + b);
                let mut half: BigUint = (1..k).filter(|&tt| 2 * tt < k).map(term).fold(BigUint::zero(), |a, b| a + b) * 2u32;
                if k % 2 == 0 {
                    half += term(k / 2);
                }
                assert_eq!(full, half);
            }
        }
    }
}
