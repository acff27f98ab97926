//! Secant varieties of Segre and Veronese varieties.
//!
//! Closed-form dimension and degree formulas, plus exhaustive finite-field
//! checks of the rank stratification of matrix spaces: rank censuses, the
//! rank/minor lemma and the splitting of the top-left minor divisor.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Enumeration budget: at most this many matrices per exhaustive run.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;

/// Largest matrix handled by the enumerators (entries, not rows).
const MAX_ENTRIES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetvarError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("enumeration of {count} matrices exceeds the budget of {ENUMERATION_BUDGET}")]
    BudgetExceeded { count: String },
    #[error("{0} is not a prime field size")]
    NonPrimeField(u64),
}

fn invalid(msg: impl Into<String>) -> DetvarError {
    DetvarError::InvalidParameters(msg.into())
}

/// Outcome of an exhaustive or symbolic verification run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: BTreeMap<String, i64>,
    pub passed: bool,
    /// A failing witness; matrices are row lists, other checks use index lists.
    pub counterexample: Option<Vec<Vec<i64>>>,
    pub counts: BTreeMap<String, u64>,
    pub details: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            ..Self::default()
        }
    }

    pub fn param(mut self, key: &str, value: i64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn fail(&mut self, witness: Vec<Vec<i64>>) {
        self.passed = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(witness);
        }
    }

    /// `passed = false` must come with a witness.
    pub fn is_well_formed(&self) -> bool {
        self.passed || self.counterexample.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variety {
    Segre { n: u32, m: u32 },
    Veronese { n: u32 },
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Segre { n, m } => write!(f, "Segre({n},{m})"),
            Variety::Veronese { n } => write!(f, "Veronese({n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecantInvariants {
    pub variety: Variety,
    pub h: u32,
    pub dim: i64,
    pub deg: BigInt,
    pub ambient_dim: i64,
    /// The secant variety is the whole ambient projective space.
    pub fills_ambient: bool,
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Dimension of `sec_h` of the Segre embedding of `P^n x P^m`; `-1` for `h = 0`.
pub fn segre_secant_dim(n: i64, m: i64, h: i64) -> i64 {
    h * (m + n + 2 - h) - 1
}

/// Dimension of `sec_h` of the quadratic Veronese of `P^n`; `-1` for `h = 0`.
pub fn veronese_secant_dim(n: i64, h: i64) -> i64 {
    (2 * n * h - h * h + 3 * h - 2) / 2
}

pub fn segre_ambient_dim(n: i64, m: i64) -> i64 {
    n * m + n + m
}

pub fn veronese_ambient_dim(n: i64) -> i64 {
    (n + 2) * (n + 1) / 2 - 1
}

fn integral(x: BigRational, what: &str) -> BigInt {
    assert!(x.is_integer(), "{what} product is not integral: {x}");
    x.to_integer()
}

pub fn segre_secant_invariants(n: u32, m: u32, h: u32) -> Result<SecantInvariants, DetvarError> {
    if n > m {
        return Err(invalid(format!("requires n <= m, got n = {n}, m = {m}")));
    }
    if h < 1 || h > n + 1 {
        return Err(invalid(format!(
            "requires 1 <= h <= n + 1, got h = {h}, n = {n}"
        )));
    }
    let (n, m, h) = (i64::from(n), i64::from(m), i64::from(h));
    let mut deg = BigRational::one();
    for i in 0..=(n - h) {
        deg *= BigRational::new(
            binomial(m + 1 + i, n - i),
            binomial(m + 1 - h + i, n - h - i),
        );
    }
    let dim = segre_secant_dim(n, m, h);
    let ambient_dim = segre_ambient_dim(n, m);
    Ok(SecantInvariants {
        variety: Variety::Segre {
            n: n as u32,
            m: m as u32,
        },
        h: h as u32,
        dim,
        deg: integral(deg, "Segre degree"),
        ambient_dim,
        fills_ambient: dim == ambient_dim,
    })
}

pub fn veronese_secant_invariants(n: u32, h: u32) -> Result<SecantInvariants, DetvarError> {
    if h < 1 || h > n + 1 {
        return Err(invalid(format!(
            "requires 1 <= h <= n + 1, got h = {h}, n = {n}"
        )));
    }
    let (n, h) = (i64::from(n), i64::from(h));
    let mut deg = BigRational::one();
    for i in 0..=(n - h) {
        deg *= BigRational::new(binomial(n + 1 + i, n + 1 - h - i), binomial(2 * i + 1, i));
    }
    let dim = veronese_secant_dim(n, h);
    let ambient_dim = veronese_ambient_dim(n);
    Ok(SecantInvariants {
        variety: Variety::Veronese { n: n as u32 },
        h: h as u32,
        dim,
        deg: integral(deg, "Veronese degree"),
        ambient_dim,
        fills_ambient: dim == ambient_dim,
    })
}

/// Number of `a x b` matrices of rank exactly `r` over a field with `q` elements.
pub fn rank_count(a: u32, b: u32, q: u64, r: u32) -> BigInt {
    if r > a.min(b) {
        return BigInt::zero();
    }
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        let qi = q.pow(i);
        num *= (q.pow(a) - &qi) * (q.pow(b) - &qi);
        den *= q.pow(r) - &qi;
    }
    num / den
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCensus {
    pub rows: u32,
    pub cols: u32,
    pub q: u64,
    pub symmetric: bool,
    pub counts: BTreeMap<u32, u64>,
}

impl RankCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Compares every rank count with the closed form (non-symmetric only).
    pub fn matches_formula(&self) -> Option<bool> {
        if self.symmetric {
            return None;
        }
        Some((0..=self.rows.min(self.cols)).all(|r| {
            BigInt::from(self.counts.get(&r).copied().unwrap_or(0))
                == rank_count(self.rows, self.cols, self.q, r)
        }))
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..q)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Shape and field of an exhaustive enumeration.
#[derive(Clone, Copy, Debug)]
struct Space {
    rows: usize,
    cols: usize,
    q: u8,
    symmetric: bool,
}

/// A small dense matrix over `F_q`, row-major.
#[derive(Clone, Copy)]
struct Mat {
    rows: usize,
    cols: usize,
    e: [u8; MAX_ENTRIES],
}

impl Mat {
    fn get(&self, r: usize, c: usize) -> u8 {
        self.e[r * self.cols + c]
    }

    fn to_rows(self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| i64::from(self.get(r, c))).collect())
            .collect()
    }

    fn transpose(&self) -> Mat {
        let mut t = Mat {
            rows: self.cols,
            cols: self.rows,
            e: [0; MAX_ENTRIES],
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.e[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// The submatrix formed by the first `k` rows.
    fn top_rows(&self, k: usize) -> Mat {
        let mut s = Mat {
            rows: k,
            cols: self.cols,
            e: [0; MAX_ENTRIES],
        };
        s.e[..k * self.cols].copy_from_slice(&self.e[..k * self.cols]);
        s
    }

    fn top_left(&self, k: usize) -> Mat {
        let mut s = Mat {
            rows: k,
            cols: k,
            e: [0; MAX_ENTRIES],
        };
        for r in 0..k {
            for c in 0..k {
                s.e[r * k + c] = self.get(r, c);
            }
        }
        s
    }

    fn rank(&self, q: u8) -> usize {
        if q == 2 {
            return self.rank_gf2();
        }
        let p = u32::from(q);
        let mut a = self.e;
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(rank * cols + j, piv * cols + j);
            }
            let inv = mod_inverse(u32::from(a[rank * cols + c]), p);
            for r in rank + 1..rows {
                let f = u32::from(a[r * cols + c]) * inv % p;
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = f * u32::from(a[rank * cols + j]) % p;
                    a[r * cols + j] = ((u32::from(a[r * cols + j]) + p - sub) % p) as u8;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    fn rank_gf2(&self) -> usize {
        let mut rows: Vec<u32> = (0..self.rows)
            .map(|r| (0..self.cols).fold(0u32, |acc, c| acc | (u32::from(self.get(r, c) & 1) << c)))
            .collect();
        let mut rank = 0;
        for bit in 0..self.cols {
            let mask = 1u32 << bit;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for row in rows.iter_mut().skip(rank + 1) {
                if *row & mask != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }
}

fn mod_inverse(x: u32, p: u32) -> u32 {
    (1..p)
        .find(|y| x * y % p == 1)
        .expect("nonzero element of a prime field")
}

impl Space {
    fn new(rows: u32, cols: u32, q: u64, symmetric: bool) -> Result<Self, DetvarError> {
        if rows == 0 || cols == 0 {
            return Err(invalid("matrix dimensions must be positive"));
        }
        if symmetric && rows != cols {
            return Err(invalid(format!(
                "symmetric matrices must be square, got {rows}x{cols}"
            )));
        }
        if !is_prime(q) {
            return Err(DetvarError::NonPrimeField(q));
        }
        if q > u64::from(u8::MAX) {
            return Err(invalid(format!(
                "field size {q} is too large for enumeration"
            )));
        }
        let space = Space {
            rows: rows as usize,
            cols: cols as usize,
            q: q as u8,
            symmetric,
        };
        let count = BigInt::from(q).pow(space.free_entries() as u32);
        if space.rows * space.cols > MAX_ENTRIES || count > BigInt::from(ENUMERATION_BUDGET) {
            return Err(DetvarError::BudgetExceeded {
                count: count.to_string(),
            });
        }
        Ok(space)
    }

    fn free_entries(&self) -> usize {
        if self.symmetric {
            self.rows * (self.rows + 1) / 2
        } else {
            self.rows * self.cols
        }
    }

    fn total(&self) -> u64 {
        u64::from(self.q).pow(self.free_entries() as u32)
    }

    /// Entries first-row-first, so the first row occupies the low digits.
    fn first_row_entries(&self) -> usize {
        self.cols
    }

    /// Decodes an enumeration index: base-q digits, little-endian, row-major.
    fn decode(&self, mut idx: u64) -> Mat {
        let q = u64::from(self.q);
        let mut m = Mat {
            rows: self.rows,
            cols: self.cols,
            e: [0; MAX_ENTRIES],
        };
        for r in 0..self.rows {
            let start = if self.symmetric { r } else { 0 };
            for c in start..self.cols {
                let d = (idx % q) as u8;
                idx /= q;
                m.e[r * self.cols + c] = d;
                if self.symmetric {
                    m.e[c * self.cols + r] = d;
                }
            }
        }
        m
    }

    /// Runs `visit` on every matrix, partitioned by the first row's value.
    ///
    /// Each partition folds into an accumulator; partitions are merged with
    /// `merge`, which must be associative.
    fn fold<A, F, M>(&self, init: A, visit: F, merge: M) -> A
    where
        A: Clone + Send + Sync,
        F: Fn(&mut A, u64, &Mat) + Send + Sync,
        M: Fn(A, A) -> A + Send + Sync,
    {
        let q = u64::from(self.q);
        let head = q.pow(self.first_row_entries() as u32);
        let tail = self.total() / head;
        (0..head)
            .into_par_iter()
            .map(|first| {
                let mut acc = init.clone();
                for rest in 0..tail {
                    let idx = first + head * rest;
                    let m = self.decode(idx);
                    visit(&mut acc, idx, &m);
                }
                acc
            })
            .reduce(|| init.clone(), &merge)
    }
}

/// Exhaustive rank stratification of all `a x b` (or symmetric) matrices over `F_q`.
pub fn rank_census(a: u32, b: u32, q: u64, symmetric: bool) -> Result<RankCensus, DetvarError> {
    let space = Space::new(a, b, q, symmetric)?;
    let buckets = a.min(b) as usize + 1;
    let counts = space.fold(
        vec![0u64; buckets],
        |acc, _, m| acc[m.rank(space.q)] += 1,
        |mut x, y| {
            for (a, b) in x.iter_mut().zip(y) {
                *a += b;
            }
            x
        },
    );
    Ok(RankCensus {
        rows: a,
        cols: b,
        q,
        symmetric,
        counts: counts
            .into_iter()
            .enumerate()
            .map(|(r, c)| (r as u32, c))
            .collect(),
    })
}

/// Smallest failing index seen, plus named tallies.
#[derive(Clone, Default)]
struct Tally {
    counts: BTreeMap<&'static str, u64>,
    witness: Option<u64>,
}

impl Tally {
    fn bump(&mut self, key: &'static str) {
        *self.counts.entry(key).or_default() += 1;
    }

    fn witness(&mut self, idx: u64) {
        self.witness = Some(self.witness.map_or(idx, |w| w.min(idx)));
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        if let Some(w) = other.witness {
            self.witness(w);
        }
        self
    }
}

fn check_k(a: u32, b: u32, k: u32) -> Result<(), DetvarError> {
    if k == 0 || k >= a.min(b) {
        return Err(invalid(format!(
            "requires 1 <= k < min(rows, cols), got k = {k} for {a}x{b}"
        )));
    }
    Ok(())
}

fn finish(mut report: VerificationReport, space: &Space, tally: Tally) -> VerificationReport {
    for (k, v) in tally.counts {
        report.counts.insert(k.to_string(), v);
    }
    report
        .counts
        .insert("enumerated".to_string(), space.total());
    if let Some(idx) = tally.witness {
        report.fail(space.decode(idx).to_rows());
    }
    report
}

/// Checks: a matrix of rank `k` whose top-left `k x k` determinant vanishes
/// has linearly dependent first `k` rows or first `k` columns.
///
/// Matrices of rank below `k` are checked too; for them both conditions hold.
pub fn verify_rank_minor_lemma(
    a: u32,
    b: u32,
    k: u32,
    q: u64,
) -> Result<VerificationReport, DetvarError> {
    check_k(a, b, k)?;
    let space = Space::new(a, b, q, false)?;
    let k = k as usize;
    let p = space.q;
    let tally = space.fold(
        Tally::default(),
        |t, idx, m| {
            let r = m.rank(p);
            if r > k || m.top_left(k).rank(p) == k {
                return;
            }
            let rows_dep = m.top_rows(k).rank(p) < k;
            let cols_dep = m.transpose().top_rows(k).rank(p) < k;
            if r == k {
                t.bump("rank_k_vanishing_minor");
            } else {
                t.bump("rank_below_k_vanishing_minor");
                if rows_dep && cols_dep {
                    t.bump("rank_below_k_both_dependent");
                }
            }
            if !(rows_dep || cols_dep) {
                t.witness(idx);
            }
        },
        Tally::merge,
    );
    let report = VerificationReport::new("rank-lemma")
        .param("rows", i64::from(a))
        .param("cols", i64::from(b))
        .param("k", k as i64)
        .param("q", q as i64);
    Ok(finish(report, &space, tally))
}

/// On the rank `<= k` locus, checks that `{det of top-left k x k = 0}` is the
/// union of `H1` (first `k` rows dependent) and `H2` (first `k` columns
/// dependent), and reports the point counts. With `symmetric`, the check runs
/// over symmetric matrices and additionally requires `H1 = H2`.
pub fn verify_component_split(
    a: u32,
    b: u32,
    k: u32,
    q: u64,
    symmetric: bool,
) -> Result<VerificationReport, DetvarError> {
    check_k(a, b, k)?;
    let space = Space::new(a, b, q, symmetric)?;
    let k = k as usize;
    let p = space.q;
    let tally = space.fold(
        Tally::default(),
        |t, idx, m| {
            if m.rank(p) > k {
                return;
            }
            t.bump("rank_at_most_k");
            let det_zero = m.top_left(k).rank(p) < k;
            let h1 = m.top_rows(k).rank(p) < k;
            let h2 = m.transpose().top_rows(k).rank(p) < k;
            if det_zero {
                t.bump("det_locus");
            }
            if h1 {
                t.bump("h1");
            }
            if h2 {
                t.bump("h2");
            }
            if h1 && h2 {
                t.bump("h1_and_h2");
            }
            if det_zero != (h1 || h2) || (symmetric && h1 != h2) {
                t.witness(idx);
            }
        },
        Tally::merge,
    );
    let mut report = VerificationReport::new("component-split")
        .param("rows", i64::from(a))
        .param("cols", i64::from(b))
        .param("k", k as i64)
        .param("q", q as i64)
        .param("symmetric", i64::from(symmetric));
    for key in ["rank_at_most_k", "det_locus", "h1", "h2", "h1_and_h2"] {
        report.counts.insert(key.to_string(), 0);
    }
    Ok(finish(report, &space, tally))
}

/// Census as a verification: totals and, for general matrices, the closed form.
pub fn verify_census(
    a: u32,
    b: u32,
    q: u64,
    symmetric: bool,
) -> Result<VerificationReport, DetvarError> {
    let census = rank_census(a, b, q, symmetric)?;
    let space = Space::new(a, b, q, symmetric)?;
    let mut report = VerificationReport::new("census")
        .param("rows", i64::from(a))
        .param("cols", i64::from(b))
        .param("q", q as i64)
        .param("symmetric", i64::from(symmetric));
    for (r, c) in &census.counts {
        report.counts.insert(format!("rank_{r}"), *c);
    }
    report
        .counts
        .insert("enumerated".to_string(), census.total());
    let total_ok = census.total() == space.total();
    if !total_ok || census.matches_formula() == Some(false) {
        let bad: Vec<i64> = census
            .counts
            .iter()
            .filter(|(r, c)| BigInt::from(**c) != rank_count(a, b, q, **r))
            .map(|(r, _)| i64::from(*r))
            .collect();
        report.fail(vec![bad]);
    }
    if let Some(ok) = census.matches_formula() {
        report.details.insert(
            "closed_form".to_string(),
            if ok { "match" } else { "mismatch" }.to_string(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secant_examples() {
        assert_eq!(segre_secant_invariants(3, 3, 2).unwrap().dim, 11);
        assert_eq!(
            segre_secant_invariants(2, 2, 1).unwrap().deg,
            BigInt::from(6)
        );
        let s = segre_secant_invariants(1, 1, 1).unwrap();
        assert_eq!((s.dim, s.deg.clone()), (2, BigInt::from(2)));
        let v = veronese_secant_invariants(2, 1).unwrap();
        assert_eq!((v.dim, v.deg), (2, BigInt::from(4)));
        let v = veronese_secant_invariants(3, 3).unwrap();
        assert_eq!((v.dim, v.deg), (8, BigInt::from(4)));
        assert_eq!(veronese_secant_invariants(7, 1).unwrap().dim, 7);
    }

    #[test]
    fn full_rank_secant_fills() {
        let s = segre_secant_invariants(2, 4, 3).unwrap();
        assert!(s.fills_ambient);
        assert_eq!(s.deg, BigInt::from(1));
        assert!(veronese_secant_invariants(3, 4).unwrap().fills_ambient);
    }

    #[test]
    fn parameter_checks() {
        assert!(segre_secant_invariants(3, 2, 1).is_err());
        assert!(segre_secant_invariants(2, 3, 0).is_err());
        assert!(veronese_secant_invariants(2, 4).is_err());
    }

    #[test]
    fn small_censuses() {
        let c = rank_census(2, 2, 2, false).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(0, 1), (1, 9), (2, 6)]));
        let c = rank_census(1, 1, 3, false).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(
            rank_census(2, 2, 4, false),
            Err(DetvarError::NonPrimeField(4))
        );
        assert!(matches!(
            rank_census(5, 5, 2, false),
            Err(DetvarError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn symmetric_census_total() {
        let c = rank_census(2, 2, 3, true).unwrap();
        assert_eq!(c.total(), 27);
        assert_eq!(c.counts[&0], 1);
    }

    #[test]
    fn split_counts_by_hand() {
        let r = verify_component_split(2, 2, 1, 3, false).unwrap();
        assert!(r.passed);
        assert_eq!(r.counts["h1"], 9);
        assert_eq!(r.counts["h2"], 9);
        assert_eq!(r.counts["h1_and_h2"], 3);
        assert_eq!(r.counts["det_locus"], 15);
        assert_eq!(r.counts["rank_at_most_k"], 33);
    }

    #[test]
    fn lemma_small_case_with_low_rank() {
        let r = verify_rank_minor_lemma(2, 2, 1, 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.counts["rank_below_k_vanishing_minor"], 1);
        assert_eq!(r.counts["rank_below_k_both_dependent"], 1);
        assert!(verify_rank_minor_lemma(2, 2, 2, 2).is_err());
    }

    #[test]
    fn decode_is_little_endian_row_major() {
        let s = Space::new(2, 2, 3, false).unwrap();
        assert_eq!(s.decode(1).to_rows(), vec![vec![1, 0], vec![0, 0]]);
        assert_eq!(s.decode(3).to_rows(), vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(s.decode(27).to_rows(), vec![vec![0, 0], vec![0, 1]]);
        let s = Space::new(2, 2, 2, true).unwrap();
        assert_eq!(s.decode(2).to_rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn failing_report_carries_witness() {
        let mut r = VerificationReport::new("x");
        assert!(r.is_well_formed());
        r.fail(vec![vec![1]]);
        r.fail(vec![vec![2]]);
        assert_eq!(r.counterexample, Some(vec![vec![1]]));
        assert!(!r.passed && r.is_well_formed());
    }
}
