//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] and [`BigRational`]; there is no
//! floating point anywhere. The Smith normal form drives the finitely
//! generated abelian group computations (character groups, Picard groups of
//! open orbits), and the rational solvers back the divisor arithmetic used by
//! the cone and model code.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix shape mismatch: expected {expected} entries, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has infinitely many solutions")]
    UnderDetermined,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LatticeError> {
        if entries.len() != rows * cols {
            return Err(LatticeError::ShapeMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows of anything convertible into [`BigInt`].
    ///
    /// An empty slice gives a `0 x 0` matrix; use [`IntegerMatrix::zeros`] for
    /// matrices with zero rows but a fixed column count.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self, LatticeError>
    where
        T: Clone + Into<BigInt>,
    {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LatticeError::ShapeMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vector(&self, x: &RationalVector) -> Result<RationalVector, LatticeError> {
        if x.len() != self.cols {
            return Err(LatticeError::DimensionMismatch(format!(
                "matrix has {} columns, vector has {} coordinates",
                self.cols,
                x.len()
            )));
        }
        let out = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x.iter())
                    .fold(BigRational::zero(), |acc, (a, b)| {
                        acc + BigRational::from_integer(a.clone()) * b
                    })
            })
            .collect();
        Ok(RationalVector(out))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = factor * self.get(source, c);
            self.entries[target * self.cols + c] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = factor * self.get(r, source);
            self.entries[r * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A vector of exact rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![BigRational::zero(); len])
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(values: &[T]) -> Self {
        Self(
            values
                .iter()
                .cloned()
                .map(|v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    /// Builds a vector from `(numerator, denominator)` pairs.
    pub fn from_fractions(values: &[(i64, i64)]) -> Self {
        Self(
            values
                .iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Canonical `p/q` rendering of every coordinate.
    pub fn render(&self) -> Vec<String> {
        self.0.iter().map(render_rational).collect()
    }
}

impl FromIterator<BigRational> for RationalVector {
    fn from_iter<I: IntoIterator<Item = BigRational>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render().join(", "))
    }
}

/// Lowest terms, `p/q` without whitespace, integers without `/1`.
pub fn render_rational(x: &BigRational) -> String {
    // `Ratio` keeps itself reduced with a positive denominator.
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the `p/q` rendering back into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn integer(p: i64) -> BigRational {
    BigRational::from_integer(p.into())
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with
/// `d1 | d2 | ... | dk` and every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupDescriptor {
    pub free_rank: usize,
    #[serde(with = "bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupDescriptor {
    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Self {
        Self {
            free_rank,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Checks `di >= 2` and the divisibility chain.
    pub fn is_normalized(&self) -> bool {
        let two = BigInt::from(2);
        self.torsion.iter().all(|d| *d >= two)
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `U * M * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `D`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivoting takes the nonzero entry of smallest absolute value in the active
/// submatrix, ties broken by lowest `(row, col)`, so `U` and `V` are
/// reproducible.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = smallest_pivot(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Row and column are clear; the pivot must divide the rest.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(d.get(i, j) % &pivot).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

fn smallest_pivot(d: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                best = Some((a, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// `Z^g / column-span(relations)` where `g = relations.rows()`.
pub fn cokernel(relations: &IntegerMatrix) -> AbelianGroupDescriptor {
    let snf = smith_normal_form(relations);
    let factors = snf.invariant_factors();
    let free_rank = relations.rows() - factors.len();
    let torsion = factors.into_iter().filter(|x| !x.is_one()).collect();
    AbelianGroupDescriptor { free_rank, torsion }
}

/// Solves `A x = b` exactly.
///
/// Returns `Ok(None)` for an inconsistent system and
/// `Err(UnderDetermined)` when the solution set is positive-dimensional.
pub fn solve_rational(
    a: &IntegerMatrix,
    b: &RationalVector,
) -> Result<Option<RationalVector>, LatticeError> {
    if a.rows() != b.len() {
        return Err(LatticeError::DimensionMismatch(format!(
            "{} equations but right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let rows: Vec<Vec<BigRational>> = (0..a.rows())
        .map(|r| {
            a.row(r)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .chain(std::iter::once(b.0[r].clone()))
                .collect()
        })
        .collect();
    let n = a.cols();
    let (reduced, pivots) = row_echelon(rows, n + 1);
    if pivots.contains(&n) {
        return Ok(None);
    }
    if pivots.len() < n {
        return Err(LatticeError::UnderDetermined);
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = reduced[r][n].clone();
    }
    Ok(Some(RationalVector(x)))
}

/// Reduced row echelon form; returns the reduced rows and the pivot columns.
pub fn row_echelon(
    mut rows: Vec<Vec<BigRational>>,
    ncols: usize,
) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (rows, pivots)
}

pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    row_echelon(rows.to_vec(), ncols).1.len()
}

/// Basis of `{x : rows * x = 0}` over the rationals.
pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let (reduced, pivots) = row_echelon(rows.to_vec(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); ncols];
            x[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -reduced[r][f].clone();
            }
            x
        })
        .collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to the zero vector.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let denom_lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    primitive(&ints)
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn to_rationals(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rational(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
        .fold(BigRational::zero(), |acc, t| acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    fn check_snf(a: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        assert!(f.iter().all(|x| x.is_positive()));
        assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        s
    }

    #[test]
    fn identity_is_its_own_normal_form() {
        let s = check_snf(&IntegerMatrix::identity(2));
        assert_eq!(s.d, IntegerMatrix::identity(2));
        assert_eq!(s.u, IntegerMatrix::identity(2));
        assert_eq!(s.v, IntegerMatrix::identity(2));
    }

    #[test]
    fn even_symmetric_relation_has_two_torsion() {
        let rel = m(&[vec![2], vec![-2]]);
        let s = check_snf(&rel);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2)]);
        assert_eq!(cokernel(&rel), AbelianGroupDescriptor::new(1, vec![2]));
    }

    #[test]
    fn cokernel_cases() {
        assert_eq!(
            cokernel(&m(&[vec![2], vec![-3]])),
            AbelianGroupDescriptor::free(1)
        );
        assert_eq!(
            cokernel(&m(&[vec![4]])),
            AbelianGroupDescriptor::new(0, vec![4])
        );
        assert_eq!(
            cokernel(&IntegerMatrix::zeros(2, 0)),
            AbelianGroupDescriptor::free(2)
        );
    }

    #[test]
    fn snf_needs_divisibility_fixup() {
        // diag(2, 3) is diagonal but not in normal form: the result is diag(1, 6).
        let s = check_snf(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
    }

    #[test]
    fn snf_of_zero_and_rectangular() {
        let s = check_snf(&IntegerMatrix::zeros(2, 3));
        assert!(s.invariant_factors().is_empty());
        let s = check_snf(&m(&[vec![6, 4, 2], vec![9, 6, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1)]);
    }

    #[test]
    fn solve_identity_system() {
        let b = RationalVector::from_fractions(&[(1, 2), (-3, 1), (5, 7)]);
        let x = solve_rational(&IntegerMatrix::identity(3), &b).unwrap();
        assert_eq!(x, Some(b));
    }

    #[test]
    fn solve_inconsistent_and_underdetermined() {
        let a = m(&[vec![1, 0], vec![0, 0]]);
        let b = RationalVector::from_integers(&[1, 1]);
        assert_eq!(solve_rational(&a, &b), Ok(None));
        let a = m(&[vec![1, 1]]);
        let b = RationalVector::from_integers(&[1]);
        assert_eq!(solve_rational(&a, &b), Err(LatticeError::UnderDetermined));
        let a = m(&[vec![1, 1]]);
        let b = RationalVector::from_integers(&[1, 2]);
        assert!(matches!(
            solve_rational(&a, &b),
            Err(LatticeError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(render_rational(&rational(6, 4)), "3/2");
        assert_eq!(render_rational(&rational(-4, 2)), "-2");
        assert_eq!(render_rational(&rational(1, -3)), "-1/3");
        assert_eq!(parse_rational("-1/3"), Some(rational(-1, 3)));
        assert_eq!(parse_rational("7"), Some(integer(7)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![rational(3, 2), rational(-1, 1), rational(-1, 2)];
        let p = primitive_integer(&v);
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(-1)]);
        assert_eq!(
            primitive(&[BigInt::from(0), BigInt::from(0)]),
            vec![BigInt::from(0), BigInt::from(0)]
        );
    }

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![vec![integer(1), integer(1), integer(1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(v.iter().fold(BigRational::zero(), |a, x| a + x).is_zero());
        }
    }

    #[test]
    fn group_display() {
        assert_eq!(
            AbelianGroupDescriptor::new(1, vec![2]).to_string(),
            "Z/2 + Z"
        );
        assert_eq!(AbelianGroupDescriptor::free(2).to_string(), "Z^2");
        assert_eq!(AbelianGroupDescriptor::free(0).to_string(), "0");
    }
}
