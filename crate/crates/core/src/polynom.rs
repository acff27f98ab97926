//! Sparse multivariate polynomials with rational coefficients.
//!
//! Used for minors of generic and generic symmetric matrices, coordinate
//! shifts, and the leading-form computation behind the tangent cone check.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::detvar::{
    segre_ambient_dim, segre_secant_dim, veronese_ambient_dim, veronese_secant_dim,
    VerificationReport,
};
use crate::lattice::render_rational;

/// Largest minor expanded symbolically.
pub const MAX_MINOR: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("index {index} out of range for a matrix with {bound} {axis}")]
    IndexOutOfRange {
        index: usize,
        bound: usize,
        axis: &'static str,
    },
    #[error("minor of size {0} exceeds the limit of {MAX_MINOR}")]
    TooLarge(usize),
    #[error("row set and column set have different sizes")]
    SizeMismatch,
    #[error("repeated index {0} in a minor")]
    RepeatedIndex(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A polynomial over named variables; exponent vectors index into `variables`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    variables: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl SparsePoly {
    pub fn zero(variables: Vec<String>) -> Self {
        Self {
            variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: Vec<String>, c: BigRational) -> Self {
        let n = variables.len();
        let mut p = Self::zero(variables);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(variables: Vec<String>) -> Self {
        Self::constant(variables, BigRational::one())
    }

    /// The polynomial consisting of the single variable at `index`.
    pub fn var(variables: Vec<String>, index: usize) -> Self {
        let mut e = vec![0; variables.len()];
        e[index] = 1;
        let mut p = Self::zero(variables);
        p.terms.insert(e, BigRational::one());
        p
    }

    /// The variable called `name`, if it is one of `variables`.
    pub fn named(variables: &[String], name: &str) -> Option<Self> {
        let idx = variables.iter().position(|v| v == name)?;
        Some(Self::var(variables.to_vec(), idx))
    }

    pub fn from_terms(
        variables: Vec<String>,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(variables);
        for (e, c) in terms {
            assert_eq!(e.len(), p.variables.len(), "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn degree_of(e: &[u32]) -> u32 {
        e.iter().sum()
    }

    /// Highest total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| Self::degree_of(e)).max()
    }

    /// Lowest total degree; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| Self::degree_of(e)).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.min_degree()
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Self {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| Self::degree_of(e) == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest-degree homogeneous component (zero stays zero).
    pub fn leading_form(&self) -> Self {
        match self.min_degree() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.variables.clone());
        }
        Self {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.variables.clone()), |acc, _| &acc * self)
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.variables.len(), "evaluation point length");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| {
                    acc * num_traits::pow(x.clone(), k as usize)
                })
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `p(z + s)` where `s` gives a rational offset per variable name.
    pub fn shift(&self, shifts: &BTreeMap<String, BigRational>) -> Self {
        let vars = self.variables.clone();
        let linear: Vec<SparsePoly> = (0..vars.len())
            .map(|i| {
                let z = Self::var(vars.clone(), i);
                match shifts.get(&vars[i]) {
                    Some(s) => &z + &Self::constant(vars.clone(), s.clone()),
                    None => z,
                }
            })
            .collect();
        let mut out = Self::zero(vars.clone());
        for (e, c) in &self.terms {
            let mut term = Self::constant(vars.clone(), c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &linear[i].pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Equal up to a global sign.
    pub fn equals_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == -other
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.variables, other.variables,
            "polynomials over different variable lists"
        );
    }

    /// Graded lexicographic comparison (higher first when sorting descending).
    fn grlex(a: &[u32], b: &[u32]) -> Ordering {
        Self::degree_of(a)
            .cmp(&Self::degree_of(b))
            .then_with(|| a.cmp(b))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_compatible(rhs);
        let mut out = SparsePoly::zero(self.variables.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ordered = self
            .terms
            .iter()
            .sorted_by(|(a, _), (b, _)| Self::grlex(b, a).then_with(|| b.cmp(a)));
        for (i, (e, c)) in ordered.enumerate() {
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| match k {
                    1 => self.variables[v].clone(),
                    _ => format!("{}^{}", self.variables[v], k),
                })
                .collect();
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                _ => write!(f, " {sign} ")?,
            }
            if monomial.is_empty() {
                write!(f, "{}", render_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", render_rational(&abs), monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Variable name of entry `(i, j)`.
pub fn entry_name(i: usize, j: usize) -> String {
    format!("z{i},{j}")
}

/// Variables of the generic `(n+1) x (m+1)` matrix, row-major; the symmetric
/// version keeps only `i <= j`.
pub fn matrix_variables(n: usize, m: usize, symmetric: bool) -> Vec<String> {
    (0..=n)
        .flat_map(|i| {
            let start = if symmetric { i } else { 0 };
            (start..=m).map(move |j| entry_name(i, j))
        })
        .collect()
}

fn entry_index(vars: &[String], i: usize, j: usize, symmetric: bool) -> usize {
    let (i, j) = if symmetric && i > j { (j, i) } else { (i, j) };
    let name = entry_name(i, j);
    vars.iter()
        .position(|v| *v == name)
        .expect("entry variable")
}

fn validate_minor(
    n: usize,
    m: usize,
    rows: &[usize],
    cols: &[usize],
    symmetric: bool,
) -> Result<(), PolyError> {
    if rows.len() != cols.len() {
        return Err(PolyError::SizeMismatch);
    }
    if rows.len() > MAX_MINOR {
        return Err(PolyError::TooLarge(rows.len()));
    }
    if symmetric && n != m {
        return Err(PolyError::Precondition(format!(
            "symmetric matrices are square, got n = {n}, m = {m}"
        )));
    }
    for (set, bound, axis) in [(rows, n + 1, "rows"), (cols, m + 1, "columns")] {
        for (pos, &i) in set.iter().enumerate() {
            if i >= bound {
                return Err(PolyError::IndexOutOfRange {
                    index: i,
                    bound,
                    axis,
                });
            }
            if set[..pos].contains(&i) {
                return Err(PolyError::RepeatedIndex(i));
            }
        }
    }
    Ok(())
}

/// Determinant of the `rows x cols` submatrix of the generic (or generic
/// symmetric) `(n+1) x (m+1)` matrix, by Laplace expansion along the first row.
pub fn minor_det(
    n: usize,
    m: usize,
    rows: &[usize],
    cols: &[usize],
    symmetric: bool,
) -> Result<SparsePoly, PolyError> {
    validate_minor(n, m, rows, cols, symmetric)?;
    let vars = matrix_variables(n, m, symmetric);
    Ok(laplace(&vars, rows, cols, symmetric))
}

fn laplace(vars: &[String], rows: &[usize], cols: &[usize], symmetric: bool) -> SparsePoly {
    if rows.is_empty() {
        return SparsePoly::one(vars.to_vec());
    }
    let mut out = SparsePoly::zero(vars.to_vec());
    let r = rows[0];
    for (pos, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = laplace(vars, &rows[1..], &rest, symmetric);
        let entry = SparsePoly::var(vars.to_vec(), entry_index(vars, r, c, symmetric));
        let term = &entry * &sub;
        out = if pos % 2 == 0 {
            &out + &term
        } else {
            &out - &term
        };
    }
    out
}

/// Lowest-degree homogeneous part of `p(z + shift)`.
pub fn shift_and_leading_form(
    p: &SparsePoly,
    shifts: &BTreeMap<String, BigRational>,
) -> SparsePoly {
    p.shift(shifts).leading_form()
}

/// Tangent cone check at the rank-`k` point `diag(1, …, 1, 0, …)` of `sec_h`.
///
/// Every `(h+1)`-minor whose row and column sets contain `{0..k-1}` is shifted
/// by `z_ii -> z_ii + 1` for `i < k`; its leading form must be, up to sign, the
/// complementary `(h+1-k)`-minor on the remaining rows and columns. The
/// report also carries the predicted vertex dimension and checks that
/// `vertex + dim(base) + 1 = dim(sec_h)`.
pub fn verify_tangent_cone(
    n: usize,
    m: usize,
    h: usize,
    k: usize,
    symmetric: bool,
) -> Result<VerificationReport, PolyError> {
    if symmetric && n != m {
        return Err(PolyError::Precondition(format!(
            "symmetric check needs n = m, got n = {n}, m = {m}"
        )));
    }
    if !symmetric && n > m {
        return Err(PolyError::Precondition(format!(
            "requires n <= m, got n = {n}, m = {m}"
        )));
    }
    if k < 1 || k > h || h > n.min(m) + 1 {
        return Err(PolyError::Precondition(format!(
            "requires 1 <= k <= h <= min(n, m) + 1, got k = {k}, h = {h}"
        )));
    }
    if h + 1 > MAX_MINOR && h < n.min(m) + 1 {
        return Err(PolyError::TooLarge(h + 1));
    }

    let vars = matrix_variables(n, m, symmetric);
    let shifts: BTreeMap<String, BigRational> = (0..k)
        .map(|i| (entry_name(i, i), BigRational::one()))
        .collect();
    let fixed: Vec<usize> = (0..k).collect();

    let mut report = VerificationReport::new("tangent-cone")
        .param("n", n as i64)
        .param("m", m as i64)
        .param("h", h as i64)
        .param("k", k as i64)
        .param("symmetric", i64::from(symmetric));

    let size = h + 1;
    let mut checked = 0u64;
    let mut sign_flips = 0u64;
    if size <= n.min(m) + 1 {
        let row_extra = (k..=n).combinations(size - k);
        for extra_rows in row_extra {
            for extra_cols in (k..=m).combinations(size - k) {
                let rows: Vec<usize> = fixed.iter().chain(&extra_rows).copied().collect();
                let cols: Vec<usize> = fixed.iter().chain(&extra_cols).copied().collect();
                let p = laplace(&vars, &rows, &cols, symmetric);
                let lead = shift_and_leading_form(&p, &shifts);
                let expected = laplace(&vars, &extra_rows, &extra_cols, symmetric);
                checked += 1;
                let ok = lead.is_homogeneous()
                    && lead.min_degree() == Some((size - k) as u32)
                    && lead.equals_up_to_sign(&expected);
                if ok && lead != expected {
                    sign_flips += 1;
                }
                if !ok {
                    report.fail(vec![
                        rows.iter().map(|&x| x as i64).collect(),
                        cols.iter().map(|&x| x as i64).collect(),
                    ]);
                }
            }
        }
    }
    report.counts.insert("minors_checked".to_string(), checked);
    report.counts.insert("sign_flips".to_string(), sign_flips);

    let (ni, mi, hi, ki) = (n as i64, m as i64, h as i64, k as i64);
    let (vertex, base_dim, total, ambient, base_label) = if symmetric {
        (
            veronese_ambient_dim(ni) - (ni - ki + 1) * (ni - ki + 2) / 2,
            veronese_secant_dim(ni - ki, hi - ki),
            veronese_secant_dim(ni, hi),
            veronese_ambient_dim(ni),
            format!("sec_{}(V^{})", h - k, n - k),
        )
    } else {
        (
            segre_ambient_dim(ni, mi) - (mi + 1 - ki) * (ni + 1 - ki),
            segre_secant_dim(ni - ki, mi - ki, hi - ki),
            segre_secant_dim(ni, mi, hi),
            segre_ambient_dim(ni, mi),
            format!("sec_{}(S^{},{})", h - k, n - k, m - k),
        )
    };
    report
        .details
        .insert("vertex_dim".to_string(), vertex.to_string());
    report.details.insert("base".to_string(), base_label);
    report
        .details
        .insert("base_dim".to_string(), base_dim.to_string());
    report
        .details
        .insert("secant_dim".to_string(), total.to_string());
    report
        .details
        .insert("ambient_dim".to_string(), ambient.to_string());
    if vertex + base_dim + 1 != total {
        report.fail(vec![vec![vertex, base_dim, total]]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift00() -> BTreeMap<String, BigRational> {
        BTreeMap::from([(entry_name(0, 0), BigRational::one())])
    }

    #[test]
    fn one_by_one_minor() {
        let p = minor_det(2, 2, &[0], &[0], false).unwrap();
        assert_eq!(p.to_string(), "z0,0");
    }

    #[test]
    fn two_by_two_minors() {
        let p = minor_det(1, 1, &[0, 1], &[0, 1], false).unwrap();
        assert_eq!(p.to_string(), "z0,0*z1,1 - z0,1*z1,0");
        let s = minor_det(1, 1, &[0, 1], &[0, 1], true).unwrap();
        assert_eq!(s.to_string(), "z0,0*z1,1 - z0,1^2");
    }

    #[test]
    fn minor_errors() {
        assert_eq!(
            minor_det(5, 5, &[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5], false),
            Err(PolyError::TooLarge(6))
        );
        assert!(matches!(
            minor_det(1, 1, &[0, 2], &[0, 1], false),
            Err(PolyError::IndexOutOfRange { .. })
        ));
        assert_eq!(
            minor_det(1, 1, &[0], &[0, 1], false),
            Err(PolyError::SizeMismatch)
        );
    }

    #[test]
    fn shift_examples() {
        let p = minor_det(0, 0, &[0], &[0], false).unwrap();
        let l = shift_and_leading_form(&p, &shift00());
        assert_eq!(l.to_string(), "1");

        let p = minor_det(1, 1, &[0, 1], &[0, 1], false).unwrap();
        assert_eq!(shift_and_leading_form(&p, &shift00()).to_string(), "z1,1");

        let p = minor_det(2, 2, &[0, 1, 2], &[0, 1, 2], false).unwrap();
        let expected = minor_det(2, 2, &[1, 2], &[1, 2], false).unwrap();
        assert_eq!(shift_and_leading_form(&p, &shift00()), expected);
    }

    #[test]
    fn tangent_cone_examples() {
        let r = verify_tangent_cone(3, 3, 2, 1, false).unwrap();
        assert!(r.passed);
        assert_eq!(r.details["vertex_dim"], "6");
        assert_eq!(r.details["base"], "sec_1(S^2,2)");

        let r = verify_tangent_cone(3, 3, 3, 1, true).unwrap();
        assert!(r.passed);
        assert_eq!(r.details["vertex_dim"], "3");
        assert_eq!(r.details["base"], "sec_2(V^2)");

        assert!(verify_tangent_cone(1, 1, 1, 1, false).unwrap().passed);
        assert!(verify_tangent_cone(2, 2, 1, 2, false).is_err());
    }

    #[test]
    fn arithmetic() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let x = SparsePoly::var(vars.clone(), 0);
        let y = SparsePoly::var(vars.clone(), 1);
        let s = &x + &y;
        let sq = s.pow(2);
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
        assert!((&sq - &sq).is_zero());
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(x.scale(&half).to_string(), "1/2*x");
        assert_eq!(
            sq.eval(&[BigRational::one(), BigRational::one()]),
            BigRational::from_integer(4.into())
        );
    }
}
