//! Exact rational polyhedral cones and GKZ chamber decompositions.
//!
//! Cones here live in ambient dimension at most four, so both directions of
//! the double description are done by brute force over subsets of rays or
//! inequalities. That is plenty at this scale and keeps every step exact.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    dot, dot_rational, nullspace, primitive, primitive_integer, rank, to_rationals, RationalVector,
};

/// Largest ambient dimension the chamber decomposition accepts.
pub const MAX_GKZ_DIM: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("cone contains a line")]
    NotPointed,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("ambient dimension {0} exceeds the supported maximum of {MAX_GKZ_DIM}")]
    AmbientTooLarge(usize),
    #[error("cone has no nonzero generators")]
    Empty,
}

/// A pointed rational polyhedral cone.
///
/// `facet_normals` describe the cone inside the linear span of its rays and
/// `equations` cut out that span; both are derived from the rays.
#[derive(Clone, Debug, Eq)]
pub struct RationalCone {
    ambient_dim: usize,
    rays: Vec<Vec<BigInt>>,
    facet_normals: Vec<Vec<BigInt>>,
    equations: Vec<Vec<BigInt>>,
}

impl PartialEq for RationalCone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.rays == other.rays
    }
}

impl std::hash::Hash for RationalCone {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.rays.hash(state);
    }
}

impl PartialOrd for RationalCone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalCone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ambient_dim, &self.rays).cmp(&(other.ambient_dim, &other.rays))
    }
}

impl RationalCone {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Extreme rays, primitive and sorted lexicographically.
    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn facet_normals(&self) -> &[Vec<BigInt>] {
        &self.facet_normals
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    pub fn dimension(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dimension()
    }

    pub fn has_ray(&self, ray: &[BigInt]) -> bool {
        let p = primitive(ray);
        self.rays.contains(&p)
    }

    /// Sum of the primitive rays, a point of the relative interior.
    pub fn interior_point(&self) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); self.ambient_dim];
        for r in &self.rays {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        s
    }

    /// Membership on the rational side.
    pub fn contains(&self, x: &RationalVector, strict: bool) -> Result<bool, ConeError> {
        contains(self, x, strict)
    }

    pub fn contains_integer(&self, x: &[BigInt], strict: bool) -> Result<bool, ConeError> {
        contains(self, &RationalVector(to_rationals(x)), strict)
    }

    /// Whether every ray of `other` lies in `self`.
    pub fn contains_cone(&self, other: &RationalCone) -> Result<bool, ConeError> {
        for r in other.rays() {
            if !self.contains_integer(r, false)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All constraints as inequalities `<n, x> >= 0`, equations doubled.
    fn halfspaces(&self) -> Vec<Vec<BigInt>> {
        let mut out = self.facet_normals.clone();
        for e in &self.equations {
            out.push(e.clone());
            out.push(e.iter().map(|x| -x).collect());
        }
        out
    }
}

impl fmt::Display for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| format!("({})", r.iter().join(",")))
            .collect();
        write!(f, "cone<{}>", rays.join(", "))
    }
}

fn check_len(expected: usize, actual: usize) -> Result<(), ConeError> {
    if expected != actual {
        return Err(ConeError::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Primitive integer basis of the kernel of `rows` (as a matrix of row vectors).
fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let q: Vec<Vec<BigRational>> = rows.iter().map(|r| to_rationals(r)).collect();
    nullspace(&q, ncols)
        .iter()
        .map(|v| primitive_integer(v))
        .collect()
}

fn integer_rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let q: Vec<Vec<BigRational>> = rows.iter().map(|r| to_rationals(r)).collect();
    rank(&q, ncols)
}

/// Flips a nonzero vector so its first nonzero entry is positive.
fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Builds the cone spanned by `rays`.
pub fn cone_from_rays<T>(ambient_dim: usize, rays: &[Vec<T>]) -> Result<RationalCone, ConeError>
where
    T: Clone + Into<BigInt>,
{
    let rays: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| r.iter().cloned().map(Into::into).collect())
        .collect();
    cone_from_bigint_rays(ambient_dim, rays)
}

/// Builds a cone from rational generators, rescaling each to its primitive vector.
pub fn cone_from_rational_rays(
    ambient_dim: usize,
    rays: &[RationalVector],
) -> Result<RationalCone, ConeError> {
    for r in rays {
        check_len(ambient_dim, r.len())?;
    }
    let rays = rays
        .iter()
        .map(|r| primitive_integer(r.as_slice()))
        .collect();
    cone_from_bigint_rays(ambient_dim, rays)
}

fn cone_from_bigint_rays(
    ambient_dim: usize,
    rays: Vec<Vec<BigInt>>,
) -> Result<RationalCone, ConeError> {
    for r in &rays {
        check_len(ambient_dim, r.len())?;
    }
    let rays: Vec<Vec<BigInt>> = rays
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| primitive(&r))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if rays.is_empty() {
        return Err(ConeError::Empty);
    }
    let d = ambient_dim;
    let r = integer_rank(&rays, d);
    let equations: Vec<Vec<BigInt>> = integer_kernel(&rays, d);

    // Facets: hyperplanes through r-1 independent rays that support every ray.
    let mut facets = BTreeSet::new();
    for subset in rays.iter().combinations(r - 1) {
        let mut rows: Vec<Vec<BigInt>> = subset.into_iter().cloned().collect();
        if integer_rank(&rows, d) != r - 1 {
            continue;
        }
        rows.extend(equations.iter().cloned());
        let kernel = integer_kernel(&rows, d);
        debug_assert_eq!(kernel.len(), 1);
        let mut normal = kernel.into_iter().next().expect("one-dimensional kernel");
        let values: Vec<BigInt> = rays.iter().map(|x| dot(&normal, x)).collect();
        let pos = values.iter().any(Signed::is_positive);
        let neg = values.iter().any(Signed::is_negative);
        if pos && neg {
            continue;
        }
        if neg {
            normal = normal.into_iter().map(|x| -x).collect();
        }
        facets.insert(normal);
    }
    let facets: Vec<Vec<BigInt>> = facets.into_iter().collect();

    let mut constraint_rows = facets.clone();
    constraint_rows.extend(equations.iter().cloned());
    if integer_rank(&constraint_rows, d) < d {
        return Err(ConeError::NotPointed);
    }

    // Keep only extreme rays.
    let extreme: Vec<Vec<BigInt>> = rays
        .iter()
        .filter(|x| {
            let mut tight: Vec<Vec<BigInt>> = facets
                .iter()
                .filter(|f| dot(f, x).is_zero())
                .cloned()
                .collect();
            tight.extend(equations.iter().cloned());
            integer_rank(&tight, d) == d - 1
        })
        .cloned()
        .collect();

    Ok(RationalCone {
        ambient_dim,
        rays: extreme,
        facet_normals: facets,
        equations,
    })
}

/// Builds `{x : <n, x> >= 0 for n in inequalities}`, which must be pointed.
pub fn cone_from_inequalities<T>(
    ambient_dim: usize,
    inequalities: &[Vec<T>],
) -> Result<RationalCone, ConeError>
where
    T: Clone + Into<BigInt>,
{
    let ineqs: Vec<Vec<BigInt>> = inequalities
        .iter()
        .map(|r| r.iter().cloned().map(Into::into).collect())
        .collect();
    for n in &ineqs {
        check_len(ambient_dim, n.len())?;
    }
    let d = ambient_dim;
    if integer_rank(&ineqs, d) < d {
        return Err(ConeError::NotPointed);
    }
    let ineqs: Vec<Vec<BigInt>> = ineqs
        .into_iter()
        .filter(|n| n.iter().any(|x| !x.is_zero()))
        .map(|n| primitive(&n))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let feasible = |v: &[BigInt]| ineqs.iter().all(|n| !dot(n, v).is_negative());

    let mut rays = BTreeSet::new();
    for subset in ineqs.iter().combinations(d - 1) {
        let rows: Vec<Vec<BigInt>> = subset.into_iter().cloned().collect();
        let kernel = integer_kernel(&rows, d);
        if kernel.len() != 1 {
            continue;
        }
        let v = kernel.into_iter().next().expect("one-dimensional kernel");
        let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
        if feasible(&v) {
            rays.insert(v);
        } else if feasible(&neg) {
            rays.insert(neg);
        }
    }
    if rays.is_empty() {
        return Err(ConeError::Empty);
    }
    let rays: Vec<Vec<BigInt>> = rays.into_iter().collect();
    cone_from_bigint_rays(d, rays)
}

/// Membership test. `strict` asks for the (relative) interior.
pub fn contains(c: &RationalCone, x: &RationalVector, strict: bool) -> Result<bool, ConeError> {
    check_len(c.ambient_dim, x.len())?;
    if c.equations
        .iter()
        .any(|e| !dot_rational(e, x.as_slice()).is_zero())
    {
        return Ok(false);
    }
    Ok(c.facet_normals.iter().all(|n| {
        let v = dot_rational(n, x.as_slice());
        if strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }))
}

/// Dual cone of a pointed full-dimensional cone.
pub fn dual_cone(c: &RationalCone) -> Result<RationalCone, ConeError> {
    if !c.is_full_dimensional() {
        return Err(ConeError::NotFullDimensional);
    }
    cone_from_bigint_rays(c.ambient_dim, c.facet_normals.clone())
}

/// Intersection of two pointed cones; `None` if it is just the origin.
pub fn intersect(a: &RationalCone, b: &RationalCone) -> Result<Option<RationalCone>, ConeError> {
    check_len(a.ambient_dim, b.ambient_dim)?;
    let mut h = a.halfspaces();
    h.extend(b.halfspaces());
    match cone_from_inequalities(a.ambient_dim, &h) {
        Ok(c) => Ok(Some(c)),
        Err(ConeError::Empty) => Ok(None),
        Err(e) => Err(e),
    }
}

/// A fan of full-dimensional chambers covering a support cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberDecomposition {
    pub ambient_dim: usize,
    pub support: RationalCone,
    pub chambers: Vec<RationalCone>,
    pub rays: Vec<Vec<BigInt>>,
}

impl ChamberDecomposition {
    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    /// Index of the chamber equal to `c`, if any.
    pub fn position(&self, c: &RationalCone) -> Option<usize> {
        self.chambers.iter().position(|k| k == c)
    }

    /// Indices of chambers containing `x` (several when `x` is on a wall).
    pub fn chambers_containing(&self, x: &RationalVector) -> Result<Vec<usize>, ConeError> {
        let mut out = Vec::new();
        for (i, k) in self.chambers.iter().enumerate() {
            if k.contains(x, false)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

/// GKZ chamber decomposition of `cone(W)`.
///
/// The support is sliced along every hyperplane spanned by a linearly
/// independent subset of `W`; cells whose interiors lie in the same
/// simplicial subcones are merged, and each chamber is the intersection of
/// those subcones.
pub fn gkz_decomposition<T>(w: &[Vec<T>]) -> Result<ChamberDecomposition, ConeError>
where
    T: Clone + Into<BigInt>,
{
    let w: Vec<Vec<BigInt>> = w
        .iter()
        .map(|r| r.iter().cloned().map(Into::into).collect())
        .collect();
    let d = w.first().map(Vec::len).ok_or(ConeError::Empty)?;
    if d > MAX_GKZ_DIM {
        return Err(ConeError::AmbientTooLarge(d));
    }
    let support = cone_from_bigint_rays(d, w.clone())?;
    if !support.is_full_dimensional() {
        return Err(ConeError::NotFullDimensional);
    }
    let w: Vec<Vec<BigInt>> = w
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| primitive(r))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let hyperplanes: BTreeSet<Vec<BigInt>> = w
        .iter()
        .combinations(d - 1)
        .filter_map(|subset| {
            let rows: Vec<Vec<BigInt>> = subset.into_iter().cloned().collect();
            let kernel = integer_kernel(&rows, d);
            (kernel.len() == 1).then(|| canonical_sign(kernel.into_iter().next().unwrap()))
        })
        .collect();

    let mut cells = vec![support.clone()];
    for h in &hyperplanes {
        let mut next = Vec::with_capacity(cells.len());
        let neg_h: Vec<BigInt> = h.iter().map(|x| -x).collect();
        for cell in cells {
            let values: Vec<BigInt> = cell.rays.iter().map(|r| dot(h, r)).collect();
            let cut =
                values.iter().any(Signed::is_positive) && values.iter().any(Signed::is_negative);
            if !cut {
                next.push(cell);
                continue;
            }
            for side in [h, &neg_h] {
                let mut ineqs = cell.halfspaces();
                ineqs.push(side.clone());
                next.push(cone_from_inequalities(d, &ineqs)?);
            }
        }
        cells = next;
    }

    let simplicial: Vec<RationalCone> = w
        .iter()
        .combinations(d)
        .filter_map(|subset| {
            let rows: Vec<Vec<BigInt>> = subset.into_iter().cloned().collect();
            (integer_rank(&rows, d) == d).then_some(rows)
        })
        .map(|rows| cone_from_bigint_rays(d, rows))
        .collect::<Result<_, _>>()?;

    let mut groups: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cell in &cells {
        let sample = cell.interior_point();
        let signature: Vec<usize> = simplicial
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains_integer(&sample, true).unwrap_or(false))
            .map(|(i, _)| i)
            .collect();
        groups.insert(signature);
    }

    let mut chambers = Vec::with_capacity(groups.len());
    for signature in &groups {
        let mut ineqs = support.halfspaces();
        for &i in signature {
            ineqs.extend(simplicial[i].halfspaces());
        }
        chambers.push(cone_from_inequalities(d, &ineqs)?);
    }
    chambers.sort();
    chambers.dedup();

    let rays: Vec<Vec<BigInt>> = chambers
        .iter()
        .flat_map(|c| c.rays.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    Ok(ChamberDecomposition {
        ambient_dim: d,
        support,
        chambers,
        rays,
    })
}
