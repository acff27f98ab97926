use std::collections::BTreeMap;

use collineations::detvar::{
    binomial, rank_census, rank_count, segre_secant_invariants, verify_component_split,
    verify_rank_minor_lemma, veronese_secant_invariants, DetvarError,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Rank over Z/p by plain Gaussian elimination on i64 rows.
fn rank_mod(mut m: Vec<Vec<i64>>, p: i64) -> u32 {
    let cols = m.first().map_or(0, Vec::len);
    let mut r: usize = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = (1..p).find(|x| (m[r][c] * x).rem_euclid(p) == 1).unwrap();
        for i in 0..m.len() {
            if i != r && m[i][c] % p != 0 {
                let f = (m[i][c] * inv).rem_euclid(p);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r as u32
}

/// Brute-force rank histogram; symmetric matrices are built from their upper triangle.
fn brute_census(a: usize, b: usize, q: i64, symmetric: bool) -> BTreeMap<u32, u64> {
    let cells: Vec<(usize, usize)> = (0..a)
        .flat_map(|i| (0..b).map(move |j| (i, j)))
        .filter(|&(i, j)| !symmetric || i <= j)
        .collect();
    let total = (q as u64).pow(cells.len() as u32);
    let mut out = BTreeMap::new();
    for mut idx in 0..total {
        let mut m = vec![vec![0i64; b]; a];
        for &(i, j) in &cells {
            let v = (idx % q as u64) as i64;
            idx /= q as u64;
            m[i][j] = v;
            if symmetric {
                m[j][i] = v;
            }
        }
        *out.entry(rank_mod(m, q)).or_insert(0) += 1;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn census_matches_brute_force(a in 1usize..=3, b in 1usize..=3, q in prop::sample::select(vec![2i64, 3, 5])) {
        prop_assume!((q as u64).pow((a * b) as u32) <= 1 << 16);
        let c = rank_census(a as u32, b as u32, q as u64, false).unwrap();
        let want: BTreeMap<u32, u64> = brute_census(a, b, q, false);
        let got: BTreeMap<u32, u64> = c.counts.iter().filter(|(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect();
        prop_assert_eq!(got, want);
        prop_assert_eq!(c.matches_formula(), Some(true));
    }

    #[test]
    fn symmetric_census_matches_brute_force(n in 1usize..=3, q in prop::sample::select(vec![2i64, 3])) {
        let c = rank_census(n as u32, n as u32, q as u64, true).unwrap();
        let got: BTreeMap<u32, u64> = c.counts.iter().filter(|(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect();
        prop_assert_eq!(got, brute_census(n, n, q, true));
        prop_assert_eq!(c.total(), (q as u64).pow((n * (n + 1) / 2) as u32));
    }

    #[test]
    fn rank_counts_partition_all_matrices(a in 1u32..=6, b in 1u32..=6, q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let total: BigInt = (0..=a.min(b)).map(|r| rank_count(a, b, q, r)).sum();
        prop_assert_eq!(total, BigInt::from(q).pow(a * b));
        prop_assert_eq!(rank_count(a, b, q, 1), rank_count(b, a, q, 1));
    }

    #[test]
    fn component_split_inclusion_exclusion(
        a in 2u32..=3,
        b in 2u32..=4,
        k in 1u32..=2,
        q in prop::sample::select(vec![2u64, 3]),
    ) {
        prop_assume!(k < a.min(b));
        prop_assume!(q.pow(a * b) <= 1 << 16);
        let r = verify_component_split(a, b, k, q, false).unwrap();
        prop_assert!(r.passed && r.is_well_formed());
        let c = &r.counts;
        prop_assert_eq!(c["det_locus"], c["h1"] + c["h2"] - c["h1_and_h2"]);
        prop_assert!(c["det_locus"] <= c["rank_at_most_k"]);
    }

    #[test]
    fn secant_dimension_symmetry(n in 1u32..=6, m in 1u32..=6, h in 1u32..=7) {
        let (lo, hi) = (n.min(m), n.max(m));
        prop_assume!(h <= lo + 1);
        let inv = segre_secant_invariants(lo, hi, h).unwrap();
        prop_assert_eq!(inv.dim, i64::from(h) * i64::from(n + m + 2 - h) - 1);
        prop_assert!(inv.dim <= inv.ambient_dim);
    }
}

#[test]
fn complete_secants_have_degree_one() {
    for n in 1..=6 {
        assert_eq!(
            veronese_secant_invariants(n, n + 1).unwrap().deg,
            BigInt::from(1)
        );
        for m in n..=6 {
            assert_eq!(
                segre_secant_invariants(n, m, n + 1).unwrap().deg,
                BigInt::from(1)
            );
        }
    }
}

#[test]
fn determinantal_hypersurface_degree() {
    // sec_n(S^{n,n}) is the determinant hypersurface of degree n + 1.
    for n in 1..=5 {
        assert_eq!(
            segre_secant_invariants(n, n, n).unwrap().deg,
            BigInt::from(n + 1)
        );
    }
    assert_eq!(binomial(6, 3), BigInt::from(20));
}

#[test]
fn rank_lemma_example_counts() {
    let r = verify_rank_minor_lemma(3, 4, 2, 2).unwrap();
    assert!(r.passed);
    assert_eq!(r.counts["enumerated"], 4096);
}

#[test]
fn rejects_composite_fields_and_bad_k() {
    assert!(matches!(
        rank_census(2, 2, 4, false),
        Err(DetvarError::NonPrimeField(4))
    ));
    assert!(matches!(
        verify_rank_minor_lemma(3, 3, 3, 2),
        Err(DetvarError::InvalidParameters(_))
    ));
}
