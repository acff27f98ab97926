use collineations::cones::{
    cone_from_inequalities, cone_from_rays, dual_cone, gkz_decomposition, intersect, ConeError,
    RationalCone,
};
use collineations::lattice::{dot, rank, to_rationals, RationalVector};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn rays_strategy(d: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, d), 1..=max).prop_map(|rs| {
        rs.into_iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect()
    })
}

fn bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn full_rank(rays: &[Vec<i64>], d: usize) -> bool {
    let rows: Vec<_> = rays.iter().map(|r| to_rationals(&bigints(r))).collect();
    rank(&rows, d) == d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn facets_support_every_ray(rays in rays_strategy(3, 6)) {
        let cone = match cone_from_rays(3, &rays) {
            Ok(c) => c,
            Err(ConeError::NotPointed) | Err(ConeError::Empty) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for n in cone.facet_normals() {
            for r in &rays {
                prop_assert!(!dot(n, &bigints(r)).is_negative());
            }
        }
        for e in cone.equations() {
            for r in &rays {
                prop_assert_eq!(dot(e, &bigints(r)), BigInt::from(0));
            }
        }
        for r in &rays {
            prop_assert!(cone.contains_integer(&bigints(r), false).unwrap());
        }
    }

    #[test]
    fn ray_facet_round_trip(rays in rays_strategy(3, 6)) {
        let cone = match cone_from_rays(3, &rays) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let mut ineqs: Vec<Vec<BigInt>> = cone.facet_normals().to_vec();
        for e in cone.equations() {
            ineqs.push(e.clone());
            ineqs.push(e.iter().map(|x| -x).collect());
        }
        let back = cone_from_inequalities(3, &ineqs).unwrap();
        prop_assert_eq!(back.rays(), cone.rays());
    }

    #[test]
    fn double_dual(rays in rays_strategy(3, 5)) {
        prop_assume!(full_rank(&rays, 3));
        let cone = match cone_from_rays(3, &rays) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let dd = dual_cone(&dual_cone(&cone).unwrap()).unwrap();
        prop_assert_eq!(dd, cone);
    }

    #[test]
    fn nonnegative_combinations_are_contained(
        rays in rays_strategy(3, 5),
        weights in prop::collection::vec(0i64..=4, 5),
    ) {
        let cone = match cone_from_rays(3, &rays) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let mut x = vec![BigInt::from(0); 3];
        for (r, w) in rays.iter().zip(&weights) {
            for (xi, ri) in x.iter_mut().zip(r) {
                *xi += BigInt::from(ri * w);
            }
        }
        prop_assert!(cone.contains_integer(&x, false).unwrap());
        // Every generator with a positive weight puts the sum in the relative interior.
        if weights.iter().take(rays.len()).all(|&w| w > 0) {
            prop_assert!(cone.contains(&RationalVector(to_rationals(&x)), true).unwrap());
        }
    }
}

/// Full-dimensional simplicial subcones of `cone(W)`.
fn simplicial_subcones(w: &[Vec<i64>]) -> Vec<RationalCone> {
    w.iter()
        .combinations(3)
        .filter(|s| full_rank(&s.iter().map(|r| (*r).clone()).collect::<Vec<_>>(), 3))
        .map(|s| cone_from_rays(3, &s.into_iter().cloned().collect::<Vec<_>>()).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gkz_is_a_fan_refining_every_simplicial_cone(
        w in prop::collection::vec(prop::collection::vec(-2i64..=3, 3), 3..=5),
        weights in prop::collection::vec(prop::collection::vec(0i64..=3, 5), 4),
    ) {
        prop_assume!(w.iter().all(|r| r.iter().any(|&x| x != 0)));
        prop_assume!(full_rank(&w, 3));
        let support = match cone_from_rays(3, &w) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let dec = gkz_decomposition(&w).unwrap();
        prop_assert_eq!(&dec.support, &support);
        prop_assert!(!dec.is_empty());

        let sigmas = simplicial_subcones(&w);
        for (i, a) in dec.chambers.iter().enumerate() {
            prop_assert!(a.is_full_dimensional());
            prop_assert!(support.contains_cone(a).unwrap());
            // Interiors are pairwise disjoint.
            let p = RationalVector(to_rationals(&a.interior_point()));
            for (j, b) in dec.chambers.iter().enumerate() {
                if i != j {
                    prop_assert!(!b.contains(&p, false).unwrap(), "chambers {} and {} overlap", i, j);
                }
            }
            // Each chamber sits inside or outside every simplicial cone.
            for s in &sigmas {
                let inside = s.contains_cone(a).unwrap();
                let meets = intersect(a, s).unwrap().is_some_and(|c| c.is_full_dimensional());
                prop_assert!(inside || !meets);
            }
        }
        // The chambers cover the support.
        for ws in &weights {
            let mut x = vec![BigInt::from(0); 3];
            for (r, c) in w.iter().zip(ws) {
                for (xi, ri) in x.iter_mut().zip(r) {
                    *xi += BigInt::from(ri * c);
                }
            }
            let hits = dec.chambers_containing(&RationalVector(to_rationals(&x))).unwrap();
            prop_assert!(!hits.is_empty());
        }
    }
}

#[test]
fn five_chambers_for_complete_quadrics() {
    let w = vec![
        vec![1, 0, 0],
        vec![2, -1, 0],
        vec![3, -2, -1],
        vec![0, 1, 0],
        vec![0, 0, 1],
    ];
    let dec = gkz_decomposition(&w).unwrap();
    assert_eq!(dec.len(), 5);
    let nef = cone_from_rays(3, &w[..3]).unwrap();
    assert_eq!(dec.chambers.iter().filter(|c| **c == nef).count(), 1);
}

#[test]
fn not_pointed_is_rejected() {
    let rays = vec![vec![1, 0], vec![-1, 0], vec![0, 1]];
    assert_eq!(cone_from_rays(2, &rays), Err(ConeError::NotPointed));
}
