use collineations::lattice::{
    cokernel, rank, smith_normal_form, solve_rational, to_rationals, IntegerMatrix, LatticeError,
    RationalVector,
};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, entries: Vec<i64>) -> IntegerMatrix {
    IntegerMatrix::new(rows, cols, entries.into_iter().map(BigInt::from).collect()).unwrap()
}

fn small_matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |e| matrix(r, c, e))
    })
}

/// Cofactor determinant, independent of the Bareiss routine.
fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    for (j, a) in m[0].iter().enumerate() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = a * cofactor_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// Invariant factors from determinantal divisors: d_k = gcd of all k x k
/// minors, s_k = d_k / d_{k-1}.
fn determinantal_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let mut d = BigInt::zero();
        for rows in (0..m.rows()).combinations(k) {
            for cols in (0..m.cols()).combinations(k) {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| m.get(r, c).clone()).collect())
                    .collect();
                d = d.gcd(&cofactor_det(&sub));
            }
        }
        if d.is_zero() {
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}

fn random_unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntegerMatrix {
    let mut u = IntegerMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        // column j += c * column i
        for r in 0..n {
            let v = u.get(r, j) + u.get(r, i) * BigInt::from(c);
            u.set(r, j, v);
        }
    }
    u
}

proptest! {
    #[test]
    fn snf_is_a_diagonalization(m in small_matrix()) {
        let s = smith_normal_form(&m);
        let umv = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
        prop_assert_eq!(&umv, &s.d);
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    prop_assert!(s.d.get(r, c).is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_matches_determinantal_divisors(m in small_matrix()) {
        let got = smith_normal_form(&m).invariant_factors();
        let want = determinantal_factors(&m);
        prop_assert_eq!(got.clone(), want);
        for w in got.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero(), "divisibility chain {:?}", got);
        }
    }

    #[test]
    fn cokernel_invariant_under_column_operations(
        m in small_matrix(),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
    ) {
        let v = random_unimodular(m.cols(), &ops);
        let changed = m.mul(&v).unwrap();
        prop_assert_eq!(cokernel(&m), cokernel(&changed));
    }

    #[test]
    fn cokernel_is_normalized(m in small_matrix()) {
        let g = cokernel(&m);
        prop_assert!(g.is_normalized());
        let nonzero = smith_normal_form(&m).invariant_factors().len();
        prop_assert_eq!(g.free_rank, m.rows() - nonzero);
    }

    #[test]
    fn solve_round_trip(
        m in small_matrix(),
        x in prop::collection::vec((-9i64..=9, 1i64..=5), 4),
    ) {
        let x = RationalVector::from_fractions(&x[..m.cols()]);
        let b = m.mul_vector(&x).unwrap();
        let rows: Vec<Vec<BigRational>> = (0..m.rows()).map(|r| to_rationals(m.row(r))).collect();
        if rank(&rows, m.cols()) == m.cols() {
            let y = solve_rational(&m, &b).unwrap().expect("b lies in the image");
            prop_assert_eq!(y, x);
        } else {
            prop_assert_eq!(solve_rational(&m, &b), Err(LatticeError::UnderDetermined));
        }
    }
}

#[test]
fn smith_examples() {
    let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
    let f: Vec<i64> = smith_normal_form(&m)
        .invariant_factors()
        .iter()
        .map(|x| x.try_into().unwrap())
        .collect();
    assert_eq!(f, vec![2, 6, 12]);
}

#[test]
fn inconsistent_system_has_no_solution() {
    let m = IntegerMatrix::from_rows(&[vec![1, 1], vec![2, 2]]).unwrap();
    let b = RationalVector::from_integers(&[1, 3]);
    assert_eq!(solve_rational(&m, &b).unwrap(), None);
}
