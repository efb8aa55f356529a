use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use toric_orbifold::lattice::*;

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn is_unit(d: &BigInt) -> bool {
    d == &BigInt::one() || d == &-BigInt::one()
}

/// Gcd of all k×k minors by expanding every determinant with cofactors.
fn minors_gcd_oracle(a: &[Vec<i64>], k: usize) -> i64 {
    fn det(a: &[Vec<i64>]) -> i64 {
        if a.len() == 1 {
            return a[0][0];
        }
        (0..a.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * det(&minor)
            })
            .sum()
    }
    let mut g = 0i64;
    for rs in subsets(a.len(), k) {
        for cs in subsets(a[0].len(), k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
            g = num_integer::gcd(g, det(&sub));
        }
    }
    g
}

#[test]
fn minors_gcd_examples() {
    assert_eq!(minors_gcd(&m(&[&[-1, 1, 1]]), 1).unwrap(), BigInt::from(1));
    assert_eq!(minors_gcd(&m(&[&[2, 4]]), 1).unwrap(), BigInt::from(2));
    assert_eq!(minors_gcd(&m(&[&[1, 0, 1], &[0, 2, 2]]), 2).unwrap(), BigInt::from(2));
    assert!(matches!(minors_gcd(&m(&[&[1, 2]]), 2), Err(LatticeError::Dimension { .. })));
    assert!(matches!(minors_gcd(&m(&[&[1, 2]]), 0), Err(LatticeError::Dimension { .. })));
}

#[test]
fn row_reduce_examples() {
    let (u, r) = integer_row_reduce(&m(&[&[2, 4], &[1, 2]]));
    assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
    assert_eq!(u.mul(&m(&[&[2, 4], &[1, 2]])), r);
    assert_eq!(integer_row_reduce(&IntMatrix::identity(3)).1, IntMatrix::identity(3));
    assert_eq!(integer_row_reduce(&m(&[&[0, 1], &[1, 0]])).1, IntMatrix::identity(2));
}

fn check_kernel(a: &IntMatrix, expected_rank: usize) -> IntMatrix {
    let b = kernel_lattice_basis(a);
    assert_eq!(b.rows(), expected_rank);
    if b.rows() > 0 {
        assert!(a.mul(&b.transpose()).row_vecs().iter().flatten().all(|x| x.is_zero()));
        assert_eq!(b.rank(), a.cols() - a.rank());
        // saturated: the maximal minors are coprime
        assert_eq!(minors_gcd(&b, b.rows()).unwrap(), BigInt::one());
    }
    b
}

#[test]
fn kernel_examples() {
    let b = check_kernel(&m(&[&[-1, 1, 1]]), 2);
    // same lattice as {(1,1,0),(1,0,1)}: each basis expressed in the other
    let other = m(&[&[1, 1, 0], &[1, 0, 1]]);
    let stacked = IntMatrix::from_big_rows(&[b.row_vecs(), other.row_vecs()].concat(), 3);
    assert_eq!(minors_gcd(&stacked, 2).unwrap(), BigInt::one());
    assert_eq!(stacked.rank(), 2);
    assert_eq!(integer_row_reduce(&other).1, b);
    let b = check_kernel(&m(&[&[-2, 1, 1]]), 2);
    assert_eq!(integer_row_reduce(&m(&[&[1, 2, 0], &[0, 1, -1]])).1, b);
    check_kernel(&IntMatrix::identity(2), 0);
}

#[test]
fn smith_examples() {
    let s = smith_normal_form(&m(&[&[1, 0], &[1, -2]]));
    assert_eq!(s.diagonal(), big(&[1, 2]));
    assert_eq!(smith_normal_form(&IntMatrix::identity(3)).s, IntMatrix::identity(3));
    assert_eq!(smith_normal_form(&m(&[&[2, 0], &[0, 3]])).diagonal(), big(&[1, 6]));
}

#[test]
fn primitive_examples() {
    assert_eq!(primitive_vector(&big(&[2, 4, 0])).unwrap(), big(&[1, 2, 0]));
    assert_eq!(primitive_vector(&big(&[-1, -1])).unwrap(), big(&[1, 1]));
    assert_eq!(primitive_vector(&big(&[3, 5])).unwrap(), big(&[3, 5]));
    assert_eq!(primitive_vector(&big(&[0, 0])), Err(LatticeError::ZeroVector));
}

#[test]
fn ragged_rows_rejected() {
    assert!(matches!(IntMatrix::from_rows(&[vec![1, 2], vec![3]]), Err(LatticeError::Ragged)));
}

#[test]
fn determinant_and_rank() {
    assert_eq!(m(&[&[2, 1], &[7, 4]]).det(), BigInt::from(1));
    assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
    assert_eq!(IntMatrix::zeros(2, 3).rank(), 0);
}

#[test]
fn json_round_trip() {
    let a = m(&[&[-1, 1, 2], &[0, 3, -4]]);
    let v = serde_json::to_value(&a).unwrap();
    assert_eq!(v["rows"], 2);
    let back: IntMatrix = serde_json::from_value(v).unwrap();
    assert_eq!(back, a);
}

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn arb_unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..8).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k) in ops {
            if i != j {
                for c in 0..n {
                    let v = u.get(i, c) + BigInt::from(k) * u.get(j, c);
                    u.set(i, c, v);
                }
            }
        }
        u
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn row_reduce_is_unimodular(rows in arb_matrix()) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let (u, r) = integer_row_reduce(&a);
        prop_assert_eq!(u.mul(&a), r);
        prop_assert!(is_unit(&u.det()));
    }

    #[test]
    fn smith_chain(rows in arb_matrix()) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let f = smith_normal_form(&a);
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.s.clone());
        prop_assert!(is_unit(&f.u.det()) && is_unit(&f.v.det()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    prop_assert!(f.s.get(i, j).is_zero());
                }
            }
        }
        let d = f.diagonal();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn minors_gcd_matches_cofactors(rows in arb_matrix(), k in 1usize..=3) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        prop_assume!(k <= a.rows() && k <= a.cols());
        prop_assert_eq!(minors_gcd(&a, k).unwrap(), BigInt::from(minors_gcd_oracle(&rows, k)));
    }

    #[test]
    fn minors_gcd_row_invariant(rows in arb_matrix(), seed in arb_unimodular(3)) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let n = a.rows();
        let idx: Vec<usize> = (0..n).collect();
        let u = seed.select_rows(&idx).select_columns(&idx);
        prop_assume!(is_unit(&u.det()));
        let ua = u.mul(&a);
        for k in 1..=n.min(a.cols()) {
            prop_assert_eq!(minors_gcd(&ua, k).unwrap(), minors_gcd(&a, k).unwrap());
        }
    }

    #[test]
    fn kernel_is_saturated(rows in arb_matrix()) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let b = kernel_lattice_basis(&a);
        prop_assert_eq!(b.rows(), a.cols() - a.rank());
        if b.rows() > 0 {
            prop_assert!(a.mul(&b.transpose()).row_vecs().iter().flatten().all(|x| x.is_zero()));
            prop_assert_eq!(minors_gcd(&b, b.rows()).unwrap(), BigInt::one());
        }
    }
}
