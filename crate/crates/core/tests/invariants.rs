
use proptest::prelude::*;
use toric_orbifold::exact::{palindromic, rat, series_expand, IntPoly};
use toric_orbifold::invariants::*;
use toric_orbifold::weights::WeightMatrix;

fn row(v: &[i64]) -> WeightMatrix {
    WeightMatrix::row(v)
}

/// Brute force over every (a, b) with |a| + |b| = k: the textbook definition.
fn brute_dims(w: &WeightMatrix, k: usize) -> Vec<u64> {
    let n = w.n();
    let mut dims = vec![0u64; k + 1];
    let mut e = vec![0u32; 2 * n];
    fn rec(e: &mut Vec<u32>, j: usize, left: u32, w: &WeightMatrix, dims: &mut Vec<u64>, k: usize) {
        if j == e.len() {
            let n = w.n();
            let m = MonomialExp { a: e[..n].to_vec(), b: e[n..].to_vec() };
            if m.is_invariant(w) {
                dims[(k as u32 - left) as usize] += 1;
            }
            return;
        }
        for v in 0..=left {
            e[j] = v;
            rec(e, j + 1, left - v, w, dims, k);
        }
        e[j] = 0;
    }
    rec(&mut e, 0, k as u32, w, &mut dims, k);
    dims
}

#[test]
fn graded_dims_examples() {
    assert_eq!(graded_dims(&row(&[-1, 1, 1]), 2).unwrap().dims, vec![1, 0, 9]);
    assert_eq!(graded_dims(&row(&[-1, 1, 2]), 3).unwrap().dims, vec![1, 0, 5, 6]);
    assert_eq!(graded_dims(&row(&[3, -1, 4]), 0).unwrap().dims, vec![1]);
}

#[test]
fn graded_dims_match_brute_force() {
    for rows in [
        vec![vec![-1, 1, 1]],
        vec![vec![-1, 1, 2]],
        vec![vec![2, -3, 1]],
        vec![vec![1, -1, 0], vec![0, 1, -2]],
        vec![vec![1, 1]],
    ] {
        let w = WeightMatrix::from_rows(&rows).unwrap();
        assert_eq!(graded_dims(&w, 7).unwrap().dims, brute_dims(&w, 7), "{rows:?}");
    }
}

#[test]
fn budget_errors() {
    assert!(matches!(graded_dims(&row(&[1; 9]), 2), Err(InvariantError::Budget(_))));
    assert!(matches!(graded_dims(&row(&[-1, 1]), 21), Err(InvariantError::Budget(_))));
}

#[test]
fn hilbert_basis_examples() {
    let hb = hilbert_basis_monomials(&row(&[-1, 1, 1]), 4).unwrap();
    assert_eq!(hb.generators.len(), 9);
    assert!(hb.complete);
    assert!(hb.generators.iter().all(|g| g.degree() == 2));
    for m in 1..=5 {
        let hb = hilbert_basis_monomials(&row(&[-1, 1, m]), (m + 2) as usize).unwrap();
        assert_eq!(hb.generators.len() as i64, 7 + 2 * m, "m = {m}");
        assert!(hb.complete);
    }
    // equal weights leave every z_i zb_j invariant, not only the diagonal ones
    let hb = hilbert_basis_monomials(&row(&[1, 1]), 4).unwrap();
    let names: Vec<String> = hb.generators.iter().map(|g| g.to_string()).collect();
    assert_eq!(names, vec!["z2*zb2", "z2*zb1", "z1*zb2", "z1*zb1"]);
    assert_eq!(brute_dims(&row(&[1, 1]), 2)[2], 4);
}

#[test]
fn hilbert_basis_closed_under_conjugation() {
    for w in [row(&[-1, 1, 2]), row(&[-2, 1, 3]), WeightMatrix::from_rows(&[vec![-1, 0, 1], vec![0, -2, 1]]).unwrap()] {
        let hb = hilbert_basis_monomials(&w, 6).unwrap();
        for g in &hb.generators {
            assert!(g.is_invariant(&w));
            assert!(hb.generators.contains(&g.conjugate()));
            for h in &hb.generators {
                assert!(g == h || !g.divides(h));
            }
        }
    }
}

#[test]
fn quotient_series_examples() {
    let s = quotient_hilbert_series(&row(&[-1, 1, 1]), 8).unwrap();
    assert_eq!(s.to_i64().unwrap(), vec![1, 0, 8, 0, 27, 0, 64, 0, 125]);
    let s = quotient_hilbert_series(&row(&[-1, 1, 2]), 7).unwrap();
    assert_eq!(s.to_i64().unwrap(), vec![1, 0, 4, 6, 9, 16, 26, 30]);
    // C/Z2: (1 + t²)/(1 − t²)² = Σ (2j + 1) t^{2j}
    let s = quotient_hilbert_series(&row(&[-1, 1]), 6).unwrap();
    assert_eq!(s.to_i64().unwrap(), vec![1, 0, 3, 0, 5, 0, 7]);
    assert_eq!(s, series_expand(&cyclic_line_series(2), 6));
    let r = quotient_hilbert_series(&WeightMatrix::from_rows(&[vec![1, -1], vec![2, -2]]).unwrap(), 4);
    assert_eq!(r, Err(InvariantError::NotFullRank { rank: 1, ell: 2 }));
}

#[test]
fn gorenstein_numerators() {
    let rf = gorenstein_fit(&row(&[-1, 1, 1]), 16).unwrap();
    assert_eq!(rf.numerator(), &IntPoly::from_i64(&[1, 0, 4, 0, 1]));
    assert!(palindromic(rf.numerator()));
    let rf = gorenstein_fit(&row(&[-1, 1, 2]), 16).unwrap();
    assert_eq!(rf.numerator(), &IntPoly::from_i64(&[1, 0, 2, 4, 2, 0, 1]));
    assert_eq!(rf.denominator(), &[(2, 2), (3, 2)]);
    assert!(palindromic(rf.numerator()));
}

#[test]
fn dim2_examples() {
    let d = dim2_data(&row(&[-1, 1])).unwrap();
    assert_eq!((d.cal_a, d.cal_m, d.big_n), (1, 1, 2));
    assert_eq!(d.beta, rat(1, 2));
    assert_eq!(d.alpha_sq, rat(1, 4));
    assert_eq!(d.cal_b, rat(2, 1));
    assert_eq!(d.kernel_generators[0].to_string(), "y1^2 + y2^2 - y3^2");
    assert_eq!(d.kernel_generators[1].to_string(), "-y3 + y4");
    assert!(d.verify_arrow());

    let d = dim2_data(&row(&[-1, 2])).unwrap();
    assert_eq!((d.cal_a, d.m.clone(), d.big_n), (1, vec![2], 3));
    assert_eq!(d.alpha_sq, rat(4, 27));
    assert_eq!(d.cal_b, rat(12, 1));
    assert_eq!(d.kernel_generators[0].to_string(), "y1^2 + y2^2 - 4*y3^3");
    assert_eq!(d.kernel_generators[1].to_string(), "-2*y3 + y4");
    assert_eq!(d.generator_degrees, vec![3, 3, 2, 2]);

    let d = dim2_data(&WeightMatrix::from_rows(&[vec![-1, 0, 1], vec![0, -1, 1]]).unwrap()).unwrap();
    assert_eq!((d.cal_a, d.m.clone(), d.cal_m, d.big_n), (1, vec![1, 1], 2, 3));
    assert_eq!(d.beta, rat(1, 3));
    assert_eq!(d.alpha_sq, rat(1, 27));
    assert_eq!(d.cal_b, rat(3, 1));
}

#[test]
fn dim2_errors_and_normalization() {
    assert_eq!(dim2_data(&row(&[-2, 2])), Err(InvariantError::GcdViolation { index: 0, gcd: 2 }));
    assert_eq!(dim2_data(&row(&[1, 1])), Err(InvariantError::NotDim2Form));
    assert_eq!(dim2_data(&row(&[-1, 1, 1])), Err(InvariantError::NotDim2Form));
    // [2, -1] has kernel ray (1, 2); keeping column order gives [-2 | 1]
    let d = dim2_data(&row(&[2, -1])).unwrap();
    assert_eq!(d.perm, vec![0, 1]);
    assert_eq!((d.a.clone(), d.n_col.clone(), d.cal_a, d.m.clone(), d.big_n), (vec![2], vec![1], 2, vec![1], 3));
    // a zero in the last kernel coordinate forces a swap
    let d = dim2_data(&WeightMatrix::from_rows(&[vec![1, -1, 0], vec![0, 0, 1]]).unwrap()).unwrap();
    assert_eq!(d.perm, vec![0, 2, 1]);
    assert_eq!(d.big_n, 2);
    // rows mixed by a unimodular change
    let d = dim2_data(&WeightMatrix::from_rows(&[vec![-1, -1, 2], vec![0, -1, 1]]).unwrap()).unwrap();
    assert_eq!(d.big_n, 3);
}

#[test]
fn dim2_quotient_matches_cyclic_line() {
    for (a, n) in [(1, 1), (1, 3), (2, 1), (3, 2), (4, 3)] {
        let w = row(&[-a, n]);
        let d = dim2_data(&w).unwrap();
        assert_eq!(
            quotient_hilbert_series(&w, 12).unwrap(),
            series_expand(&cyclic_line_series(d.big_n as usize), 12),
            "[-{a} | {n}]"
        );
    }
}

#[test]
fn json_round_trip() {
    let d = dim2_data(&row(&[-2, 3])).unwrap();
    let v = serde_json::to_value(&d).unwrap();
    assert_eq!(v["alpha_sq"], serde_json::json!(d.alpha_sq.to_string()));
    let back: Dim2IsoData = serde_json::from_value(v).unwrap();
    assert_eq!(back, d);
    let hb = hilbert_basis_monomials(&row(&[-1, 1]), 2).unwrap();
    let v = serde_json::to_value(&hb).unwrap();
    assert_eq!(v["generators"][0]["degree"], 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn two_algorithms_agree(rows in (1usize..=2, 2usize..=4).prop_flat_map(|(l, n)|
        prop::collection::vec(prop::collection::vec(-3i64..=3, n), l)), k in 0usize..=8) {
        let w = WeightMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(
            graded_dims_enumeration(&w, k),
            graded_dims_laurent(&w, k)
        );
    }

    #[test]
    fn generators_factor_everything(a in 1i64..=3, b in 1i64..=3, c in 1i64..=3) {
        let w = row(&[-a, b, c]);
        let hb = hilbert_basis_monomials(&w, 6).unwrap();
        prop_assert!(hb.complete);
    }
}
