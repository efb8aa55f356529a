use toric_orbifold::duval::*;
use toric_orbifold::invariants::quotient_hilbert_series;
use toric_orbifold::molien::{dim_invariants, molien_series};
use toric_orbifold::obstruction::*;
use toric_orbifold::weights::WeightMatrix;

fn w(rows: &[&[i64]]) -> WeightMatrix {
    WeightMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn target(m: &WeightMatrix, k: usize) -> Vec<u64> {
    series_to_u64(&quotient_hilbert_series(m, k).unwrap()).unwrap()
}

fn certificates(v: &OrbifoldVerdict) -> &[ExclusionCertificate] {
    match v {
        OrbifoldVerdict::NoFiniteMatchUpToBound { certificates, .. } => certificates,
        other => panic!("unexpected verdict {}", other.name()),
    }
}

#[test]
fn verdict_examples() {
    match check_orbifold(&w(&[&[-1, -1, 1, 1]]), 8, 10).unwrap() {
        OrbifoldVerdict::NotRationalHomologyManifold { vertex_count, .. } => assert_eq!(vertex_count, 4),
        other => panic!("{}", other.name()),
    }
    match check_orbifold(&w(&[&[-1, 2]]), 8, 10).unwrap() {
        OrbifoldVerdict::Dim2Orbifold { target_n, .. } => assert_eq!(target_n, 3),
        other => panic!("{}", other.name()),
    }
    assert_eq!(check_orbifold(&w(&[&[1, 1]]), 8, 10).unwrap(), OrbifoldVerdict::PointQuotient);
    let v = check_orbifold(&w(&[&[-1, 1, 1]]), 6, 24).unwrap();
    assert!(!certificates(&v).is_empty());
}

#[test]
fn preconditions() {
    assert!(matches!(check_orbifold(&w(&[&[-1, 1, 1]]), 4, 10), Err(ObstructionError::Precondition(_))));
    assert!(matches!(check_orbifold(&w(&[&[-1, 1, 1]]), 8, 1), Err(ObstructionError::Precondition(_))));
    assert!(matches!(exclusion_run(&[2, 0, 1], 10), Err(ObstructionError::Precondition(_))));
    assert!(matches!(exclusion_run(&[1, 0, 1], 5000), Err(ObstructionError::Duval(DuvalError::Budget(5000)))));
}

#[test]
fn self_match() {
    let z2 = generate(&GroupSpec::CyclicSu2 { n: 2 }).unwrap();
    let series = molien_series(&z2, 8).unwrap().coefficients;
    match exclusion_run(&series, 10).unwrap() {
        ExclusionOutcome::Matched { candidates } => {
            assert!(candidates
                .iter()
                .any(|c| generate(c).unwrap().fingerprint() == z2.fingerprint()));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn certificates_verify_independently() {
    for m in [w(&[&[-1, 1, 1]]), w(&[&[-1, 1, 2]])] {
        let t = target(&m, 8);
        let classes = enumerate_duval(96).unwrap();
        let certs = match exclusion_over(&t, &classes, 96).unwrap() {
            ExclusionOutcome::Excluded { certificates } => certificates,
            other => panic!("{other:?}"),
        };
        assert_eq!(certs.len(), classes.len());
        for c in &certs {
            assert!(verify_certificate(c, &t).unwrap(), "{}", c.candidate);
            // direct series of the candidate, recomputed here
            let g = generate(&c.candidate).unwrap();
            let s = molien_series(&g, 8).unwrap().coefficients;
            assert_eq!(s[c.mismatch_degree], c.group_coefficient);
            assert_ne!(s[c.mismatch_degree], t[c.mismatch_degree]);
            assert_eq!(g.order as u64, c.order);
            match &c.pruned_by {
                None => {
                    // the first degree where the series part
                    let first = (0..=8).find(|&d| s[d] != t[d]).unwrap();
                    assert_eq!(c.mismatch_degree, first, "{}", c.candidate);
                }
                Some(wit) => {
                    let h = generate(wit).unwrap();
                    assert!(h.is_subset_of(&g), "{wit} in {}", c.candidate);
                    let hc = dim_invariants(&h, c.mismatch_degree).unwrap();
                    assert!(hc < t[c.mismatch_degree]);
                    assert_eq!(Some(hc), c.witness_coefficient);
                    assert!(c.group_coefficient <= hc);
                }
            }
        }
        // sorted by family and parameters
        assert!(certs.windows(2).all(|p| p[0].candidate.sort_key() <= p[1].candidate.sort_key()));
    }
}

#[test]
fn tampered_certificates_fail() {
    let t = target(&w(&[&[-1, 1, 1]]), 8);
    let certs = certificates(&check_orbifold(&w(&[&[-1, 1, 1]]), 8, 12).unwrap()).to_vec();
    let mut c = certs[0].clone();
    c.group_coefficient += 1;
    assert!(!verify_certificate(&c, &t).unwrap());
    let mut c = certs[0].clone();
    c.target_coefficient = c.group_coefficient;
    assert!(!verify_certificate(&c, &t).unwrap());
    if let Some(p) = certs.iter().find(|c| c.pruned_by.is_some()) {
        let mut c = p.clone();
        c.pruned_by = Some(GroupSpec::BinaryIcosahedral);
        assert!(!verify_certificate(&c, &t).unwrap());
    }
}

#[test]
fn mismatch_degrees_for_the_two_targets() {
    let v = check_orbifold(&w(&[&[-1, 1, 1]]), 8, 200).unwrap();
    for c in certificates(&v) {
        assert!(c.mismatch_degree <= 2, "{}", c.candidate);
        if c.pruned_by.is_some() {
            assert!(c.witness_coefficient.unwrap() <= 6);
        }
    }
    let v = check_orbifold(&w(&[&[-1, 1, 2]]), 8, 200).unwrap();
    let certs = certificates(&v);
    assert!(certs.iter().all(|c| c.mismatch_degree <= 6));
    let d3 = certs
        .iter()
        .find(|c| c.candidate == GroupSpec::Duval3b { m: 1, l: 3 })
        .expect("(Z4/1;D3/Z3) is its own class");
    assert_eq!(d3.mismatch_degree, 2);
    assert_eq!((d3.group_coefficient, d3.target_coefficient), (3, 4));
}

#[test]
fn dim2_branch_series() {
    for rows in [vec![vec![-1, 1]], vec![vec![-2, 3]], vec![vec![-1, 0, 1], vec![0, -1, 2]]] {
        let m = WeightMatrix::from_rows(&rows).unwrap();
        let OrbifoldVerdict::Dim2Orbifold { target_n, .. } = check_orbifold(&m, 8, 10).unwrap() else {
            panic!("{rows:?}");
        };
        // (1 − t^{2N}) / ((1 − t^N)² (1 − t²)) by counting: invariants of C/Z_N
        let n = target_n as usize;
        let mut want = vec![0i64; 13];
        for a in 0..=12usize {
            for b in 0..=12 - a {
                if (a as i64 - b as i64).rem_euclid(n as i64) == 0 {
                    want[a + b] += 1;
                }
            }
        }
        assert_eq!(quotient_hilbert_series(&m, 12).unwrap().to_i64().unwrap(), want, "{rows:?}");
    }
}

fn verdict_fingerprint(v: &OrbifoldVerdict) -> String {
    match v {
        OrbifoldVerdict::NotRationalHomologyManifold { vertex_count, .. } => format!("nrhm {vertex_count}"),
        OrbifoldVerdict::Dim2Orbifold { target_n, .. } => format!("dim2 {target_n}"),
        OrbifoldVerdict::NoFiniteMatchUpToBound { certificates, .. } => {
            format!("none {}", serde_json::to_string(certificates).unwrap())
        }
        OrbifoldVerdict::CandidatesFound { candidates } => format!("cand {candidates:?}"),
        OrbifoldVerdict::PointQuotient => "point".into(),
    }
}

#[test]
fn verdict_invariance() {
    let cases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![-1, 1, 1]],
        vec![vec![-1, 1, 2]],
        vec![vec![-1, -1, 1, 1]],
        vec![vec![-1, 0, 1], vec![0, -1, 1]],
        vec![vec![-1, 1, 0, 1], vec![0, 0, -1, 1]],
        vec![vec![1, -1, 1, -1, 0, 0], vec![0, 0, 0, 0, 1, -1]],
    ];
    for rows in cases {
        let m = WeightMatrix::from_rows(&rows).unwrap();
        let base = verdict_fingerprint(&check_orbifold(&m, 6, 24).unwrap());
        let n = m.n();
        let rev: Vec<usize> = (0..n).rev().collect();
        let rot: Vec<usize> = (1..n).chain([0]).collect();
        for perm in [rev, rot] {
            let v = check_orbifold(&m.permute_columns(&perm), 6, 24).unwrap();
            assert_eq!(verdict_fingerprint(&v), base, "{rows:?} {perm:?}");
        }
        // negate the first row, then add it to the others
        let mut ops = rows.clone();
        ops[0] = ops[0].iter().map(|x| -x).collect();
        for i in 1..ops.len() {
            ops[i] = ops[i].iter().zip(&ops[0]).map(|(a, b)| a + 2 * b).collect();
        }
        let v = check_orbifold(&WeightMatrix::from_rows(&ops).unwrap(), 6, 24).unwrap();
        assert_eq!(verdict_fingerprint(&v), base, "{rows:?} -> {ops:?}");
    }
}

#[test]
fn report_for_the_first_matrix() {
    let r = paper_argument_report(&w(&[&[-1, 1, 1]])).unwrap();
    assert_eq!(r.target, vec![1, 0, 8, 0, 27, 0, 64, 0, 125]);
    assert_eq!((r.key_degree, r.key_coefficient), (2, 8));
    let ff2 = r.steps.iter().find(|s| s.name.contains("f=g=2")).unwrap();
    assert_eq!(ff2.max_dimension, 6);
    assert!(r.holds());
    let z4 = r.mismatches.iter().find(|m| m.name == "(Z4/1;D1/1)").unwrap();
    assert_eq!(z4.prefix[..5], [1, 2, 6, 10, 19]);
}

#[test]
fn report_for_the_second_matrix() {
    let r = paper_argument_report(&w(&[&[-1, 1, 2]])).unwrap();
    assert_eq!((r.key_degree, r.key_coefficient), (3, 6));
    let cubic = r.steps.iter().find(|s| s.degree == 3 && s.claimed_bound == 4).unwrap();
    assert_eq!(cubic.max_dimension, 4);
    assert!(r.holds());
    let m = r.mismatches.iter().find(|m| m.name == "(Z12/Z3;D1/1)").unwrap();
    assert_eq!(m.prefix[..4], [1, 0, 2, 4]);
    let m = r.mismatches.iter().find(|m| m.name == "(Z4/1;D3/Z3)").unwrap();
    assert_eq!((m.degree, m.group_coefficient, m.target_coefficient), (2, 3, 4));
    let m = r.mismatches.iter().find(|m| m.name == "(Z6/Z3;Z2/1)_1").unwrap();
    assert_eq!(m.prefix[..5], [1, 0, 4, 8, 9]);
}

#[test]
fn report_rejects_other_matrices() {
    assert_eq!(paper_argument_report(&w(&[&[-1, 1, 3]])), Err(ObstructionError::UnsupportedMatrix));
}

#[test]
fn verdict_json_round_trip() {
    let v = check_orbifold(&w(&[&[-1, 1, 2]]), 6, 12).unwrap();
    let s = serde_json::to_value(&v).unwrap();
    assert_eq!(s["verdict"], "no_finite_match_up_to_bound");
    let back: OrbifoldVerdict = serde_json::from_value(s).unwrap();
    assert_eq!(back, v);
    let v = check_orbifold(&w(&[&[-1, 2]]), 6, 12).unwrap();
    let back: OrbifoldVerdict = serde_json::from_value(serde_json::to_value(&v).unwrap()).unwrap();
    assert_eq!(back, v);
}
