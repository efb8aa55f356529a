use std::collections::BTreeSet;

use num_complex::Complex64;
use proptest::prelude::*;
use toric_orbifold::duval::*;

fn gen(spec: GroupSpec) -> FiniteSubgroup {
    generate(&spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

fn sqrt_minus_one_b() -> U2Element {
    U2Element::b().scale(Complex64::new(0.0, 1.0))
}

#[test]
fn generate_examples() {
    assert_eq!(gen(GroupSpec::CyclicSu2 { n: 4 }).order, 4);
    assert_eq!(gen(GroupSpec::BinaryDihedral { n: 2 }).order, 8);
    let g = gen(GroupSpec::from_generators(&[sqrt_minus_one_b()]));
    assert_eq!(g.order, 2);
    let nontrivial: Vec<_> = g.elements.iter().filter(|e| e.distance(&U2Element::identity()) > 1e-9).collect();
    assert_eq!(nontrivial.len(), 1);
    assert!(nontrivial[0].distance(&sqrt_minus_one_b()) < 1e-9);
}

#[test]
fn product_examples() {
    let g = duval_product_group(&GroupSpec::Duval1 { m: 3, n: 1, f: 3, g: 1, d: 1 }).unwrap();
    assert_eq!(g.order, 3);
    let scalar = gen(GroupSpec::CyclicScalar { n: 3 });
    assert!(g.is_subset_of(&scalar) && scalar.is_subset_of(&g));
    let g = duval_product_group(&GroupSpec::Duval3b { m: 1, l: 1 }).unwrap();
    assert_eq!(g.order, 2);
    let g = duval_product_group(&GroupSpec::Duval1 { m: 1, n: 1, f: 2, g: 2, d: 1 }).unwrap();
    let pm = gen(GroupSpec::CyclicSu2 { n: 2 });
    assert_eq!(g.order, 2);
    assert!(g.is_subset_of(&pm) && pm.is_subset_of(&g));
    assert!(duval_product_group(&GroupSpec::BinaryTetrahedral).is_err());
}

#[test]
fn exceptional_groups() {
    for (spec, order) in [
        (GroupSpec::BinaryTetrahedral, 24),
        (GroupSpec::BinaryOctahedral, 48),
        (GroupSpec::BinaryIcosahedral, 120),
    ] {
        let g = gen(spec);
        assert_eq!(g.order, order);
        assert!(g.is_closed());
        assert!(g.elements.iter().all(|e| e.is_unitary() && (e.det() - 1.0).norm() < 1e-9));
    }
    let t = gen(GroupSpec::BinaryTetrahedral);
    assert!(gen(GroupSpec::CyclicSu2 { n: 4 }).is_subset_of(&t));
    let i = gen(GroupSpec::BinaryIcosahedral);
    let z10 = i.elements.iter().find(|e| e.order(200) == Some(10)).expect("order 10 element");
    let sub = closure(&[*z10]).unwrap();
    assert_eq!(fingerprint(&sub), gen(GroupSpec::CyclicSu2 { n: 10 }).fingerprint());
    assert!(gen(GroupSpec::BinaryTetrahedral).is_subset_of(&gen(GroupSpec::BinaryOctahedral)));
}

#[test]
fn binary_dihedral_orders() {
    for n in 1..=12 {
        let g = gen(GroupSpec::BinaryDihedral { n });
        assert_eq!(g.order as u64, 4 * n);
        assert!(g.is_closed());
    }
}

#[test]
fn enumeration_examples() {
    let classes = enumerate_duval(2).unwrap();
    assert!(classes.iter().any(|c| c.order == 1));
    for spec in [
        GroupSpec::CyclicScalar { n: 2 },
        GroupSpec::CyclicSu2 { n: 2 },
        GroupSpec::Duval3b { m: 1, l: 1 },
    ] {
        assert!(classes.iter().any(|c| c.has_alias(&spec)), "{spec}");
    }
    // ±I is scalar and special unitary at once
    let pm = classes.iter().find(|c| c.has_alias(&GroupSpec::CyclicSu2 { n: 2 })).unwrap();
    assert!(pm.has_alias(&GroupSpec::CyclicScalar { n: 2 }));

    let classes = enumerate_duval(24).unwrap();
    assert!(classes.iter().any(|c| c.has_alias(&GroupSpec::BinaryTetrahedral)));
    let classes = enumerate_duval(3).unwrap();
    let c = classes
        .iter()
        .find(|c| c.has_alias(&GroupSpec::Duval1 { m: 3, n: 1, f: 3, g: 1, d: 1 }))
        .unwrap();
    assert_eq!(c.order, 3);
    assert!(matches!(enumerate_duval(2001), Err(DuvalError::Budget(2001))));
}

#[test]
fn enumeration_classes_are_consistent() {
    let classes = enumerate_duval(48).unwrap();
    let mut seen = BTreeSet::new();
    for c in &classes {
        let g = c.group().unwrap();
        assert_eq!(g.order as u64, c.order, "{}", c.spec);
        assert!(g.is_closed(), "{}", c.spec);
        assert!(g.elements.iter().all(|e| e.is_unitary()));
        assert!(seen.insert(g.fingerprint()), "duplicate class {}", c.spec);
        for alias in &c.aliases {
            let h = gen(alias.clone());
            assert_eq!(h.fingerprint(), g.fingerprint(), "{} vs {}", alias, c.spec);
        }
        if let ClassKind::Diagonal { lattice } = c.kind {
            assert_eq!(fingerprint(&lattice.elements()), g.fingerprint(), "{}", c.spec);
        }
    }
    // the named SU₂ subgroups are all present up to order 48
    for n in 1..=12 {
        assert!(classes.iter().any(|c| c.has_alias(&GroupSpec::BinaryDihedral { n })), "D{n}");
    }
    for n in 1..=48 {
        assert!(classes.iter().any(|c| c.has_alias(&GroupSpec::CyclicSu2 { n })));
        assert!(classes.iter().any(|c| c.has_alias(&GroupSpec::CyclicScalar { n })));
    }
}

#[test]
fn quotient_orders_match_formula() {
    // |G| = |L| |R_K| / 2
    for m in 1..=3u64 {
        for l in [1u64, 3, 5] {
            let mut specs = vec![GroupSpec::Duval2 { m, l }, GroupSpec::Duval4 { m, l }];
            if m % 2 == 1 {
                specs.push(GroupSpec::Duval3 { m, l });
                specs.push(GroupSpec::Duval3b { m, l });
            }
            for spec in specs {
                let qd = quotient_data(&spec).unwrap();
                let g = gen(spec.clone());
                assert_eq!(g.order as u64, spec.expected_order().unwrap(), "{spec}");
                assert!(g.is_closed(), "{spec}");
                let rk = gen(qd.rk.clone()).order as u64;
                assert_eq!(2 * g.order as u64, qd.l_order * rk, "{spec}");
            }
        }
        for spec in [
            GroupSpec::Duval5 { m },
            GroupSpec::Duval6 { m },
            GroupSpec::Duval7 { m },
            GroupSpec::Duval8 { m },
        ] {
            let g = gen(spec.clone());
            assert!(g.is_closed(), "{spec}");
            assert_eq!(g.order as u64, spec.expected_order().unwrap());
        }
    }
    assert_eq!(gen(GroupSpec::Duval9 { m: 1 }).order, 120);
}

#[test]
fn invalid_params_rejected() {
    assert!(matches!(generate(&GroupSpec::CyclicSu2 { n: 0 }), Err(DuvalError::InvalidParams(_))));
    assert!(matches!(generate(&GroupSpec::Duval3 { m: 2, l: 3 }), Err(DuvalError::InvalidParams(_))));
}

#[test]
fn json_tags() {
    let spec = GroupSpec::Duval1 { m: 3, n: 1, f: 3, g: 1, d: 1 };
    let v = serde_json::to_value(&spec).unwrap();
    assert_eq!(v, serde_json::json!({"type": "duval1", "m": 3, "n": 1, "f": 3, "g": 1, "d": 1}));
    let back: GroupSpec = serde_json::from_value(v).unwrap();
    assert_eq!(back, spec);
    assert_eq!(serde_json::to_value(GroupSpec::CyclicSu2 { n: 3 }).unwrap()["type"], "cyclic_su2");
}

#[test]
fn display_names() {
    assert_eq!(GroupSpec::CyclicSu2 { n: 3 }.to_string(), "Z3<SU2");
    assert_eq!(GroupSpec::CyclicScalar { n: 2 }.to_string(), "Z2<U1");
    assert_eq!(GroupSpec::BinaryDihedral { n: 2 }.to_string(), "D2");
    assert_eq!(GroupSpec::BinaryIcosahedral.to_string(), "I120");
    assert_eq!(GroupSpec::Duval1 { m: 3, n: 1, f: 3, g: 1, d: 1 }.to_string(), "(Z6/Z3;Z2/1)_1");
    assert_eq!(GroupSpec::Duval3b { m: 1, l: 1 }.to_string(), "(Z4/1;D1/1)");
    assert_eq!(GroupSpec::Duval5 { m: 1 }.to_string(), "(Z2/Z2;T24/T24)");
}

/// All points of the subgroup of (Z/D)² generated by `gens`, by closure.
fn lattice_points(d: u64, gens: &[(i64, i64)]) -> BTreeSet<(u64, u64)> {
    let di = d as i64;
    let mut set = BTreeSet::from([(0u64, 0u64)]);
    let mut frontier = vec![(0i64, 0i64)];
    while let Some((x, y)) = frontier.pop() {
        for &(a, b) in gens {
            let p = ((x + a).rem_euclid(di), (y + b).rem_euclid(di));
            if set.insert((p.0 as u64, p.1 as u64)) {
                frontier.push(p);
            }
        }
    }
    set
}

/// Count invariant monomials z^a z̄^b of each degree directly.
fn brute_molien(points: &BTreeSet<(u64, u64)>, d: u64, k: usize) -> Vec<u64> {
    let mut out = vec![0u64; k + 1];
    let di = d as i64;
    for a1 in 0..=k {
        for a2 in 0..=k - a1 {
            for b1 in 0..=k - a1 - a2 {
                for b2 in 0..=k - a1 - a2 - b1 {
                    let u = a1 as i64 - b1 as i64;
                    let v = a2 as i64 - b2 as i64;
                    if points.iter().all(|&(x, y)| (x as i64 * u + y as i64 * v).rem_euclid(di) == 0) {
                        out[a1 + a2 + b1 + b2] += 1;
                    }
                }
            }
        }
    }
    out
}

#[test]
fn type1_diagonal_matches_generated_group() {
    let classes = enumerate_duval(30).unwrap();
    for c in &classes {
        for spec in std::iter::once(&c.spec).chain(&c.aliases) {
            if let GroupSpec::Duval1 { m, n, f, d, .. } = *spec {
                let lat = type1_diagonal(m, n, f, d);
                assert_eq!(fingerprint(&lat.elements()), gen(spec.clone()).fingerprint(), "{spec}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn diagonal_group_against_brute_force(
        d in 1u64..=12,
        gens in prop::collection::vec((0i64..12, 0i64..12), 1..=2),
    ) {
        let g = DiagonalGroup::from_generators(d, &gens);
        let pts = lattice_points(d, &gens);
        // points are reported in reduced denominators, rescale before comparing
        let scale = d / g.d;
        let got: BTreeSet<(u64, u64)> = g.points().into_iter().map(|(x, y)| (x * scale, y * scale)).collect();
        prop_assert_eq!(&got, &pts);
        prop_assert_eq!(g.order() as usize, pts.len());
        prop_assert_eq!(g.scalar_subgroup_order() as usize, pts.iter().filter(|(x, y)| x == y).count());
        prop_assert_eq!(g.su2_subgroup_order() as usize, pts.iter().filter(|(x, y)| (x + y) % d == 0).count());
        prop_assert_eq!(g.molien_coefficients(6), brute_molien(&pts, d, 6));
        prop_assert_eq!(g.canonical(), g.swapped().canonical());
        prop_assert_eq!(fingerprint(&g.elements()), fingerprint(&g.swapped().elements()));
    }

    #[test]
    fn closure_of_named_generators(n in 1u64..=16, k in 1u64..=16) {
        // the subgroup generated by the k-th power of a generator of Z_n
        let g = gen(GroupSpec::CyclicSu2 { n });
        let gen_el = U2Element::diag(root_of_unity(1, n), root_of_unity(-1, n));
        let sub = closure(&[gen_el.pow(k)]).unwrap();
        prop_assert_eq!(sub.len() as u64, n / num_integer::gcd(n, k));
        let sub = FiniteSubgroup { order: sub.len(), elements: sub, spec: GroupSpec::CyclicSu2 { n: 0 } };
        prop_assert!(sub.is_subset_of(&g));
        prop_assert!(sub.is_closed());
    }
}
