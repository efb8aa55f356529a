//! Orbifold verdicts and the bounded exclusion for the two circle actions
//! whose quotients are not finite quotients.

use toric_orbifold::obstruction::{certificate_summary, check_orbifold, paper_argument_report, OrbifoldVerdict};
use toric_orbifold::weights::WeightMatrix;

fn main() {
    let cap = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(120);
    for rows in [vec![vec![-1, 2]], vec![vec![-1, -1, 1, 1]], vec![vec![1, 1]]] {
        let v = check_orbifold(&WeightMatrix::from_rows(&rows).unwrap(), 8, cap).unwrap();
        println!("{rows:?}: {}", v.name());
    }
    for m in [1, 2] {
        let w = WeightMatrix::row(&[-1, 1, m]);
        let v = check_orbifold(&w, 8, cap).unwrap();
        println!("[-1, 1, {m}] up to order {cap}: {}", v.name());
        if let OrbifoldVerdict::NoFiniteMatchUpToBound { certificates, .. } = &v {
            for (family, degree, pruned, n) in certificate_summary(certificates) {
                println!("  {family:<14} t^{degree} {:<8} {n}", if pruned { "pruned" } else { "direct" });
            }
        }
        let report = paper_argument_report(&w).unwrap();
        println!("  key coefficient t^{} = {}", report.key_degree, report.key_coefficient);
        for s in &report.steps {
            println!("  {} : {} cases, max {} (bound {}) {}", s.name, s.cases, s.max_dimension, s.claimed_bound, s.holds);
        }
        for x in &report.mismatches {
            println!("  {} t^{}: {} vs {}", x.name, x.degree, x.group_coefficient, x.target_coefficient);
        }
    }
}
