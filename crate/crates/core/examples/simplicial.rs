//! Effectiveness, the polytope P_A and the three simplicial criteria.

use toric_orbifold::exact::rat_to_string;
use toric_orbifold::weights::{cox_group, effectiveness_report, simplicial_check, WeightMatrix};

fn show(rows: &[Vec<i64>]) {
    let w = WeightMatrix::from_rows(rows).unwrap();
    let eff = effectiveness_report(&w);
    let rep = simplicial_check(&eff.reduced).unwrap();
    println!("{rows:?}");
    println!("  effective {} (rank {}, minors gcd {})", eff.effective, eff.rank, eff.minors_gcd);
    println!("  {} vertices in dimension {}", rep.vertex_count, rep.polytope.dimension);
    for v in &rep.polytope.vertices {
        println!("    ({})", v.iter().map(rat_to_string).collect::<Vec<_>>().join(", "));
    }
    println!("  simplicial {} (criteria agree: {})", rep.simplicial, rep.criteria_agree);
    if let Ok(g) = cox_group(&eff.reduced) {
        println!("  Cox group order {}", g.order);
    }
}

fn main() {
    show(&[vec![-1, 1, 2]]);
    show(&[vec![-2, 1, 1]]);
    show(&[vec![-1, -1, 1, 1]]);
    show(&[vec![1, -1, 1, -1, 0, 0], vec![0, 0, 0, 0, 1, -1]]);
    show(&[vec![2, 4, -2]]);
}
