//! Quotients of real dimension 2: the data identifying them with C/Z_N and
//! the bracket table.

use toric_orbifold::exact::rat_to_string;
use toric_orbifold::invariants::dim2_data;
use toric_orbifold::poisson::verify_dim2_brackets;
use toric_orbifold::weights::WeightMatrix;

fn main() {
    for rows in [vec![vec![-1, 2]], vec![vec![-3, 2]], vec![vec![-1, 0, 2], vec![0, -3, 1]]] {
        let w = WeightMatrix::from_rows(&rows).unwrap();
        let d = dim2_data(&w).unwrap();
        println!("{rows:?}: N = {} (A = {}, M = {})", d.big_n, d.cal_a, d.cal_m);
        println!(
            "  alpha^2 = {}, beta = {}, B = {}, arrow ok {}",
            rat_to_string(&d.alpha_sq),
            rat_to_string(&d.beta),
            rat_to_string(&d.cal_b),
            d.verify_arrow()
        );
        for id in verify_dim2_brackets(&w).unwrap().identities {
            println!("  {id}");
        }
    }
}
