//! Hilbert bases and quotient series for the circle actions [-1, 1, m].

use toric_orbifold::invariants::{gorenstein_fit, hilbert_basis_monomials, quotient_hilbert_series};
use toric_orbifold::weights::WeightMatrix;

fn main() {
    for m in 1..=4 {
        let w = WeightMatrix::row(&[-1, 1, m]);
        let hb = hilbert_basis_monomials(&w, (m + 2) as usize).unwrap();
        let names: Vec<String> = hb.generators.iter().map(|g| g.to_string()).collect();
        println!("[-1, 1, {m}]: {} generators (complete {})", names.len(), hb.complete);
        println!("  {}", names.join(", "));
        println!("  quotient series {}", quotient_hilbert_series(&w, 10).unwrap());
        let rf = gorenstein_fit(&w, 16).unwrap();
        println!("  = {rf}");
    }
}
