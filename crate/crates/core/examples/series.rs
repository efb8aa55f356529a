//! Expands the paper's rational functions and recovers a numerator from a
//! truncated series.

use toric_orbifold::exact::{palindromic, rational_fit, rf_equal, series_expand, IntPoly, RationalFunctionProd, TruncatedSeries};

fn main() {
    // (1 + 4t² + t⁴)/(1 − t²)⁴ = Σ (n+1)³ t^{2n}
    let rf = RationalFunctionProd::new(IntPoly::from_i64(&[1, 0, 4, 0, 1]), &[(2, 4)]);
    println!("{rf}");
    println!("  = {}", series_expand(&rf, 12));

    let a = RationalFunctionProd::new(IntPoly::from_terms(&[(0, 1), (4, -1)]), &[(2, 3)]);
    let b = RationalFunctionProd::new(IntPoly::from_i64(&[1, 0, 1]), &[(2, 2)]);
    println!("{a} == {b}: {}", rf_equal(&a, &b));

    let s = TruncatedSeries::from_ints(&[1, 0, 4, 6, 9, 16, 26, 30]);
    let q = rational_fit(&s, &[(2, 2), (3, 2)], 6).expect("fits");
    println!("numerator over (1-t^2)^2 (1-t^3)^2: {q}, palindromic {}", palindromic(&q));
}
