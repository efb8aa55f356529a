//! Hermite and Smith forms, kernel lattices and minors on small matrices.

use toric_orbifold::lattice::{integer_row_reduce, kernel_lattice_basis, minors_gcd, smith_normal_form, IntMatrix};

fn main() {
    let a = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 2, 2]]).unwrap();
    println!("A = {:?}", a.to_i64_rows());
    println!("gcd of 2x2 minors: {}", minors_gcd(&a, 2).unwrap());

    let (u, r) = integer_row_reduce(&a);
    println!("U = {:?}, UA = {:?}", u.to_i64_rows(), r.to_i64_rows());

    let s = smith_normal_form(&a);
    println!("Smith diagonal: {:?}", s.diagonal().iter().map(|d| d.to_string()).collect::<Vec<_>>());

    for w in [vec![-1i64, 1, 1], vec![-2, 1, 1]] {
        let k = kernel_lattice_basis(&IntMatrix::from_rows(&[w.clone()]).unwrap());
        println!("kernel of {w:?}: {:?}", k.to_i64_rows());
    }
}
