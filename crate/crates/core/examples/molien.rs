//! Molien series on C^2 + conj(C^2) for the named subgroups of U_2, with the
//! cyclic and binary dihedral closed forms.

use toric_orbifold::duval::{generate, GroupSpec};
use toric_orbifold::molien::{cyclic_closed_form, dihedral_closed_form, expand_to_u64, molien_series};

fn main() {
    let groups = [
        GroupSpec::CyclicSu2 { n: 2 },
        GroupSpec::CyclicSu2 { n: 3 },
        GroupSpec::BinaryDihedral { n: 2 },
        GroupSpec::BinaryTetrahedral,
        GroupSpec::BinaryOctahedral,
        GroupSpec::BinaryIcosahedral,
        GroupSpec::Duval3b { m: 1, l: 1 },
    ];
    for spec in groups {
        let g = generate(&spec).unwrap();
        let r = molien_series(&g, 12).unwrap();
        println!("{spec:>14} |G| = {:>3}: {:?} (drift {:.1e})", r.group_order, r.coefficients, r.drift);
    }
    println!("Z5 closed form: {} -> {:?}", cyclic_closed_form(5), expand_to_u64(&cyclic_closed_form(5), 12));
    println!("D3 closed form: {:?}", expand_to_u64(&dihedral_closed_form(3), 12));
}
