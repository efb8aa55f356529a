//! Conjugacy classes of finite subgroups of U_2 up to a given order.

use toric_orbifold::duval::enumerate_duval;

fn main() {
    let cap = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);
    let classes = enumerate_duval(cap).unwrap();
    println!("{} classes of order <= {cap}", classes.len());
    for c in &classes {
        let aliases: Vec<String> = c.aliases.iter().map(|a| a.to_string()).collect();
        let kind = if c.is_diagonal() { "abelian" } else { "nonabelian" };
        println!("{:>4} {:<24} {kind:<10} {}", c.order, c.spec.to_string(), aliases.join(" "));
    }
}
