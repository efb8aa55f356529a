pub mod exact;
pub mod lattice;
pub mod weights;
pub mod invariants;
pub mod poisson;
pub mod duval;
pub mod molien;
pub mod obstruction;
pub mod cli;
