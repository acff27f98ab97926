pub mod cli;
pub mod cones;
pub mod detvar;
pub mod lattice;
pub mod polynom;
pub mod spaces;
