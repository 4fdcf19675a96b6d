pub mod cli;
pub mod cover;
pub mod cyclotomic;
pub mod dihedral;
pub mod group;
pub mod hurwitz;
pub mod local_system;
pub mod rep;
