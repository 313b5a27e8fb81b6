//! Exact generating functions of the nonnegative integer solutions of
//! linear constraint systems.

pub mod cli;
pub mod families;
pub mod gfalg;
pub mod guidelines;
pub mod oracle;
pub mod series;
pub mod solver;
pub mod system;
pub mod verify;
