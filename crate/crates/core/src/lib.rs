//! Clifford+T resource estimation and HPC/QC dispatch for parameterized
//! quantum circuits.

pub mod circuit;
pub mod transpile;
pub mod stabilizer;
pub mod resources;
pub mod encoding;
pub mod advisor;
pub mod random;
pub mod bench;
pub mod config;
