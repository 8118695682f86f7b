pub mod cli;
pub mod compiler;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod pulse;
pub mod schedule_file;
pub mod spin_system;
