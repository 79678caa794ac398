//! Benchmark simulation models.

pub mod discrete;
pub mod kuramoto;
pub mod ou;
pub mod toy;
