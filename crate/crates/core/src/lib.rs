//! Bounded-cost minimum-diameter edge addition: exact layered shortest paths,
//! greedy clustering, a subset dynamic program giving a `(1, 4)`-approximation,
//! polynomial unit-cost heuristics, brute-force oracles, and instance
//! generators.

pub mod bounded_paths;
pub mod cli;
pub mod clustering;
pub mod format;
pub mod fpt;
pub mod graph;
pub mod oracle;
pub mod reductions;
pub mod unit_cost;
