//! Fixed points of monotone functions on integer grids.
//!
//! `F: [n1] x .. x [nd] -> same grid` is monotone when `x <= y` (componentwise)
//! implies `F(x) <= F(y)`; Tarski's theorem then guarantees a fixed point. This
//! crate finds one with few evaluations of `F`:
//!
//! - [`levelset::solve`]: levelset search for `d = 3`, `O(log^2 N)` queries;
//! - [`baseline::dqy_solve`]: recursive binary search, `O(log^d N)` queries;
//! - [`baseline::brute_solve`]: exhaustive scan.
//!
//! All evaluations go through [`oracle::CountedOracle`], which caches, counts
//! and optionally records them.

pub mod baseline;
pub mod error;
pub mod lattice;
pub mod levelset;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result, Violation, ViolationReport};
pub use lattice::{GridBox, LabelSet, Point};
pub use levelset::{solve, solve_with, LevelOutcome, SolveOptions, SolveReport};
pub use oracle::{CountedOracle, Instance, Phase};
pub use rng::SplitMix64;
