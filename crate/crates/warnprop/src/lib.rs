//! Warning Propagation on planted random 3-SAT.
//!
//! The crate covers the full pipeline: sample a planted instance, run the
//! randomized Warning Propagation message-passing engine until the
//! clause-to-variable warnings stop changing, simplify the formula by the
//! extracted partial assignment, and satisfy the residual components (trees
//! and unicyclic components in linear time). Alongside the solver there are
//! runnable diagnostics: occurrence/support statistics, the stable/violated
//! variable classification and the iterative core construction, and an exact
//! small-ring oracle plus Monte Carlo simulator for the cyclic copying
//! process that governs message dynamics on free cycles.
//!
//! Single runs are strictly sequential (the within-pass feedback of the
//! engine is load-bearing); independent trials, replicates, and experiment
//! grid cells are data-parallel and run on rayon when the `parallel` feature
//! (default) is enabled.

pub mod analysis;
pub mod cycle;
pub mod factor_graph;
pub mod formula;
pub mod generator;
pub mod harness;
pub mod residual;
pub mod seeds;
pub mod wp;

pub use formula::{Assignment, Clause, Formula, Literal, PartialAssignment, Ternary, Variable};
