//! Subgraph isomorphism as an exact linear program.
//!
//! The crate decides whether an input digraph contains a subgraph
//! isomorphic to a pattern digraph by building a polynomial-size linear
//! system over relabeling variables and testing its feasibility in exact
//! rational arithmetic:
//!
//! 1. [`graph`] — the multi-digraph data model, file formats, padding,
//!    relabeling and seeded random generation;
//! 2. [`compat`] — the compatibility matrix of an instance, its solution
//!    grids, and an optional path-consistency depletion pass;
//! 3. [`model`] — the base equality system over the canonical variable
//!    layout, the zero constraints an instance induces, center and grid
//!    points, and LP-file emission;
//! 4. [`solve`] — exact two-phase simplex (Bland's rule, arbitrary
//!    precision) returning feasible points or Farkas infeasibility
//!    witnesses, both independently checkable;
//! 5. [`oracle`] — brute-force ground truth for subgraph isomorphism and
//!    CNF satisfiability;
//! 6. [`reductions`] — the traveling-salesman linear program and the
//!    SAT-to-subgraph-isomorphism encoding;
//! 7. [`harness`] — the worked-example suite, the randomized LP-vs-oracle
//!    comparison and the TSP/SAT report pipelines behind the CLI.
//!
//! The solver proves one direction outright (an embedding yields a feasible
//! 0/1 point), while the converse — feasibility implying an embedding — is
//! what the comparison harness audits empirically; disagreements in that
//! direction are first-class report artifacts, not errors.

pub mod compat;
pub mod error;
pub mod graph;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod rat;
pub mod reductions;
pub mod solve;

pub use error::{Error, Result};
pub use rat::Rat;
