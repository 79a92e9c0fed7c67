//! Solvers and tooling for fair discrete means clustering: edit at most `k`
//! entries of a colored matrix so that it has at most `r` distinct rows and
//! every cluster of identical rows is color-balanced.
//!
//! The crate provides:
//! - the domain model (instances, solutions, edit graphs) and a verifier,
//! - two independent brute-force oracles,
//! - exact solvers for the large-fairlet regime (`c̃ > k`), for the `k + r`
//!   parameterization, and for binary matrices of bounded treewidth,
//! - a `(5 − 3/c̃)`-approximate solver based on color coding over solution
//!   templates, together with the constructive solution normalizer it rests on,
//! - instance generators, including the multicolored-clique reduction,
//! - file formats and a small CLI (`fdmc`).
//!
//! See the `examples/` directory for runnable entry points per capability.

pub mod assignment;
pub mod edit_graph;
pub mod error;
pub mod instance;
pub mod oracle;
pub mod solution;

pub mod approx;
pub mod generators;
pub mod k_plus_r;
pub mod large_fairlet;
pub mod reduction;
pub mod treewidth;

pub mod cli;
pub mod io;

pub use edit_graph::{build_edit_graph, reduce, EditGraph, ReducedEditGraph};
pub use error::{Error, Result};
pub use instance::{fairlet_size, hamming, Color, Entry, Instance, RowType};
pub use oracle::{solve_by_edits, solve_by_partitions, OracleResult, Status};
pub use solution::{majority_recenter, verify_solution, Solution, Verdict, Violation};
