//! Targeted least-cardinality candidate keys over functional dependencies.
//!
//! Given dependencies over attributes `0..n`, a target set `T` and a round
//! budget `D`, find a smallest `X` whose `D`-round closure contains `T`.

pub mod bitset;
pub mod error;
pub mod exec;
pub mod fd;
pub mod format;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod redblue;
pub mod rounding;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use exec::Execution;
pub use fd::{normalize, Attr, AttrSet, Fd, FdSet, RawFd, Stats};
pub use format::{parse_instance, write_instance};
pub use generate::{gen_gap_instance, gen_random_instance, gen_vc_instance, RandomParams};
pub use graph::{
    build_fd_graph, greedy_set_cover, scc_condense, solve_simple, CondensedGraph, FdGraph,
};
pub use instance::{max_rounds, Instance, Symbols};
pub use lp::{
    build_layered_lp, build_one_round_lp, export_lp, lp_lower_bound, solve_lp, LpModel, LpSolution,
};
pub use oracle::{exact_rbsc, exact_rbsc_cost, exact_tcand};
pub use redblue::{rbsc_greedy, rbsc_to_tcand, tcand_to_rbsc, RbscInstance, RbscSet, RbscSolution};
pub use rounding::{
    equitable_coloring, round_deterministic, round_randomized, round_randomized_d, Coloring, Graph,
};
