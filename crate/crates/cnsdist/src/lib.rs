//! Common-neighbor similarity (CNS) distributions of complex networks.
//!
//! The number of common neighbors of a set of nodes is a random variable
//! once the network itself is random. This crate computes its distribution
//! two ways and lets you compare them:
//!
//! - **analytically**, from a model's link-probability structure via
//!   generating functions ([`engine`]),
//! - **empirically**, by counting over the pairs of a concrete graph.
//!
//! Splitting node pairs into connected and disconnected classes yields
//! class-conditional distributions, from which theoretical link-prediction
//! accuracy (AUC and precision) follows without simulation ([`eval`]).
//!
//! Supported models: regular ring lattices, Erdős–Rényi, Watts–Strogatz
//! and Newman–Watts small worlds, Barabási–Albert, and a unified
//! two-parameter family covering the homogeneous cases ([`models`]).
//!
//! See the `examples/` directory for end-to-end walkthroughs; the
//! `cnsdist` binary exposes the same operations on the command line.

pub mod cli;
pub mod engine;
pub mod eval;
pub mod graph;
pub mod indices;
pub mod io;
pub mod models;
pub mod pmf;

pub use engine::{
    class_distributions_analytic, empirical_class_counts, empirical_class_distributions,
    er_closed_form, er_poisson_approx, set_cns_distribution, AnalyticMode,
    ClassCondDistributions, EmpiricalClassCounts, EngineError,
};
pub use eval::{
    auc_experimental, auc_theoretical, class_score_distributions, evaluate, median_distance,
    precision_experimental, precision_theoretical, split, EvalError, EvalMode, EvalOptions,
    EvalReport, IndexReport, IndexSpec, MedianDistance, PrecisionTheory, SplitSpec,
};
pub use graph::{Graph, GraphError, LoadedGraph, NodeSet, ParseOptions};
pub use indices::{
    katz_connected_shift, score_aa, score_cn, score_ra, IndexError, IndexKind, PairScore,
    ScoreTable, DEFAULT_PHI_KATZ, DEFAULT_PHI_LP,
};
pub use io::{
    artifact_json, distributions_to_json, read_pmf_csv, render_eval_table, write_edge_list,
    write_label_map_csv, write_pmf_csv, write_score_table_csv, IoError, FORMAT_VERSION,
};
pub use models::{BaModel, ModelError, ModelKind, ProbModel, RingModel};
pub use pmf::{convolve, poisson_binomial, DistError, Pmf};
