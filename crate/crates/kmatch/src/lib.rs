//! Perfect k-matchings on finite multigraphs with loops: decision,
//! construction, and independently verifiable certificates.
//!
//! A perfect k-matching is an edge-weight assignment f: E -> {0,...,k}
//! whose incident weight sum is exactly k at every vertex (a loop's weight
//! counts twice). The solver picks one of three reduction routes by k:
//!
//! * k = 1 - maximum matching, directly (blossom algorithm);
//! * even k - a perfect 2-matching found through the bipartite split
//!   graph, scaled by k/2;
//! * odd k >= 3 - a k-factor of the graph with every edge replaced by k
//!   parallel copies, found through the classical factor gadget.
//!
//! Infeasible instances come with a violator set that re-verifies on its
//! own, and a brute-force [`oracle`] provides ground truth at small sizes.
//! See the `examples/` directory for runnable walkthroughs of each
//! capability, or use the `kmatch` binary for the file-based pipeline.

pub mod certificates;
pub mod cli;
pub mod generate;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod solver;
pub mod transforms;

pub use certificates::{
    eval_delta, eval_even, eval_odd, eval_tutte, find_violator, verify_certificate, Certificate,
    DeltaReport,
};
pub use graph::{ComponentSummary, EdgeRecord, GraphError, Multigraph, VertexSet};
pub use matching::{bipartite_max_matching, is_perfect, max_matching, HallWitness, Matching};
pub use oracle::{oracle_kfactor, oracle_solve, OracleResult, DEFAULT_WORK_BUDGET};
pub use solver::{
    check_regular_corollary, solve, verify_perfect, vertex_load, Outcome, RegularCheck, Route,
    SolveOptions, SolveReport, WeightFunction,
};
pub use transforms::{
    factor_gadget, multiply_edges, normalize_two_matching, recover_factor, split_bipartite,
    two_matching_from_split, FactorSelection, GadgetMap, MultipliedGraph, SplitGraph,
    TwoFactorDecomposition,
};
