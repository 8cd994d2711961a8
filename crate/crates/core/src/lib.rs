//! Exact computations for conditionally intersecting set families: d-cluster detection,
//! matching numbers, multigraph Turán problems, the extremal constructions S and L1 to L5,
//! and exact values of f(n,k,d,ν) and g(n,k,d,t) on small instances.

pub mod bits;
pub mod constructions;
pub mod error;
pub mod family;
pub mod multigraph;
pub mod search;

pub use constructions::{
    bound_report, construct_l1, construct_l2, construct_l3, construct_l3_from, construct_l4, construct_l5, construct_s,
    BoundReport, ConstructionParams, Layout,
};
pub use error::{Error, Result};
pub use family::{
    find_d_cluster, is_d_cluster_free, is_star, is_t_wise_intersecting, link, matching_number,
    matching_number_with_budget, shadow, ClusterWitness, MatchingWitness, SetFamily,
};
pub use multigraph::{
    contains_tight_path, count_pattern_copies, is_design, is_pattern_free, DesignParams, ForbiddenPattern, Freeness,
    Multigraph,
};
pub use search::{
    compute_f_exact, compute_g_exact, density_sequence, turan_multigraph, turan_simple, turan_tight_path,
    DensityPoint, DensitySequence, SearchConfig, SearchResult, SearchStats, Status, Value, Witness,
};
