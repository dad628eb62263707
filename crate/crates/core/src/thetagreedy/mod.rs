//! Broken lines, theta functions, greedy elements and the rank-2 cluster
//! recursion.

mod blcg;
mod broken;
mod greedy;
mod laurent;

pub use blcg::{bl_cg_count, bl_cg_count_check, BlCgCount};
pub use broken::{
    default_endpoint, enumerate_broken_lines, generic_endpoint, point, theta_function, Bend,
    BrokenLine, BrokenLineQuery, Point,
};
pub use greedy::{
    expand_in_greedy_basis, greedy_element, ClusterSeed, ClusterVariable, GreedyBasis,
};
pub use laurent::{laurent_div, laurent_monomial, Laurent, PointedLaurent};
