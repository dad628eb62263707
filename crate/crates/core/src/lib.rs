//! Exact engine for rank-2 generalized cluster scattering diagrams.
//!
//! Wall-functions are computed two ways: by summing weights of tight gradings
//! on maximal Dyck paths, and by order-by-order consistency completion. On top
//! of the diagrams the crate builds broken lines, theta functions, greedy
//! elements, cluster variables and Gromov-Witten generating functions.

pub mod coeffring;
pub mod data;
pub mod dyck;
pub mod error;
pub mod expr;
pub mod grading;
pub mod gw;
pub mod json;
pub mod scattering;
pub mod thetagreedy;

pub use error::{Error, Result};
