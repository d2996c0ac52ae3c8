//! Monotone Boolean functions as bit vectors, and exact counts of the
//! self-dual ones (`lambda_n`) by several
//! independent decompositions.
//!
//! The layer `D_n` of all monotone functions of `n` variables is built by
//! concatenating comparable pairs from `D_{n-1}`. Symmetry under variable
//! permutations reduces the outer loops of the counting methods to one
//! representative per orbit, weighted by the orbit size.

pub mod budget;
pub mod counting;
pub mod error;
pub mod intervals;
pub mod layer;
pub mod mbf;
pub mod orbits;
pub mod selfcheck;
pub mod store;

pub use budget::Budget;
pub use counting::{
    compute_lambda, lambda_any, lambda_plus2, lambda_plus3, lambda_plus4, lambda_plus4c, BaseSpace,
    LambdaResult, Method, LAMBDA_TABLE,
};
pub use error::{Error, Result};
pub use intervals::{build_upward_table, re_scan, IntervalCounter, IntervalTable};
pub use layer::{generate_layer, self_dual_brute, Layer, LayerStack};
pub use mbf::{is_monotone, Mbf};
pub use orbits::{classify, orbit_size, OrbitClass, SymmetricGroup, VariablePermutation};
