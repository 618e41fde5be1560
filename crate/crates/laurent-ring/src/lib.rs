//! Exact sparse Laurent polynomials, dominance-order degrees, truncated
//! series and the transport of elements between seeds.

mod cluster;
mod order;
mod poly;
mod series;

pub use cluster::{
    cluster_variables_along, codeg_deg_swap_check, support_dimension, transport, y_variable,
};
pub use order::{
    bidegree_of, codegree, degree, is_bipointed, is_copointed, is_pointed, maximal_degrees,
    maximal_in, minimal_degrees, minimal_in, Bidegree,
};
pub use poly::LaurentPoly;
pub use series::{budget, DegreeCert, TruncatedSeries, YSeries};
