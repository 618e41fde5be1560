//! Seeds, mutation, E/F matrices, c- and g-vector tracking, tropical
//! transformations and green-to-red searches.

mod path;
mod seed;

pub use path::{
    find_coreachable, find_green_to_red, green_to_red_check, phi, psi_matrix, Permutation,
    TrackedPath,
};
pub use seed::{extend_full_matrix, mutate_matrix, mutate_matrix_eps, rat, Rat, Seed, Sign};
