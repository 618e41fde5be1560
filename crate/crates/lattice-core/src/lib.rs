//! Integer and rational linear algebra on exponent lattices: dominance order
//! solving, finite intervals and unimodular inverses.

mod bigmat;
mod dominance;
mod error;
mod mat;
mod vec;

pub use bigmat::BigMat;
pub use dominance::{interval, solve_dominance, Dominance};
pub use error::{Error, Result};
pub use mat::{int_inverse, row_reduce, IntMat, Q};
pub use vec::{ExpVec, UfVec};
