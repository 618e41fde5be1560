//! Support dimensions, deformation factors, pointed families, dominance-order
//! decomposition and basis-candidate verification.

mod decompose;
mod family;
mod support;
mod verify;

pub use decompose::{decomposition_seed_independence, dominance_decompose, reconstruct, DecompResult};
pub use family::{
    deformed_family, element, ClusterMonomialFamily, DeformedFamily, KroneckerGenericFamily,
    OverrideFamily, PointedFamily, TransportedFamily,
};
pub use support::{
    bidegree_interval, deformation_factor, is_compatibly_pointed, reduced_paths,
    support_dimension_of_degree, Coreach, Scope, Tri,
};
pub use verify::{verify_basis_candidate, window_points, DegreeRecord, VerifyOptions, VerifyReport};
