//! Rank-2 cluster scattering diagrams: consistent completion, path-ordered
//! wall crossing, theta functions in cluster chambers and opposite diagrams.

mod diagram;
mod theta;

pub use diagram::{
    cmp_angle, complete, incoming_diagram, kappa, opposite_diagram, primitive, Crossing,
    Direction, PathOp, ScatterDiagram2, Wall2,
};
pub use theta::{cluster_chambers, theta, theta_with_depth, Chamber, CHAMBER_DEPTH, C_MINUS, C_PLUS};
