//! Points, charts and distances on projective space.

mod chart;
mod cycle;
mod distance;
mod point;

pub use chart::Chart;
pub use cycle::{
    common_precision, cycle_distance, cycle_distance_in, cycle_log_distance, Component, ComponentFile, Cycle,
};
pub use distance::{
    algebraic_distance, derivated_algebraic_distance, derivated_algebraic_distance_in, fs_distance,
    fs_distance_float, log_fs_distance, orthonormal_basis, point_subspace_distance, point_subspace_distance_float,
};
pub use point::{ExactCoords, PointFile, ProjectivePoint, MAX_FIELD_DEGREE};
