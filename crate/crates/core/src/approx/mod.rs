//! Lattice constructions: algebraic approximants, integral subspaces avoiding a variety,
//! and projections with height and distance bookkeeping.

mod approximant;
mod lll;
mod projection;
mod subspace;

pub use approximant::{best_approximant, 
    approximation_exponent, find_algebraic_approximant, irreducible_factor_at, ApproximantReport,
    ApproximantResult, ExponentCell, MIN_DIGITS,
};
pub use lll::{lll_reduce, norm_sq};
pub use projection::{
    distance_contraction, project, pullback_derivatives, pullback_section, ContractionReport, ProjectionReport,
    ProjectionSetup, PullbackDerivativeReport, PullbackReport,
};
pub use subspace::{
    enumerate_primitive, find_avoiding_subspace, find_avoiding_subspace_in, min_distance_to_sample, minors_gcd,
    AvoidOptions, AvoidingSubspace, AvoidingSubspaceReport, IntegralSubspace,
};
