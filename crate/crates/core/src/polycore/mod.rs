//! Homogeneous polynomials with exact coefficients and their norms.

mod io;
mod norms;
mod poly;

pub use io::{PolynomialFile, TermFile};
pub use norms::{
    harmonic, l2_norm, l2_norm_sq, log_l2_norm, log_l2_norm_float, mahler_integral, mahler_integral_with,
    monomial_norm_sq, monte_carlo_mean, product_norm_bounds, ProductBounds, random_unit_vector, sup_norm, sup_norm_with, CompiledPolynomial,
    MonteCarloOptions, NormValue, SupNormOptions,
};
pub use poly::{poly_mul, Exponent, HomogeneousPolynomial};
