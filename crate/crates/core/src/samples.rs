//! Seeded random inputs shared by calibration, tests and the command line tool.

use rand::Rng;
use rug::{Integer, Rational};

use crate::derivations::VarietyPresentation;
use crate::error::Result;
use crate::metric::ProjectivePoint;
use crate::polycore::{Exponent, HomogeneousPolynomial};

/// All exponent vectors of total degree `degree` in `num_vars` variables, lexicographically.
pub fn monomials(num_vars: usize, degree: u32) -> Vec<Exponent> {
    fn rec(left: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if left == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(left - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(num_vars, degree, &mut Vec::new(), &mut out);
    out
}

/// Dense form with integer coefficients uniform in `[-bound, bound]`, never zero.
pub fn random_polynomial<R: Rng>(rng: &mut R, num_vars: usize, degree: u32, bound: i64) -> HomogeneousPolynomial {
    loop {
        let terms = monomials(num_vars, degree).into_iter().map(|e| (e, Rational::from(rng.random_range(-bound..=bound))));
        let f = HomogeneousPolynomial::from_terms(num_vars, degree, terms).expect("consistent degrees");
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random plane curve of the given degree with a nonzero `x2^degree` coefficient.
pub fn random_plane_curve<R: Rng>(rng: &mut R, degree: u32, bound: i64) -> Result<VarietyPresentation> {
    loop {
        let f = random_polynomial(rng, 3, degree, bound);
        if f.coeff(&[0, 0, degree]) == 0 {
            continue;
        }
        if let Ok(x) = VarietyPresentation::from_forms(&[f]) {
            return Ok(x);
        }
    }
}

/// Random primitive integer point with entries in `[-bound, bound]`.
pub fn random_integer_point<R: Rng>(rng: &mut R, num_coords: usize, bound: i64, prec: u32) -> Result<ProjectivePoint> {
    loop {
        let v: Vec<Integer> = (0..num_coords).map(|_| Integer::from(rng.random_range(-bound..=bound))).collect();
        if v.iter().all(|c| *c == 0) {
            continue;
        }
        return ProjectivePoint::from_integers(&v, prec);
    }
}

/// Random smooth points of `x` at `prec` bits (those where a refinement fails are skipped).
pub fn random_points_on(x: &VarietyPresentation, count: usize, seed: u64, prec: u32) -> Vec<ProjectivePoint> {
    x.sample_points(count, seed).iter().filter_map(|p| x.refine_point(p, prec).ok()).collect()
}
