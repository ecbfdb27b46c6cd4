#![allow(dead_code)]

use diophant_core::polycore::HomogeneousPolynomial;
use proptest::prelude::*;
use rug::Rational;

/// All exponent vectors of total degree `d` in `n` variables.
pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|a| {
            exponents(n - 1, d - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

pub fn form(n: usize, d: u32, coeffs: &[i64]) -> HomogeneousPolynomial {
    let terms = exponents(n, d).into_iter().zip(coeffs).map(|(e, &c)| (e, Rational::from(c)));
    HomogeneousPolynomial::from_terms(n, d, terms).unwrap()
}

/// Nonzero forms in `n` variables of degree `1..=max_degree` with coefficients in `[-bound, bound]`.
pub fn nonzero_form(n: usize, max_degree: u32, bound: i64) -> impl Strategy<Value = HomogeneousPolynomial> {
    (1..=max_degree)
        .prop_flat_map(move |d| {
            let len = exponents(n, d).len();
            (Just(d), proptest::collection::vec(-bound..=bound, len))
        })
        .prop_filter_map("zero form", move |(d, coeffs)| {
            let f = form(n, d, &coeffs);
            (!f.is_zero()).then_some(f)
        })
}

pub fn parse(n: usize, s: &str) -> HomogeneousPolynomial {
    HomogeneousPolynomial::parse(n, s).unwrap()
}
