mod common;

use common::{exponents, form, nonzero_form, parse};
use diophant_core::config::Calibration;
use diophant_core::polycore::{l2_norm_sq, log_l2_norm, monomial_norm_sq, poly_mul, product_norm_bounds, HomogeneousPolynomial};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rug::Rational;

/// Uniform point on the unit sphere of C^n, drawn from complex Gaussians.
fn sphere_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let r = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / r).collect()
}

#[test]
fn frozen_l2_norms() {
    // (x0 + x1)^2 = 2 (u . x)^2 with u a unit vector, and E|u . x|^4 = 1/3 on the 3-sphere.
    assert_eq!(l2_norm_sq(&parse(2, "x0^2 + 2*x0*x1 + x1^2")), Rational::from((4, 3)));
    assert_eq!(l2_norm_sq(&parse(3, "x0*x1*x2")), Rational::from((1, 60)));
    assert_eq!(monomial_norm_sq(&[2, 0]), Rational::from((1, 3)));
}

#[test]
fn monomial_norms_match_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (n, d) in [(2, 3), (3, 2), (3, 4), (4, 3)] {
        for e in exponents(n, d) {
            let samples = 40_000;
            let values: Vec<f64> = (0..samples)
                .map(|_| {
                    let x = sphere_point(&mut rng, n);
                    x.iter().zip(&e).map(|(z, &k)| z.norm_sqr().powi(k as i32)).product::<f64>()
                })
                .collect();
            let mean = values.iter().sum::<f64>() / samples as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / samples as f64;
            let radius = 3.0 * (var / samples as f64).sqrt();
            let exact = monomial_norm_sq(&e).to_f64();
            assert!((mean - exact).abs() <= radius, "{e:?}: Monte Carlo {mean} +- {radius}, exact {exact}");
        }
    }
}

#[test]
fn zero_form_keeps_its_degree() {
    let z = HomogeneousPolynomial::zero(3, 4);
    let f = parse(3, "x0 - x2");
    let p = poly_mul(&z, &f).unwrap();
    assert!(p.is_zero());
    assert_eq!(p.degree(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_a_commutative_graded_product(
        f in nonzero_form(3, 3, 9),
        g in nonzero_form(3, 3, 9),
        h in nonzero_form(3, 2, 9),
    ) {
        let fg = poly_mul(&f, &g).unwrap();
        prop_assert_eq!(&fg, &poly_mul(&g, &f).unwrap());
        prop_assert_eq!(fg.degree(), f.degree() + g.degree());
        prop_assert_eq!(poly_mul(&fg, &h).unwrap(), poly_mul(&f, &poly_mul(&g, &h).unwrap()).unwrap());
    }

    #[test]
    fn product_norms_respect_the_calibrated_bounds(f in nonzero_form(3, 4, 9), g in nonzero_form(3, 4, 9)) {
        let c = Calibration::shipped();
        let b = product_norm_bounds(&f, &g, c.product_upper, c.product_lower);
        prop_assert!(b.holds, "{:?}", b);
    }

    #[test]
    fn l2_norm_is_homogeneous_under_scaling(f in nonzero_form(2, 5, 9), k in 1i64..50) {
        let scaled = f.scale(&Rational::from(k));
        let expected = log_l2_norm(&f) + (k as f64).ln();
        prop_assert!((log_l2_norm(&scaled) - expected).abs() < 1e-12);
    }
}

#[test]
fn products_of_random_pairs_respect_the_bounds_in_four_variables() {
    let c = Calibration::shipped();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let (d1, d2) = (rng.random_range(1..=3u32), rng.random_range(1..=3u32));
        let c1: Vec<i64> = (0..exponents(4, d1).len()).map(|_| rng.random_range(-9..=9)).collect();
        let c2: Vec<i64> = (0..exponents(4, d2).len()).map(|_| rng.random_range(-9..=9)).collect();
        let (f, g) = (form(4, d1, &c1), form(4, d2, &c2));
        if f.is_zero() || g.is_zero() {
            continue;
        }
        assert!(product_norm_bounds(&f, &g, c.product_upper, c.product_lower).holds);
    }
}
