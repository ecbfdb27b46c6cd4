mod common;

use common::parse;
use diophant_core::config::Calibration;
use diophant_core::derivations::{build_derivation_data, degree_bound, derivative_at, norm_bound, VarietyPresentation};
use diophant_core::metric::ProjectivePoint;
use diophant_core::polycore::log_l2_norm;
use diophant_core::samples::{random_plane_curve, random_polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn square_root_branch_on_a_conic() {
    // On x2^2 = x0 x1 with base coordinate x1/x0, the section x2/x0 is sqrt(x1/x0):
    // first derivative 1/2 and second derivative -1/4 at [1:1:1].
    let x = VarietyPresentation::from_forms(&[parse(3, "x2^2 - x0*x1")]).unwrap();
    let data = build_derivation_data(&x).unwrap();
    let theta = ProjectivePoint::from_i64(&[1, 1, 1], 256).unwrap();
    let f = parse(3, "x2");
    let d1 = derivative_at(&f, &[1], &x, &data, &theta, None).unwrap();
    let d2 = derivative_at(&f, &[2], &x, &data, &theta, None).unwrap();
    assert!((d1.real().to_f64() - 0.5).abs() < 1e-60 && d1.imag().to_f64().abs() < 1e-60);
    assert!((d2.real().to_f64() + 0.25).abs() < 1e-60 && d2.imag().to_f64().abs() < 1e-60);
}

#[test]
fn derivative_polynomials_respect_degree_and_norm_bounds() {
    let c = Calibration::shipped().derivation_norm;
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for i in 0..20 {
        let x = random_plane_curve(&mut rng, 2 + (i % 2) as u32, 5).unwrap();
        let data = build_derivation_data(&x).unwrap();
        let f = loop {
            let d = rng.random_range(1..=3);
            let f = random_polynomial(&mut rng, 3, d, 9);
            if !f.is_zero() {
                break f;
            }
        };
        for s in 1..=4u32 {
            let fi = data.derivative_polynomial(&f, &[s]).unwrap();
            assert!(fi.degree() <= degree_bound(&f, s, &x), "curve {i}, order {s}");
            if !fi.is_zero() {
                let bound = norm_bound(&f, s, &x, c);
                assert!(log_l2_norm(&fi) <= bound, "curve {i}, order {s}: {} > {bound}", log_l2_norm(&fi));
            }
        }
    }
}

#[test]
fn twisted_cubic_derivatives_stay_within_the_degree_bound() {
    let x = VarietyPresentation::from_forms(&[parse(4, "x0*x2 - x1^2"), parse(4, "x0^2*x3 - x1^3")]).unwrap();
    let data = build_derivation_data(&x).unwrap();
    let f = parse(4, "x3 + x2 - 2*x1");
    for s in 1..=3u32 {
        let fi = data.derivative_polynomial(&f, &[s]).unwrap();
        assert!(fi.degree() <= degree_bound(&f, s, &x));
    }
}
