mod common;

use common::{nonzero_form, parse};
use diophant_core::heights::{divisor_height_with, liouville_check, point_height, sigma, weighted_size};
use diophant_core::metric::{Component, Cycle, ProjectivePoint};
use diophant_core::polycore::{log_l2_norm, poly_mul, MonteCarloOptions};
use proptest::prelude::*;

const PREC: u32 = 256;

fn opts(seed: u64) -> MonteCarloOptions {
    MonteCarloOptions { seed, samples: 1 << 15, block_size: 4096 }
}

#[test]
fn frozen_point_heights() {
    // [1:2:2] has L2 norm 3; [2:4:4] is the same point.
    let h = point_height(&ProjectivePoint::from_i64(&[1, 2, 2], PREC).unwrap()).unwrap();
    assert!((h.value - 3f64.ln()).abs() < 1e-15);
    let h = point_height(&ProjectivePoint::from_i64(&[2, 4, 4], PREC).unwrap()).unwrap();
    assert!((h.value - 3f64.ln()).abs() < 1e-15);
    // sigma(1) = 1/2, sigma(2) = 1/2 + 3/4.
    assert!((sigma(2) - 1.25).abs() < 1e-15);
}

#[test]
fn weighted_size_is_additive() {
    let y1 = Component::Point(ProjectivePoint::from_i64(&[1, 0], PREC).unwrap());
    let y2 = Component::Point(ProjectivePoint::from_i64(&[3, 4], PREC).unwrap());
    let a = 2.0;
    let z1 = Cycle::new(vec![(1, y1.clone())]).unwrap();
    let z2 = Cycle::new(vec![(2, y2.clone())]).unwrap();
    let both = Cycle::new(vec![(1, y1), (2, y2)]).unwrap();
    assert!((weighted_size(&z1, a).unwrap() - 2.0).abs() < 1e-15);
    let sum = weighted_size(&z1, a).unwrap() + weighted_size(&z2, a).unwrap();
    assert!((weighted_size(&both, a).unwrap() - sum).abs() < 1e-12);
    // 2 * (2 + ln 5) for the doubled point [3:4].
    assert!((weighted_size(&z2, a).unwrap() - 2.0 * (2.0 + 5f64.ln())).abs() < 1e-12);
}

#[test]
fn liouville_on_a_rational_point_off_the_line() {
    let f = parse(2, "x1 - 2*x0");
    let alpha = ProjectivePoint::from_i64(&[1, 3], PREC).unwrap();
    let r = liouville_check(&f, &alpha, 0.05).unwrap();
    assert!(r.holds && r.margin >= 0.0, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn point_height_ignores_the_representative(
        coords in proptest::collection::vec(-50i64..=50, 3).prop_filter("zero", |v| v.iter().any(|&c| c != 0)),
        k in prop_oneof![-7i64..=-1, 1i64..=7],
    ) {
        let scaled: Vec<i64> = coords.iter().map(|c| c * k).collect();
        let a = point_height(&ProjectivePoint::from_i64(&coords, PREC).unwrap()).unwrap().value;
        let b = point_height(&ProjectivePoint::from_i64(&scaled, PREC).unwrap()).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn divisor_height_is_additive(f in nonzero_form(3, 2, 9), g in nonzero_form(3, 2, 9), seed in 0u64..1000) {
        let hf = divisor_height_with(&f, opts(seed)).unwrap();
        let hg = divisor_height_with(&g, opts(seed + 1)).unwrap();
        let hfg = divisor_height_with(&poly_mul(&f, &g).unwrap(), opts(seed + 2)).unwrap();
        let radius = hf.error_radius + hg.error_radius + hfg.error_radius;
        prop_assert!((hfg.value - hf.value - hg.value).abs() <= radius, "{} vs {} +- {}", hfg.value, hf.value + hg.value, radius);
    }

    #[test]
    fn divisor_height_is_bounded_by_the_norm(f in nonzero_form(3, 4, 9), seed in 0u64..1000) {
        let h = divisor_height_with(&f, opts(seed)).unwrap();
        let bound = log_l2_norm(&f) + f.degree() as f64 * sigma(f.ambient_dim());
        prop_assert!(h.value - h.error_radius <= bound);
    }
}
