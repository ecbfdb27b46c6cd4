use diophant_core::algebraic::{determinant, UniPoly};
use diophant_core::approx::{
    find_algebraic_approximant, find_avoiding_subspace, lll_reduce, minors_gcd, norm_sq, project, AvoidOptions, ProjectionSetup,
};
use diophant_core::config::Calibration;
use diophant_core::metric::{Component, Cycle, ProjectivePoint};
use diophant_core::samples::random_plane_curve;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float, Integer, Rational};

fn rationals(rows: &[Vec<Integer>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(Rational::from).collect()).collect()
}

/// Coordinates of `v` in the basis `rows`, by Cramer's rule.
fn coordinates(rows: &[Vec<Integer>], v: &[Integer]) -> Vec<Rational> {
    let m = rationals(rows);
    let det = determinant(transpose(&m));
    (0..rows.len())
        .map(|i| {
            let mut replaced = m.clone();
            replaced[i] = v.iter().map(Rational::from).collect();
            determinant(transpose(&replaced)) / det.clone()
        })
        .collect()
}

fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn square_basis(n: usize) -> impl Strategy<Value = Vec<Vec<Integer>>> {
    proptest::collection::vec(proptest::collection::vec(-30i64..=30, n), n)
        .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(Integer::from).collect()).collect::<Vec<Vec<Integer>>>())
        .prop_filter("singular", |rows| determinant(rationals(rows)) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_keeps_the_lattice_and_shortens_the_first_vector(basis in (2usize..=4).prop_flat_map(square_basis)) {
        let n = basis.len();
        let reduced = lll_reduce(basis.clone());
        prop_assert_eq!(reduced.len(), n);
        let (d0, d1) = (determinant(rationals(&basis)), determinant(rationals(&reduced)));
        prop_assert_eq!(d0.clone().abs(), d1.abs());
        for v in &reduced {
            prop_assert!(coordinates(&basis, v).iter().all(|c| *c.denom() == 1), "{:?} is not in the lattice", v);
        }
        let shortest_input = basis.iter().map(|v| norm_sq(v)).min().unwrap();
        prop_assert!(norm_sq(&reduced[0]) <= shortest_input << (n - 1));
    }

    #[test]
    fn coordinate_projection_never_raises_the_height(
        points in proptest::collection::vec(
            (proptest::collection::vec(-40i64..=40, 4).prop_filter("zero", |v| v[..3].iter().any(|&c| c != 0)), 1u32..=3),
            1..=4,
        ),
    ) {
        let comps = points.iter().map(|(c, m)| (*m, Component::Point(ProjectivePoint::from_i64(c, 256).unwrap()))).collect();
        let z = Cycle::new(comps).unwrap();
        let setup = ProjectionSetup::coordinate(4, &[0, 1, 2]).unwrap();
        let (image, report) = project(&setup, &z).unwrap();
        prop_assert!(report.holds && report.slack == 0.0, "{:?}", report);
        prop_assert_eq!(image.degree(), z.degree());
    }
}

#[test]
fn golden_ratio_is_recovered_from_forty_digits() {
    let prec = 200;
    let phi = (Float::with_val(prec, 5).sqrt() + 1u32) / 2u32;
    let theta = ProjectivePoint::from_complex(vec![Complex::with_val(prec, 1), Complex::with_val(prec, phi)]).unwrap();
    let r = find_algebraic_approximant(&theta, 40, 3, 10.0).unwrap();
    assert_eq!(r.minpoly.primitive(), UniPoly::from_i64(&[-1, -1, 1]));
    assert_eq!(r.degree, 2);
}

#[test]
fn avoiding_subspaces_are_primitive_and_far_from_the_curve() {
    let opts = AvoidOptions::from_calibration(&Calibration::shipped());
    let mut rng = ChaCha8Rng::seed_from_u64(606_060);
    for i in 0..5 {
        let x = random_plane_curve(&mut rng, 2 + (i % 2), 5).unwrap();
        let found = find_avoiding_subspace(&x, 2, 2000, 70 + i as u64, &opts).unwrap();
        let basis = found.subspace.basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(minors_gcd(basis), 1);
        assert!(found.height_ok && found.min_distance >= found.distance_bound);
    }
}
