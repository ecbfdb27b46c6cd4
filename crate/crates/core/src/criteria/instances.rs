//! Constructed criterion instances with known verdicts.
//!
//! The points are Liouville-type sums `sum_j b^(-j!)`, whose truncations are extremely good
//! rational approximations. Families are powers of the linear forms vanishing at those
//! truncations, found by the lattice search rather than written down. The growth data is a pure
//! power law (`D = 2k^2`, `S = k`, `H ~ k^3`, `V ~ k^7`), with the constants of `H` and `V`
//! chosen so that every supplied family meets its bounds.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use super::harness::CriterionInstance;
use super::quadruple::GrowthQuadruple;
use crate::approx::best_approximant;
use crate::derivations::{build_derivation_data, derivative_sup, VarietyPresentation};
use crate::error::Result;
use crate::metric::{Component, ProjectivePoint};
use crate::polycore::{log_l2_norm, HomogeneousPolynomial};

/// Working precision of the constructed points, enough for the cancellation in `l^18`.
pub const INSTANCE_PRECISION: u32 = 8192;
/// Digits handed to the lattice search.
pub const SEARCH_DIGITS: u32 = 200;
/// Length of the growth prefix.
pub const PREFIX_LEN: usize = 32;
/// Slack kept between the families and the bounds `H_k`, `V_k`.
pub const BOUND_SLACK: f64 = 0.5;

/// `sum_{j=1}^{terms} base^(-j!)`, exactly.
pub fn liouville_sum(base: u32, terms: u32) -> Rational {
    let mut sum = Rational::new();
    let mut fact = 1u32;
    for j in 1..=terms {
        fact *= j;
        sum += Rational::from((1, Integer::from(base).pow(fact)));
    }
    sum
}

fn to_complex(x: &Rational) -> Complex {
    Complex::with_val(INSTANCE_PRECISION, Float::with_val(INSTANCE_PRECISION, x))
}

/// `[1 : tau]` with `tau = sum_j 10^(-j!)`.
pub fn liouville_point_p1() -> Result<ProjectivePoint> {
    ProjectivePoint::from_complex(vec![to_complex(&Rational::from(1)), to_complex(&liouville_sum(10, 6))])
}

/// `[1 : tau_1 : tau_2]` with `tau_1 = sum_j 10^(-j!)` and `tau_2 = sum_j 7^(-j!)`.
pub fn liouville_point_p2() -> Result<ProjectivePoint> {
    ProjectivePoint::from_complex(vec![
        to_complex(&Rational::from(1)),
        to_complex(&liouville_sum(10, 6)),
        to_complex(&liouville_sum(7, 5)),
    ])
}

/// Linear form `c0 x0 + c1 x_var` vanishing at the best rational approximation of the ratio
/// `theta_var / theta_0` with `log |(c0, c1)| <= height`.
pub fn approximant_form(theta: &ProjectivePoint, var: usize, height: f64) -> Result<HomogeneousPolynomial> {
    let c = theta.coords();
    let pair = ProjectivePoint::from_complex(vec![c[0].clone(), c[var].clone()])?;
    let found = best_approximant(&pair, SEARCH_DIGITS, 1, height)?;
    let coeffs = found.minpoly.integer_coeffs();
    let n = theta.num_coords();
    let mut e0 = vec![0u32; n];
    e0[0] = 1;
    let mut e1 = vec![0u32; n];
    e1[var] = 1;
    HomogeneousPolynomial::from_terms(n, 1, [(e0, Rational::from(coeffs[0].clone())), (e1, Rational::from(coeffs[1].clone()))])
}

/// Growth data for `k = index + 1`: `D = 2k^2`, `S = k`, `H = c_h k^3`, `V = c_v k^7`.
pub fn power_quadruple(c_h: f64, c_v: f64) -> Result<GrowthQuadruple> {
    GrowthQuadruple::from_fn(PREFIX_LEN, |k| 2.0 * k * k, |k| k, |k| c_h * k.powi(3), |k| c_v * k.powi(7))
}

/// Smallest constants `c_h`, largest `c_v` for which the families meet their bounds with slack.
fn fit_constants(
    theta: &ProjectivePoint,
    variety: &VarietyPresentation,
    g: &HomogeneousPolynomial,
    families: &BTreeMap<usize, Vec<HomogeneousPolynomial>>,
) -> Result<(f64, f64)> {
    let data = build_derivation_data(variety)?;
    let mut c_h: f64 = 0.0;
    let mut c_v = f64::INFINITY;
    for (&index, family) in families {
        let k = (index + 1) as f64;
        let order = (index + 1) as u32;
        let norm = family.iter().map(log_l2_norm).fold(f64::NEG_INFINITY, f64::max);
        let mut sup = f64::NEG_INFINITY;
        for f in family {
            sup = sup.max(derivative_sup(f, order, variety, &data, theta, Some(g))?);
        }
        c_h = c_h.max((norm + BOUND_SLACK) / k.powi(3));
        c_v = c_v.min((-sup - BOUND_SLACK) / k.powi(7));
    }
    Ok((c_h, c_v))
}

fn powers(forms: &[&HomogeneousPolynomial], degree: u32) -> Vec<HomogeneousPolynomial> {
    forms.iter().map(|l| l.pow(degree)).collect()
}

/// Height caps selecting the truncations at `10^2`, `10^6` and `10^24`.
const LEVEL_HEIGHTS: [f64; 3] = [5.5, 15.0, 57.0];

fn decimal_levels(theta: &ProjectivePoint, var: usize) -> Result<Vec<HomogeneousPolynomial>> {
    LEVEL_HEIGHTS.iter().map(|&h| approximant_form(theta, var, h)).collect()
}

/// Positive instance of the first criterion on the projective line, `s = 0`.
///
/// `F` at `k = 2` holds the 8th powers of the forms at levels `10^2` and `10^6`; at `k = 3` the
/// 18th powers at levels `10^6` and `10^24`.
pub fn positive_algind1() -> Result<CriterionInstance> {
    let theta = liouville_point_p1()?;
    let levels = decimal_levels(&theta, 1)?;
    let mut families = BTreeMap::new();
    families.insert(1, powers(&[&levels[0], &levels[1]], 8));
    families.insert(2, powers(&[&levels[1], &levels[2]], 18));
    let variety = VarietyPresentation::projective_space(1);
    let g = HomogeneousPolynomial::var(2, 0);
    let (c_h, c_v) = fit_constants(&theta, &variety, &g, &families)?;
    let inst = CriterionInstance {
        quadruple: power_quadruple(c_h, c_v)?,
        theta,
        variety,
        families,
        g,
        s: 0,
        candidates: Vec::new(),
    };
    inst.validate()?;
    Ok(inst)
}

/// The positive instance with a section of degree `D_k + 1` added at index 2.
pub fn degree_violation() -> Result<CriterionInstance> {
    let mut inst = positive_algind1()?;
    let extra = inst.families[&2][1].clone();
    let x0 = HomogeneousPolynomial::var(2, 0);
    inst.families.get_mut(&2).expect("family present").push(&extra * &x0);
    Ok(inst)
}

/// The positive instance with `H` at index 1 lowered below the largest log norm.
pub fn norm_violation() -> Result<CriterionInstance> {
    let mut inst = positive_algind1()?;
    let norm = inst.families[&1].iter().map(log_l2_norm).fold(f64::NEG_INFINITY, f64::max);
    inst.quadruple.heights[1] = norm - 1.0;
    Ok(inst)
}

/// The positive instance with `V` at index 2 raised above the true decay.
pub fn derivative_violation() -> Result<CriterionInstance> {
    let mut inst = positive_algind1()?;
    let data = build_derivation_data(&inst.variety)?;
    let mut sup = f64::NEG_INFINITY;
    for f in &inst.families[&2] {
        sup = sup.max(derivative_sup(f, 3, &inst.variety, &data, &inst.theta, Some(&inst.g))?);
    }
    inst.quadruple.decays[2] = -sup + 1.0;
    Ok(inst)
}

/// Height caps selecting the truncations of `tau_2` at `7^2`, `7^6` and `7^24`.
const SEPTIMAL_HEIGHTS: [f64; 3] = [4.5, 12.5, 47.0];

type PlaneLevels = (ProjectivePoint, Vec<HomogeneousPolynomial>, Vec<HomogeneousPolynomial>);

fn plane_levels() -> Result<PlaneLevels> {
    let theta = liouville_point_p2()?;
    let first = decimal_levels(&theta, 1)?;
    let second = SEPTIMAL_HEIGHTS.iter().map(|&h| approximant_form(&theta, 2, h)).collect::<Result<_>>()?;
    Ok((theta, first, second))
}

/// Positive instance of the second criterion on the projective plane, `s = 1`.
///
/// Each family holds powers of two parallel lines `x1 = c` at consecutive levels and one line
/// `x2 = c'`, so no point near `theta` is a common zero and every near line misses one section.
pub fn positive_algind2() -> Result<CriterionInstance> {
    let (theta, first, second) = plane_levels()?;
    let mut families = BTreeMap::new();
    families.insert(1, powers(&[&first[0], &first[1], &second[1]], 8));
    families.insert(2, powers(&[&first[1], &first[2], &second[2]], 18));
    let variety = VarietyPresentation::projective_space(2);
    let g = HomogeneousPolynomial::var(3, 0);
    let (c_h, c_v) = fit_constants(&theta, &variety, &g, &families)?;
    let mut candidates = vec![Component::Divisor(first[0].clone()), Component::Divisor(second[1].clone())];
    for digits in 1..=8u32 {
        candidates.push(Component::Point(decimal_rounding(&theta, digits)?));
    }
    let inst = CriterionInstance {
        quadruple: power_quadruple(c_h, c_v)?,
        theta,
        variety,
        families,
        g,
        s: 1,
        candidates,
    };
    inst.validate()?;
    Ok(inst)
}

/// The second positive instance with every section at index 1 divisible by a high power of the
/// line `x1 = 0.11 x0`, which is among the candidates.
pub fn restriction_violation() -> Result<CriterionInstance> {
    let mut inst = positive_algind2()?;
    let (_, first, second) = plane_levels()?;
    let h = &first[0];
    let m = 3;
    let family = vec![h.pow(8), &h.pow(m) * &first[1].pow(8 - m), &h.pow(m) * &second[1].pow(8 - m)];
    inst.families.insert(1, family);
    Ok(inst)
}

/// The second positive instance with `S = D` at every index, breaking regular growth.
pub fn irregular_algind2() -> Result<CriterionInstance> {
    let mut inst = positive_algind2()?;
    inst.quadruple.orders = inst.quadruple.degrees.clone();
    Ok(inst)
}

/// `theta` with every affine coordinate rounded to `digits` decimals.
pub fn decimal_rounding(theta: &ProjectivePoint, digits: u32) -> Result<ProjectivePoint> {
    let c = theta.coords();
    let scale = Integer::from(10).pow(digits);
    let mut coords = vec![Rational::from(1)];
    for z in &c[1..] {
        let ratio = Complex::with_val(INSTANCE_PRECISION, z / &c[0]);
        let scaled = Float::with_val(INSTANCE_PRECISION, ratio.real() * &scale).round();
        let n = scaled.to_integer().expect("finite coordinate");
        coords.push(Rational::from((n, scale.clone())));
    }
    ProjectivePoint::from_rationals(&coords, INSTANCE_PRECISION)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::criteria::{check_hypotheses_algind1, check_hypotheses_algind2, Hypothesis, Verdict};

    fn cfg() -> RunConfig {
        RunConfig { near_samples: 200, ..RunConfig::default() }
    }

    #[test]
    fn search_finds_truncations() {
        let theta = liouville_point_p1().unwrap();
        let levels = decimal_levels(&theta, 1).unwrap();
        let expected = [[-11, 100], [-110_001, 1_000_000]];
        for (l, e) in levels.iter().zip(expected) {
            let c0 = l.coeff(&[1, 0]);
            let c1 = l.coeff(&[0, 1]);
            assert_eq!(c0.clone() * Rational::from(e[1]), c1.clone() * Rational::from(e[0]));
        }
        assert_eq!(levels[2].coeff(&[0, 1]).abs(), Rational::from(Integer::from(10).pow(24u32)));
    }

    #[test]
    fn positive_instance_holds() {
        let report = check_hypotheses_algind1(&positive_algind1().unwrap(), &cfg()).unwrap();
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        assert_eq!(report.verdict, Verdict::HypothesesHold);
        assert_eq!(report.asserted_min_rel_dim, Some(1));
        assert_eq!(report.consistent, Some(true));
    }

    #[test]
    fn negative_instances_fail_where_expected() {
        let cases = [
            (degree_violation().unwrap(), 2, Hypothesis::Degree),
            (norm_violation().unwrap(), 1, Hypothesis::Norm),
            (derivative_violation().unwrap(), 2, Hypothesis::DerivativeBound),
        ];
        for (inst, k, which) in cases {
            let report = check_hypotheses_algind1(&inst, &cfg()).unwrap();
            assert_eq!(report.verdict, Verdict::HypothesisFailed { k, which });
        }
    }

    #[test]
    fn plane_instances() {
        let report = check_hypotheses_algind2(&positive_algind2().unwrap(), &cfg()).unwrap();
        println!("{}", serde_json::to_string_pretty(&report.verdict).unwrap());
        assert_eq!(report.verdict, Verdict::HypothesesHold);
        assert_eq!(report.consistent, Some(true));
        let report = check_hypotheses_algind2(&restriction_violation().unwrap(), &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisFailed { k: 1, which: Hypothesis::Restriction });
        let report = check_hypotheses_algind2(&irregular_algind2().unwrap(), &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive { reason: "regularity".into() });
    }

    #[test]
    fn sampled_common_zero_on_the_plane() {
        let inst = positive_algind2().unwrap();
        let report = check_hypotheses_algind1(&inst, &cfg()).unwrap();
        let cz = report.checks[0].common_zero.as_ref().unwrap();
        assert_eq!(cz.method, crate::criteria::CommonZeroMethod::Sampled);
        assert!(cz.samples > 0 && cz.ok);
        assert_eq!(report.verdict, Verdict::HypothesesHold);
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = positive_algind2().unwrap();
        let back = CriterionInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.quadruple, inst.quadruple);
        assert_eq!(back.families, inst.families);
        assert_eq!(back.candidates.len(), inst.candidates.len());
        let a = check_hypotheses_algind2(&inst, &cfg()).unwrap();
        let b = check_hypotheses_algind2(&back, &cfg()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
