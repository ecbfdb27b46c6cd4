//! Arithmetic heights of points, divisors and cycles, and the Liouville inequality.

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::algebraic::{minimal_polynomial_of_image, UniPoly};
use crate::error::{Error, Result};
use crate::metric::{algebraic_distance, cycle_distance, Component, Cycle, ExactCoords, ProjectivePoint};
use crate::num;
use crate::polycore::{log_l2_norm, mahler_integral_with, HomogeneousPolynomial, MonteCarloOptions};

/// Normalization a height value refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightConvention {
    /// Absolute logarithmic Weil height with the L2 norm at infinity.
    L2Weil,
    /// Integral of `log|f|` plus the Fubini–Study correction.
    DivisorIntegral,
    /// Sum over components with different conventions.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightValue {
    pub value: f64,
    pub convention: HeightConvention,
    #[serde(rename = "error")]
    pub error_radius: f64,
}

/// `sum_{k=1}^{M} sum_{m=1}^{k} 1/(2m)`.
pub fn sigma(m: usize) -> f64 {
    (1..=m).map(|k| (1..=k).map(|j| 0.5 / j as f64).sum::<f64>()).sum()
}

/// Absolute logarithmic height of a point with exact coordinates.
pub fn point_height(x: &ProjectivePoint) -> Result<HeightValue> {
    let value = match x.exact() {
        Some(ExactCoords::Rational(v)) => {
            let s: rug::Integer = v.iter().map(|c| rug::Integer::from(c.square_ref())).sum();
            num::ln_rational(&Rational::from(s)) / 2.0
        }
        Some(ExactCoords::Algebraic { minpoly, coords }) => algebraic_point_height(x, minpoly, coords)?,
        None => return Err(Error::UnsupportedField("point has no exact coordinates".into())),
    };
    Ok(HeightValue { value, convention: HeightConvention::L2Weil, error_radius: 0.0 })
}

fn algebraic_point_height(x: &ProjectivePoint, minpoly: &UniPoly, coords: &[UniPoly]) -> Result<f64> {
    let d = minpoly.degree().unwrap_or(1) as f64;
    let prec = x.precision();
    let mut archimedean = Float::new(prec);
    for conj in x.conjugates() {
        archimedean += conj.norm().ln();
    }
    let archimedean = archimedean.to_f64() / d;
    let finite = if coords.len() == 2 {
        let (q0, q1) = (&coords[0], &coords[1]);
        if let Some(inv) = q0.inverse_mod(minpoly) {
            let beta = q1.mul(&inv).div_rem(minpoly).1;
            let mp = minimal_polynomial_of_image(minpoly, &beta)?;
            let k = mp.degree().unwrap_or(1) as f64;
            num::ln_rational(&mp.leading()) / k - ln_norm_of(q0, minpoly)
        } else {
            // x0 vanishes: the point is [0 : 1] up to scaling.
            return Ok(0.0);
        }
    } else if minpoly.leading() == 1
        && coords.iter().all(|q| q.coeffs().iter().all(|c| *c.denom() == 1))
        && coords.iter().any(|q| *q == UniPoly::constant(Rational::from(1)))
    {
        0.0
    } else {
        return Err(Error::UnsupportedField(
            "finite places are only handled for P^1 or integral coordinates containing 1".into(),
        ));
    };
    Ok(archimedean + finite)
}

/// `(1/d) log|N(q0(alpha))|`, removing the scaling of the first coordinate.
fn ln_norm_of(q0: &UniPoly, minpoly: &UniPoly) -> f64 {
    if *q0 == UniPoly::constant(Rational::from(1)) {
        return 0.0;
    }
    let d = minpoly.degree().unwrap_or(1) as u32;
    // N(q0(alpha)) = Res(p, q0) / lead(p)^deg(q0)
    let res = crate::algebraic::resultant(minpoly, q0);
    let lead = rug::ops::Pow::pow(minpoly.leading(), q0.degree().unwrap_or(0) as u32);
    num::ln_rational(&(res / lead)) / d as f64
}

/// `h(div f) = integral log|f| + D * sigma_M`, with a Monte Carlo error radius.
pub fn divisor_height_with(f: &HomogeneousPolynomial, opts: MonteCarloOptions) -> Result<HeightValue> {
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial has no divisor".into()));
    }
    let m = mahler_integral_with(f, opts);
    Ok(HeightValue {
        value: m.value + f.degree() as f64 * sigma(f.ambient_dim()),
        convention: HeightConvention::DivisorIntegral,
        error_radius: m.error_radius,
    })
}

pub fn divisor_height(f: &HomogeneousPolynomial) -> Result<HeightValue> {
    divisor_height_with(f, MonteCarloOptions::default())
}

/// Height of one component as a cycle (a point of degree `d` counts `d` times its Weil height).
pub fn component_height(c: &Component, opts: MonteCarloOptions) -> Result<HeightValue> {
    match c {
        Component::Point(p) => {
            let h = point_height(p)?;
            Ok(HeightValue { value: h.value * p.field_degree() as f64, ..h })
        }
        Component::Divisor(f) => divisor_height_with(f, opts),
    }
}

/// Multiplicity-weighted sum of component heights.
pub fn cycle_height_with(z: &Cycle, opts: MonteCarloOptions) -> Result<HeightValue> {
    let mut value = 0.0;
    let mut error = 0.0;
    let mut conventions = Vec::new();
    for (m, c) in z.components() {
        let h = component_height(c, opts)?;
        value += *m as f64 * h.value;
        error += *m as f64 * h.error_radius;
        conventions.push(h.convention);
    }
    conventions.dedup();
    let convention = match conventions.as_slice() {
        [] => HeightConvention::L2Weil,
        [c] => *c,
        _ => HeightConvention::Mixed,
    };
    Ok(HeightValue { value, convention, error_radius: error })
}

pub fn cycle_height(z: &Cycle) -> Result<HeightValue> {
    cycle_height_with(z, MonteCarloOptions::default())
}

/// `t_a(Z) = a * deg Z + h(Z)`.
pub fn weighted_size(z: &Cycle, a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::InvalidInstance("weight must be positive".into()));
    }
    Ok(a * z.degree() as f64 + cycle_height(z)?.value)
}

/// `phi_a^S(theta, Z) = D^{3S}(theta, Z) / t_a(Z)`.
pub fn weighted_derivated_distance(z: &Cycle, theta: &ProjectivePoint, order: u32, a: f64) -> Result<f64> {
    let size = weighted_size(z, a)?;
    if size <= 0.0 {
        return Err(Error::InvalidInstance("weighted size must be positive".into()));
    }
    Ok(cycle_distance(z, theta, 3 * order)? / size)
}

/// Component chosen by [`min_distance_component`] and the inequality it certifies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentChoice {
    /// Index into the cycle's components.
    pub index: usize,
    /// `S_Y`, the least order with `S_Y / t_a(Y) >= S / t_a(Z)`.
    pub order: u32,
    pub phi_component: f64,
    pub phi_cycle: f64,
    /// `c * log deg Z / a`.
    pub slack: f64,
    /// `2 phi_a^{S_Y}(theta, Y) <= phi_a^S(theta, Z) + slack`.
    pub holds: bool,
}

/// Scans the irreducible components of `z` for the least weighted derivated distance to `theta`.
/// Ties resolve to the first component in the cycle's order.
pub fn min_distance_component(z: &Cycle, theta: &ProjectivePoint, order: u32, a: f64, c: f64) -> Result<ComponentChoice> {
    if z.components().is_empty() {
        return Err(Error::InvalidInstance("empty cycle".into()));
    }
    let size = weighted_size(z, a)?;
    let phi_cycle = weighted_derivated_distance(z, theta, order, a)?;
    let mut best: Option<(usize, u32, f64)> = None;
    for (i, (_, comp)) in z.components().iter().enumerate() {
        let y = Cycle::new(vec![(1, comp.clone())])?;
        let size_y = weighted_size(&y, a)?;
        let order_y = (order as f64 * size_y / size - 1e-9).ceil().max(0.0) as u32;
        let phi = weighted_derivated_distance(&y, theta, order_y, a)?;
        if best.is_none_or(|(_, _, b)| phi < b) {
            best = Some((i, order_y, phi));
        }
    }
    let (index, order_y, phi_component) = best.expect("nonempty");
    let slack = c * (z.degree().max(1) as f64).ln() / a;
    Ok(ComponentChoice {
        index,
        order: order_y,
        phi_component,
        phi_cycle,
        slack,
        holds: 2.0 * phi_component <= phi_cycle + slack + 1e-12,
    })
}

/// Outcome of the Liouville inequality check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleReport {
    pub distance: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

/// Checks `D(div f, alpha) >= -D h(alpha) - deg(alpha) log|f|_2 - d D deg(alpha)`,
/// where `h(alpha)` is the height of the zero-cycle of `alpha` and its conjugates.
pub fn liouville_check(f: &HomogeneousPolynomial, alpha: &ProjectivePoint, d: f64) -> Result<LiouvilleReport> {
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial has no divisor".into()));
    }
    let deg_alpha = alpha.field_degree() as f64;
    let big_d = f.degree() as f64;
    let mut distance = 0.0;
    for conj in alpha.conjugates() {
        distance += algebraic_distance(f, &conj)?;
    }
    if distance == f64::NEG_INFINITY {
        return Err(Error::DegeneratePoint("point lies on the divisor".into()));
    }
    let h = point_height(alpha)?.value * deg_alpha;
    let bound = -big_d * h - deg_alpha * log_l2_norm(f) - d * big_d * deg_alpha;
    let margin = distance - bound;
    Ok(LiouvilleReport { distance, bound, margin, holds: margin >= 0.0 })
}
