//! Local multiplicities: vanishing orders, plane intersection multiplicities and chains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::algebraic::{determinant, interpolate, sylvester};
use crate::derivations::{build_derivation_data, VarietyPresentation};
use crate::error::{Error, Result};
use crate::heights::weighted_size;
use crate::metric::{Chart, Component, Cycle, ProjectivePoint};
use crate::polycore::HomogeneousPolynomial;

/// Number of generic frames whose minimum is reported.
pub const FRAMES: usize = 5;
/// Frame attempts allowed before giving up.
pub const MAX_FRAME_ATTEMPTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplicityMethod {
    Exact,
    Numeric,
    Resultant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityValue {
    pub order: u32,
    pub method: MultiplicityMethod,
    pub trials: u32,
}

/// Order of vanishing of `f` at `y` (exact for rational points, numeric otherwise).
pub fn vanishing_order(f: &HomogeneousPolynomial, y: &ProjectivePoint) -> Result<MultiplicityValue> {
    if f.num_vars() != y.num_coords() {
        return Err(Error::DimensionMismatch { expected: f.num_vars(), got: y.num_coords() });
    }
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial".into()));
    }
    if let Some(r) = y.rational_coords() {
        let local = localize(f, &r);
        let order = local.terms().map(|(e, _)| f.degree() - e[0]).min().unwrap_or(0);
        return Ok(MultiplicityValue { order, method: MultiplicityMethod::Exact, trials: 1 });
    }
    let prec = y.precision();
    let chart = Chart::canonical(y);
    let jet = chart.pullback(f, f.degree());
    let threshold = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let scale = jet.coeffs().iter().map(|c| Float::with_val(prec, c.abs_ref())).fold(Float::with_val(prec, 1), |a, b| a.max(&b));
    let mut order = f.degree();
    for (e, c) in jet.space().exponents().iter().zip(jet.coeffs()) {
        let a = Float::with_val(prec, c.abs_ref());
        if a > Float::with_val(prec, &threshold * &scale) {
            order = order.min(e.iter().sum());
        }
    }
    Ok(MultiplicityValue { order, method: MultiplicityMethod::Numeric, trials: 1 })
}

/// `f(y_i w, y_j w + z_j)`: variable 0 is `w`, the others are local coordinates at `y`.
fn localize(f: &HomogeneousPolynomial, y: &[Rational]) -> HomogeneousPolynomial {
    let n = y.len();
    let pivot = y.iter().position(|c| *c != 0).expect("nonzero point");
    let mut matrix = vec![vec![Rational::new(); n]; n];
    let mut next = 1;
    for i in 0..n {
        matrix[i][0] = y[i].clone();
        if i != pivot {
            matrix[i][next] = Rational::from(1);
            next += 1;
        }
    }
    f.substitute_linear(&matrix)
}

fn random_frame(y: &[Integer], rng: &mut ChaCha8Rng) -> Option<Vec<Vec<Rational>>> {
    let mut t = vec![vec![Rational::new(); 3]; 3];
    for i in 0..3 {
        t[i][0] = Rational::from(y[i].clone());
        t[i][1] = Rational::from(rng.random_range(-6i64..=6));
        t[i][2] = Rational::from(rng.random_range(-6i64..=6));
    }
    if determinant(t.clone()) == 0 {
        return None;
    }
    Some(t)
}

fn dehomogenized_coeffs(f: &HomogeneousPolynomial, s: &Rational) -> Vec<Rational> {
    // Coefficients in x2 of f(1, s, x2).
    let coeffs = f.coefficients_in(2);
    coeffs
        .iter()
        .map(|c| c.eval_rational(&[Rational::from(1), s.clone(), Rational::new()]))
        .collect()
}

fn resultant_valuation(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial) -> Option<u32> {
    let bound = (f.degree() * g.degree()) as i64;
    let xs: Vec<Rational> = (0..=bound).map(Rational::from).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|s| {
            let a = dehomogenized_coeffs(f, s);
            let b = dehomogenized_coeffs(g, s);
            determinant(sylvester(&a, &b, Rational::new()))
        })
        .collect();
    let r = interpolate(&xs, &ys);
    r.coeffs().iter().position(|c| *c != 0).map(|k| k as u32)
}

/// Intersection multiplicity of two plane curves at a rational point, via resultants in generic frames.
pub fn intersection_multiplicity_plane(
    f: &HomogeneousPolynomial,
    g: &HomogeneousPolynomial,
    y: &ProjectivePoint,
) -> Result<MultiplicityValue> {
    intersection_multiplicity_plane_seeded(f, g, y, 0)
}

pub fn intersection_multiplicity_plane_seeded(
    f: &HomogeneousPolynomial,
    g: &HomogeneousPolynomial,
    y: &ProjectivePoint,
    seed: u64,
) -> Result<MultiplicityValue> {
    if f.num_vars() != 3 || g.num_vars() != 3 || y.num_coords() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: f.num_vars().max(g.num_vars()).max(y.num_coords()) });
    }
    let r = y.rational_coords().ok_or_else(|| Error::UnsupportedField("plane multiplicity needs a rational point".into()))?;
    if f.eval_rational(&r) != 0 || g.eval_rational(&r) != 0 {
        return Ok(MultiplicityValue { order: 0, method: MultiplicityMethod::Exact, trials: 0 });
    }
    let yi = y.integer_coords().map(|v| v.to_vec()).unwrap_or_else(|| {
        let mut den = Integer::from(1);
        for c in &r {
            den.lcm_mut(c.denom());
        }
        r.iter().map(|c| Integer::from((c.clone() * Rational::from(&den)).numer())).collect()
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::new();
    let mut zero_resultants = 0;
    let mut trials = 0;
    let mut attempts = 0;
    while values.len() < FRAMES && attempts < FRAMES * MAX_FRAME_ATTEMPTS {
        attempts += 1;
        let t = match random_frame(&yi, &mut rng) {
            Some(t) => t,
            None => continue,
        };
        let ft = f.substitute_linear(&t);
        let gt = g.substitute_linear(&t);
        let e2 = [Rational::new(), Rational::new(), Rational::from(1)];
        if ft.eval_rational(&e2) == 0 || gt.eval_rational(&e2) == 0 {
            continue;
        }
        trials += 1;
        match resultant_valuation(&ft, &gt) {
            Some(v) => values.push(v),
            None => zero_resultants += 1,
        }
        if zero_resultants >= 3 {
            return Err(Error::CommonComponent);
        }
    }
    let order = values.into_iter().min().ok_or(Error::NonIsolatedPoint)?;
    Ok(MultiplicityValue { order, method: MultiplicityMethod::Resultant, trials })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutReport {
    pub order_f: u32,
    pub order_g: u32,
    pub intersection: u32,
    pub holds: bool,
}

/// Checks `i_y(f, g) >= v_y(f) v_y(g)`.
pub fn check_local_bezout(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial, y: &ProjectivePoint) -> Result<BezoutReport> {
    let order_f = vanishing_order(f, y)?.order;
    let order_g = vanishing_order(g, y)?.order;
    let intersection = intersection_multiplicity_plane(f, g, y)?.order;
    Ok(BezoutReport { order_f, order_g, intersection, holds: intersection >= order_f * order_g })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    /// Largest `k <= S` with `∂^I f(y) = 0` for all `|I| <= k`.
    pub vanishing_through: Option<u32>,
    /// Certified lower bound for the multiplicity of `div f` on `X` at `y`.
    pub certified_lower_bound: u32,
    /// Resultant cross-check for plane curves.
    pub cross_check: Option<u32>,
}

/// Certifies vanishing of `f` on `X` at `y` from derivatives of order at most `order`.
pub fn vanishing_from_derivatives(
    x: &VarietyPresentation,
    f: &HomogeneousPolynomial,
    y: &ProjectivePoint,
    order: u32,
) -> Result<VanishingReport> {
    let data = build_derivation_data(x)?;
    let t = x.rel_dim();
    let exact = y.rational_coords();
    let prec = y.precision();
    let threshold = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    match &exact {
        Some(r) => {
            if data.jacobian().eval_rational(r) == 0 {
                return Err(Error::SingularPoint("the Jacobian product vanishes".into()));
            }
        }
        None => {
            if data.jacobian().eval_complex(y.coords()).is_zero() {
                return Err(Error::SingularPoint("the Jacobian product vanishes".into()));
            }
        }
    }
    let space = crate::jet::JetSpace::new(t.max(1), order, 16);
    let mut vanishing_through = None;
    'orders: for k in 0..=order {
        for e in space.exponents().iter().filter(|e| e.iter().sum::<u32>() == k) {
            let index = &e[..t];
            if t == 0 && k > 0 {
                break 'orders;
            }
            let fi = data.derivative_polynomial(f, index)?;
            let zero = match &exact {
                Some(r) => fi.eval_rational(r) == 0,
                None => {
                    let v = fi.eval_complex(y.coords());
                    Float::with_val(prec, v.abs_ref()) < threshold
                }
            };
            if !zero {
                break 'orders;
            }
        }
        vanishing_through = Some(k);
    }
    let certified_lower_bound = vanishing_through.map(|k| k + 1).unwrap_or(0);
    let cross_check = match (x.ambient_dim(), x.rel_dim(), x.forms()) {
        (2, 1, [form]) if exact.is_some() => Some(intersection_multiplicity_plane(form, f, y)?.order),
        _ => None,
    };
    Ok(VanishingReport { vanishing_through, certified_lower_bound, cross_check })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub bound: u32,
    pub oracle: Option<u32>,
    pub holds: bool,
}

/// Lower bound `prod S_i` for the multiplicity of `alpha` in `X . div f_1 ... div f_p`.
///
/// Supported chains: a plane curve with one section, or the plane with two sections.
pub fn multiplicity_chain(
    x: &VarietyPresentation,
    sections: &[(HomogeneousPolynomial, u32)],
    alpha: &ProjectivePoint,
) -> Result<ChainReport> {
    if sections.is_empty() {
        return Ok(ChainReport { bound: 1, oracle: None, holds: true });
    }
    for (i, (f, s)) in sections.iter().enumerate() {
        let ambient = if i == 0 { x.clone() } else { VarietyPresentation::projective_space(x.ambient_dim()) };
        let ambient = if x.rel_dim() == x.ambient_dim() { VarietyPresentation::projective_space(x.ambient_dim()) } else { ambient };
        if *s > 0 {
            let report = vanishing_from_derivatives(&ambient, f, alpha, s - 1)?;
            if report.certified_lower_bound < *s {
                return Err(Error::UnverifiedVanishing(i + 1));
            }
        }
    }
    let bound: u32 = sections.iter().map(|(_, s)| *s).product();
    let oracle = match (x.ambient_dim(), x.rel_dim(), x.forms(), sections) {
        (2, 1, [form], [(f, _)]) => Some(
            intersection_multiplicity_plane(form, f, alpha)
                .map_err(|e| if matches!(e, Error::CommonComponent) { Error::ImproperIntersection(1) } else { e })?
                .order,
        ),
        (2, 2, [], [(f1, _), (f2, _)]) => Some(
            intersection_multiplicity_plane(f1, f2, alpha)
                .map_err(|e| if matches!(e, Error::CommonComponent) { Error::ImproperIntersection(2) } else { e })?
                .order,
        ),
        _ => return Err(Error::DeskScaleExceeded("chain configuration not supported".into())),
    };
    let holds = oracle.map(|o| o >= bound).unwrap_or(true);
    Ok(ChainReport { bound, oracle, holds })
}

/// Index maximizing `v / t` among `(v, t)` pairs, ties going to the first.
pub fn best_ratio_index(stats: &[(f64, f64)]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &(v, t)) in stats.iter().enumerate() {
        let r = v / t;
        if best.map(|(_, b)| r > b).unwrap_or(true) {
            best = Some((i, r));
        }
    }
    best.map(|(i, _)| i)
}

/// Component of `z` maximizing `v_x(Z_i) / t_H(Z_i)`.
pub fn weighted_vanishing_best(z: &Cycle, x: &ProjectivePoint, weight: f64) -> Result<usize> {
    let mut stats = Vec::with_capacity(z.components().len());
    for (_, comp) in z.components() {
        let v = match comp {
            Component::Point(p) => {
                let d = crate::metric::fs_distance_float(p, x)?;
                if d.is_zero() { 1.0 } else { 0.0 }
            }
            Component::Divisor(f) => vanishing_order(f, x)?.order as f64,
        };
        let t = weighted_size(&Cycle::new(vec![(1, comp.clone())])?, weight)?;
        stats.push((v, t));
    }
    best_ratio_index(&stats).ok_or_else(|| Error::InvalidInstance("empty cycle".into()))
}
