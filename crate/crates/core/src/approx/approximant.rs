use rayon::prelude::*;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::lll::lll_reduce;
use crate::algebraic::UniPoly;
use crate::error::{Error, Result};
use crate::heights::{point_height, HeightValue};
use crate::metric::{log_fs_distance, ExactCoords, PointFile, ProjectivePoint, MAX_FIELD_DEGREE};
use crate::num;

/// Fewest decimal digits accepted for a numerical target.
pub const MIN_DIGITS: u32 = 40;

/// An algebraic point close to a target, with its minimal polynomial.
#[derive(Clone, Debug)]
pub struct ApproximantResult {
    /// Primitive integer minimal polynomial of the approximated coordinate ratio.
    pub minpoly: UniPoly,
    pub alpha: ProjectivePoint,
    pub degree: usize,
    pub height: HeightValue,
    /// `log |alpha, theta|`; `None` when the target is hit exactly.
    pub log_distance: Option<f64>,
}

/// JSON form of an [`ApproximantResult`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproximantReport {
    pub minpoly: Vec<String>,
    pub alpha: PointFile,
    pub degree: usize,
    pub height: f64,
    pub log_distance: Option<f64>,
    pub exact: bool,
}

impl From<&ApproximantResult> for ApproximantReport {
    fn from(r: &ApproximantResult) -> Self {
        Self {
            minpoly: r.minpoly.integer_coeffs().iter().map(|c| c.to_string()).collect(),
            alpha: PointFile::from(&r.alpha),
            degree: r.degree,
            height: r.height.value,
            log_distance: r.log_distance,
            exact: r.log_distance.is_none(),
        }
    }
}

/// Integer polynomial found by lattice reduction, with its value at the target.
#[derive(Clone, Debug)]
struct Candidate {
    poly: UniPoly,
    log_value: f64,
    log_height: f64,
}

/// Searches for an algebraic approximation of `theta` of degree at most `max_degree` whose
/// minimal polynomial has log coefficient norm at most `max_height_log`.
///
/// `digits` is the number of correct decimal digits of `theta`; rational exact inputs
/// are answered exactly.
pub fn find_algebraic_approximant(
    theta: &ProjectivePoint,
    digits: u32,
    max_degree: usize,
    max_height_log: f64,
) -> Result<ApproximantResult> {
    if max_degree == 0 {
        return Err(Error::Config("max_degree must be positive".into()));
    }
    if max_degree > MAX_FIELD_DEGREE {
        return Err(Error::UnsupportedField(format!("degree {max_degree} exceeds {MAX_FIELD_DEGREE}")));
    }
    if let Some(ExactCoords::Rational(v)) = theta.exact() {
        return exact_rational(theta, v);
    }
    if digits < MIN_DIGITS {
        return Err(Error::PrecisionInsufficient(format!("need {MIN_DIGITS} digits, got {digits}")));
    }
    let prec = theta.precision().max(num::bits_for_digits(digits) + 64);
    let coords = theta.with_precision(prec).coords().to_vec();
    if coords[0].is_zero() {
        return Err(Error::DegeneratePoint("first coordinate vanishes; reorder coordinates".into()));
    }
    let ratios: Vec<Complex> = coords[1..].iter().map(|c| Complex::with_val(prec, c / &coords[0])).collect();
    let mut found = Vec::with_capacity(ratios.len());
    for tau in &ratios {
        found.push(approximate_number(tau, digits, max_degree, max_height_log, prec)?);
    }
    assemble(theta, &ratios, found, prec)
}

fn exact_rational(theta: &ProjectivePoint, v: &[Integer]) -> Result<ApproximantResult> {
    let alpha = theta.clone();
    let minpoly = if v.len() == 2 {
        UniPoly::from_integers([-v[1].clone(), v[0].clone()]).primitive()
    } else {
        UniPoly::from_i64(&[0, 1])
    };
    Ok(ApproximantResult { minpoly, degree: 1, height: point_height(&alpha)?, alpha, log_distance: None })
}

/// Combines coordinatewise approximants into a projective point.
fn assemble(theta: &ProjectivePoint, ratios: &[Complex], found: Vec<UniPoly>, prec: u32) -> Result<ApproximantResult> {
    let irrational: Vec<usize> = (0..found.len()).filter(|&i| found[i].degree() != Some(1)).collect();
    let one = UniPoly::constant(Rational::from(1));
    let alpha = match irrational.len() {
        0 => {
            let mut coords = vec![Rational::from(1)];
            coords.extend(found.iter().map(linear_root));
            ProjectivePoint::from_rationals(&coords, prec)?
        }
        1 => {
            let i = irrational[0];
            let mut coords = vec![one.clone()];
            for (j, p) in found.iter().enumerate() {
                coords.push(if j == i { UniPoly::from_i64(&[0, 1]) } else { UniPoly::constant(linear_root(p)) });
            }
            ProjectivePoint::from_algebraic(found[i].clone(), coords, &ratios[i], prec)?
        }
        _ => {
            return Err(Error::UnsupportedField(
                "several irrational coordinates would need a common number field".into(),
            ))
        }
    };
    let minpoly = irrational.first().map(|&i| found[i].clone()).unwrap_or_else(|| found[0].clone());
    let degree = alpha.field_degree();
    let d = log_fs_distance(&alpha, theta)?;
    let log_distance = d.is_finite().then_some(d);
    let height = point_height(&alpha)?;
    Ok(ApproximantResult { minpoly, alpha, degree, height, log_distance })
}

fn linear_root(p: &UniPoly) -> Rational {
    let c = p.coeffs();
    -(c[0].clone() / &c[1])
}

/// Finds the minimal polynomial of a number close to `tau`.
fn approximate_number(tau: &Complex, digits: u32, max_degree: usize, max_height_log: f64, prec: u32) -> Result<UniPoly> {
    for d in 1..=max_degree {
        let mut accepted: Vec<Candidate> = Vec::new();
        for bits in scales(digits) {
            for c in lattice_candidates(tau, d, bits, prec) {
                if c.log_height > max_height_log || c.poly.degree() != Some(d) {
                    continue;
                }
                if c.log_value <= -2.0 * (d as f64 + 1.0) * c.log_height.max(1.0) {
                    accepted.push(c);
                }
            }
            if !accepted.is_empty() {
                break;
            }
        }
        if let Some(best) = accepted.into_iter().min_by(|a, b| a.log_value.total_cmp(&b.log_value)) {
            return Ok(irreducible_factor_at(&best.poly, tau, prec));
        }
    }
    Err(Error::NoCandidate(format!("no relation of degree <= {max_degree} within log height {max_height_log}")))
}

/// Lattice scales in bits, from 0.9 of the available precision downwards.
fn scales(digits: u32) -> Vec<u32> {
    let top = (0.9 * digits as f64 * std::f64::consts::LOG2_10).floor() as u32;
    let step = (top / 8).max(8);
    let mut out = Vec::new();
    let mut e = top;
    while e >= 16 {
        out.push(e);
        if e < step + 16 {
            break;
        }
        e -= step;
    }
    out
}

fn lattice_candidates(tau: &Complex, d: usize, bits: u32, prec: u32) -> Vec<Candidate> {
    let scale = Float::with_val(prec, Float::i_exp(1, bits as i32));
    let real_only = {
        let im = Float::with_val(prec, tau.imag().abs_ref());
        im.is_zero() || im.get_exp().unwrap_or(i32::MIN) < -(bits as i32)
    };
    let mut power = num::complex_one(prec);
    let mut rows = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut row = vec![Integer::new(); d + 1];
        row[j] = Integer::from(1);
        let re = Float::with_val(prec, power.real() * &scale).round();
        row.push(re.to_integer().expect("finite"));
        if !real_only {
            let im = Float::with_val(prec, power.imag() * &scale).round();
            row.push(im.to_integer().expect("finite"));
        }
        rows.push(row);
        power *= tau;
    }
    lll_reduce(rows)
        .into_iter()
        .filter_map(|v| {
            let poly = UniPoly::from_integers(v[..=d].iter().cloned()).primitive();
            if poly.degree().unwrap_or(0) == 0 {
                return None;
            }
            let log_value = num::ln_abs(&poly.eval_complex(tau));
            Some(Candidate { log_height: poly.log_coefficient_norm(), poly, log_value })
        })
        .collect()
}

/// Irreducible factor of `p` vanishing at the root nearest `tau`.
///
/// Every integer factor corresponds to a subset of roots; each subset's product, scaled by the
/// leading coefficient, is rounded and confirmed by exact division.
pub fn irreducible_factor_at(p: &UniPoly, tau: &Complex, prec: u32) -> UniPoly {
    let p = p.squarefree();
    let roots = p.roots(prec);
    let n = roots.len();
    if n <= 1 {
        return p;
    }
    let nearest = (0..n)
        .min_by(|&a, &b| {
            let da = Float::with_val(prec, (&roots[a] - tau.clone()).abs_ref());
            let db = Float::with_val(prec, (&roots[b] - tau.clone()).abs_ref());
            da.total_cmp(&db)
        })
        .expect("nonempty");
    let lead = num::complex_from_rational(prec, &p.leading());
    for k in 1..n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k || mask & (1 << nearest) == 0 {
                continue;
            }
            let mut coeffs = vec![lead.clone()];
            for (i, r) in roots.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    coeffs = multiply_linear(&coeffs, r, prec);
                }
            }
            if let Some(q) = round_to_integers(&coeffs) {
                if q.degree().unwrap_or(0) > 0 && p.div_rem(&q).1.is_zero() {
                    return q.primitive();
                }
            }
        }
    }
    p
}

fn multiply_linear(c: &[Complex], r: &Complex, prec: u32) -> Vec<Complex> {
    let mut out = vec![num::complex_zero(prec); c.len() + 1];
    for (i, ci) in c.iter().enumerate() {
        out[i + 1] += ci;
        out[i] -= Complex::with_val(prec, ci * r);
    }
    out
}

fn round_to_integers(c: &[Complex]) -> Option<UniPoly> {
    let mut ints = Vec::with_capacity(c.len());
    for z in c {
        let re = z.real().clone();
        let rounded = Float::with_val(re.prec(), re.round_ref());
        let err = Float::with_val(re.prec(), &re - &rounded).abs().to_f64() + z.imag().clone().abs().to_f64();
        if err > 1e-20 * (1.0 + rounded.clone().abs().to_f64()) {
            return None;
        }
        ints.push(rounded.to_integer()?);
    }
    Some(UniPoly::from_integers(ints))
}

/// Algebraic point of degree at most `max_degree` and minimal polynomial log height at most
/// `height_bound` closest to `theta`, among all lattice candidates at every scale.
///
/// Unlike [`find_algebraic_approximant`] no quality threshold is imposed, so this also returns
/// good approximations of transcendental targets.
pub fn best_approximant(theta: &ProjectivePoint, digits: u32, max_degree: usize, height_bound: f64) -> Result<ApproximantResult> {
    if theta.num_coords() != 2 {
        return Err(Error::DimensionMismatch { expected: 1, got: theta.ambient_dim() });
    }
    if max_degree == 0 || max_degree > MAX_FIELD_DEGREE {
        return Err(Error::UnsupportedField(format!("degree {max_degree} outside 1..={MAX_FIELD_DEGREE}")));
    }
    if digits < MIN_DIGITS {
        return Err(Error::PrecisionInsufficient(format!("need {MIN_DIGITS} digits, got {digits}")));
    }
    let prec = theta.precision().max(num::bits_for_digits(digits) + 64);
    let coords = theta.with_precision(prec).coords().to_vec();
    if coords[0].is_zero() {
        return Err(Error::DegeneratePoint("first coordinate vanishes".into()));
    }
    let tau = Complex::with_val(prec, &coords[1] / &coords[0]);
    let top = (0.9 * digits as f64 * std::f64::consts::LOG2_10).floor() as u32;
    let mut best: Option<(f64, ApproximantResult)> = None;
    for d in 1..=max_degree {
        for bits in (8..=top).step_by(8) {
            for c in lattice_candidates(&tau, d, bits, prec) {
                if c.log_height > height_bound {
                    continue;
                }
                let q = irreducible_factor_at(&c.poly, &tau, prec);
                if q.log_coefficient_norm() > height_bound {
                    continue;
                }
                let Ok(r) = assemble(theta, std::slice::from_ref(&tau), vec![q], prec) else { continue };
                let key = r.log_distance.unwrap_or(f64::NEG_INFINITY);
                if best.as_ref().is_none_or(|(b, _)| key < *b) {
                    best = Some((key, r));
                }
            }
        }
    }
    best.map(|(_, r)| r).ok_or_else(|| Error::NoCandidate(format!("nothing within log height {height_bound}")))
}

/// One cell of an exponent scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentCell {
    pub degree: usize,
    pub height_bound: f64,
    /// Best `log |alpha, theta|`, or `None` for an exact hit.
    pub log_distance: Option<f64>,
    pub alpha_degree: usize,
    pub alpha_height: f64,
    /// `t_a(alpha)` with `a = height_bound / degree`.
    pub size: f64,
    /// `-log |alpha, theta| / (size * degree^M)`; `None` when saturated by an exact hit.
    pub exponent: Option<f64>,
}

/// Scans `(degree, height)` cells and reports the best approximation found in each.
pub fn approximation_exponent(theta: &ProjectivePoint, digits: u32, schedule: &[(usize, f64)]) -> Result<Vec<ExponentCell>> {
    if theta.num_coords() != 2 {
        return Err(Error::DimensionMismatch { expected: 1, got: theta.ambient_dim() });
    }
    if digits < MIN_DIGITS && theta.exact().is_none() {
        return Err(Error::PrecisionInsufficient(format!("need {MIN_DIGITS} digits, got {digits}")));
    }
    schedule.par_iter().map(|&(d, h)| exponent_cell(theta, digits, d, h)).collect()
}

fn exponent_cell(theta: &ProjectivePoint, digits: u32, max_degree: usize, height_bound: f64) -> Result<ExponentCell> {
    if max_degree == 0 || max_degree > MAX_FIELD_DEGREE {
        return Err(Error::UnsupportedField(format!("degree {max_degree} outside 1..={MAX_FIELD_DEGREE}")));
    }
    let m = theta.ambient_dim() as i32;
    let a = height_bound / max_degree as f64;
    if let Some(ExactCoords::Rational(v)) = theta.exact() {
        let r = exact_rational(theta, v)?;
        let size = a + r.height.value;
        return Ok(ExponentCell {
            degree: max_degree,
            height_bound,
            log_distance: None,
            alpha_degree: 1,
            alpha_height: r.height.value,
            size,
            exponent: None,
        });
    }
    let r = best_approximant(theta, digits, max_degree, height_bound)?;
    let size = a * r.degree as f64 + r.degree as f64 * r.height.value;
    let exponent = r.log_distance.map(|l| -l / (size * (max_degree as f64).powi(m)));
    Ok(ExponentCell {
        degree: max_degree,
        height_bound,
        log_distance: r.log_distance,
        alpha_degree: r.degree,
        alpha_height: r.height.value,
        size,
        exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target(text: &str) -> (ProjectivePoint, u32) {
        let (r, digits) = num::parse_rational(text).unwrap();
        let digits = digits.unwrap_or(0);
        let prec = num::bits_for_digits(digits.max(40)) + 64;
        let tau = num::complex_from_rational(prec, &r);
        (ProjectivePoint::from_complex(vec![num::complex_one(prec), tau]).unwrap(), digits)
    }

    #[test]
    fn recovers_sqrt_two() {
        let (theta, digits) = target("1.414213562373095048801688724209698078569");
        let r = find_algebraic_approximant(&theta, digits, 2, 10.0).unwrap();
        assert_eq!(r.minpoly, UniPoly::from_i64(&[-2, 0, 1]));
        assert!(r.log_distance.unwrap() < -80.0);
    }

    #[test]
    fn recovers_one_plus_cube_root_two() {
        let (theta, digits) = target("2.259921049894873164767210607278228350570");
        let r = find_algebraic_approximant(&theta, digits, 3, 10.0).unwrap();
        assert_eq!(r.minpoly, UniPoly::from_i64(&[-3, 3, -3, 1]));
    }

    #[test]
    fn rational_input_is_exact() {
        let theta = ProjectivePoint::from_i64(&[7, 3], 128).unwrap();
        let r = find_algebraic_approximant(&theta, 0, 2, 10.0).unwrap();
        assert!(r.log_distance.is_none());
        assert_eq!(r.minpoly, UniPoly::from_i64(&[-3, 7]));
        assert_eq!(r.degree, 1);
    }

    #[test]
    fn short_input_is_rejected() {
        let (theta, _) = target("1.41421356237309504880");
        assert!(matches!(find_algebraic_approximant(&theta, 21, 2, 10.0), Err(Error::PrecisionInsufficient(_))));
    }

    #[test]
    fn factor_extraction() {
        // (x^2 - 2)(x - 3) has the factor x^2 - 2 at sqrt 2
        let p = UniPoly::from_i64(&[-2, 0, 1]).mul(&UniPoly::from_i64(&[-3, 1]));
        let tau = Complex::with_val(256, (1.41, 0));
        assert_eq!(irreducible_factor_at(&p, &tau, 256), UniPoly::from_i64(&[-2, 0, 1]));
    }
}
