//! Empirical calibration of the constants used by the inequality checks.
//!
//! Every constant bounds a ratio `excess / scale` over a seeded set of small cases. The shipped
//! value is the worst observed ratio times [`SAFETY`], and never less than [`FLOOR`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::approx::{find_avoiding_subspace_in, AvoidOptions};
use crate::config::Calibration;
use crate::derivations::{
    build_derivation_data, derivative_sup, jacobian_norm_bound, norm_bound, VarietyPresentation,
};
use crate::error::Result;
use crate::heights::{liouville_check, min_distance_component};
use crate::metric::{cycle_distance_in, derivated_algebraic_distance_in, Chart, Component, Cycle, ProjectivePoint};
use crate::num;
use crate::polycore::{log_l2_norm, poly_mul, HomogeneousPolynomial};
use crate::samples::{random_integer_point, random_plane_curve, random_points_on, random_polynomial};

/// Factor applied to the worst observed ratio.
pub const SAFETY: f64 = 1.25;
/// Smallest value a calibrated constant takes.
pub const FLOOR: f64 = 0.05;

/// One fitted constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantFit {
    pub name: String,
    pub samples: usize,
    /// Largest `excess / scale` seen; the check holds with any constant at least this large.
    pub worst_ratio: f64,
    pub value: f64,
}

impl ConstantFit {
    fn from_ratios(name: &str, ratios: &[f64]) -> Self {
        let worst = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { name: name.into(), samples: ratios.len(), worst_ratio: worst, value: (SAFETY * worst).max(FLOOR) }
    }
}

/// Result of a full calibration run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CalibrationRun {
    pub seed: u64,
    pub precision_bits: u32,
    pub fits: Vec<ConstantFit>,
    pub calibration: Calibration,
}

fn rng_for(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ suite)
}

/// Product-norm constants: `(upper, lower)` with
/// `log|f|+log|g| - lower log(1+DD') <= log|fg| <= log|f|+log|g| + upper (D+D') + log C(D+D'+M, M)`.
pub fn calibrate_product(seed: u64) -> (ConstantFit, ConstantFit) {
    let mut rng = rng_for(seed, 1);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for _ in 0..200 {
        let n = rng.random_range(2..=4usize);
        let d1 = rng.random_range(1..=4u32);
        let d2 = rng.random_range(1..=4u32);
        let f = random_polynomial(&mut rng, n, d1, 9);
        let g = random_polynomial(&mut rng, n, d2, 9);
        let fg = poly_mul(&f, &g).expect("same variables");
        let split = log_l2_norm(&f) + log_l2_norm(&g);
        let joint = log_l2_norm(&fg);
        let binom = num::ln_binomial((d1 + d2) as u64 + (n - 1) as u64, (n - 1) as u64);
        upper.push((joint - split - binom) / (d1 + d2) as f64);
        lower.push((split - joint) / (1.0 + (d1 * d2) as f64).ln());
    }
    (ConstantFit::from_ratios("product_upper", &upper), ConstantFit::from_ratios("product_lower", &lower))
}

/// Liouville constant `d` from integer forms of degree at most 4 and rational points with
/// coordinates at most 100.
pub fn calibrate_liouville(seed: u64) -> Result<ConstantFit> {
    let mut rng = rng_for(seed, 2);
    let mut ratios = Vec::new();
    while ratios.len() < 20 {
        let n = rng.random_range(2..=3usize);
        let d = rng.random_range(1..=4u32);
        let f = random_polynomial(&mut rng, n, d, 9);
        let alpha = random_integer_point(&mut rng, n, 100, 256)?;
        let Ok(r) = liouville_check(&f, &alpha, 0.0) else { continue };
        ratios.push(-r.margin / (d as f64 * alpha.field_degree() as f64));
    }
    Ok(ConstantFit::from_ratios("liouville", &ratios))
}

/// Drift between the canonical chart and a rotated one, per `S max(1, log deg f)`.
pub fn calibrate_chart_change(seed: u64, prec: u32) -> Result<ConstantFit> {
    let mut rng = rng_for(seed, 3);
    let mut ratios = Vec::new();
    while ratios.len() < 40 {
        let n = rng.random_range(2..=3usize);
        let d = rng.random_range(1..=4u32);
        let s = rng.random_range(1..=d.min(3));
        let f = random_polynomial(&mut rng, n, d, 9);
        let theta = random_integer_point(&mut rng, n, 5, prec)?;
        let chart = Chart::canonical(&theta);
        let (Ok(a), Ok(b)) = (
            derivated_algebraic_distance_in(&f, &chart, s),
            derivated_algebraic_distance_in(&f, &chart.rotated(rng.random()), s),
        ) else {
            continue;
        };
        if a.is_finite() && b.is_finite() {
            ratios.push((a - b).abs() / (s as f64 * (d as f64).ln().max(1.0)));
        }
    }
    Ok(ConstantFit::from_ratios("chart_change", &ratios))
}

fn random_linear_form<R: Rng>(rng: &mut R, n: usize) -> HomogeneousPolynomial {
    random_polynomial(rng, n, 1, 3)
}

/// Change of `sup log|∂^I(f/g^D)|` when `x0` is replaced by another linear form, per
/// `(S + D) max(1, log(S D))`.
pub fn calibrate_denominator_change(seed: u64, prec: u32) -> Result<ConstantFit> {
    let mut rng = rng_for(seed, 4);
    let mut ratios = Vec::new();
    let mut attempt = 0u64;
    while ratios.len() < 30 {
        attempt += 1;
        let x = if attempt.is_multiple_of(2) { random_plane_curve(&mut rng, 2, 5)? } else { VarietyPresentation::projective_space(2) };
        let n = x.ambient_dim() + 1;
        let theta = if x.forms().is_empty() {
            random_integer_point(&mut rng, n, 9, prec)?
        } else {
            match random_points_on(&x, 1, rng.random(), prec).pop() {
                Some(p) => p,
                None => continue,
            }
        };
        let d = rng.random_range(1..=4u32);
        let s = rng.random_range(1..=3u32);
        let f = random_polynomial(&mut rng, n, d, 9);
        let g = random_linear_form(&mut rng, n);
        let data = build_derivation_data(&x)?;
        let (Ok(a), Ok(b)) = (derivative_sup(&f, s, &x, &data, &theta, None), derivative_sup(&f, s, &x, &data, &theta, Some(&g)))
        else {
            continue;
        };
        if a.is_finite() && b.is_finite() {
            ratios.push((a - b).abs() / ((s + d) as f64 * ((s * d) as f64).ln().max(1.0)));
        }
    }
    Ok(ConstantFit::from_ratios("denominator_change", &ratios))
}

fn random_curves(seed: u64, suite: u64, count: usize) -> Result<Vec<VarietyPresentation>> {
    let mut rng = rng_for(seed, suite);
    (0..count).map(|i| random_plane_curve(&mut rng, 2 + (i % 2) as u32, 5)).collect()
}

/// `log|P|_2` against `codim (h_X + c deg X)` on random conics and cubics.
pub fn calibrate_jacobian_norm(seed: u64) -> Result<ConstantFit> {
    let mut ratios = Vec::new();
    for x in random_curves(seed, 5, 20)? {
        let data = build_derivation_data(&x)?;
        let excess = log_l2_norm(data.jacobian()) - jacobian_norm_bound(&x, 0.0);
        ratios.push(excess / (x.codim() as f64 * x.degree() as f64));
    }
    Ok(ConstantFit::from_ratios("jacobian_norm", &ratios))
}

/// Norm bound for derivative polynomials on random conics and cubics, orders up to 4.
pub fn calibrate_derivation_norm(seed: u64) -> Result<ConstantFit> {
    let curves = random_curves(seed, 6, 20)?;
    let ratios: Vec<Vec<f64>> = curves
        .par_iter()
        .enumerate()
        .map(|(i, x)| -> Result<Vec<f64>> {
            let mut rng = rng_for(seed, 600 + i as u64);
            let data = build_derivation_data(x)?;
            let deg = rng.random_range(1..=3u32);
            let f = random_polynomial(&mut rng, 3, deg, 9);
            let mut out = Vec::new();
            for s in 1..=4u32 {
                let fi = data.derivative_polynomial(&f, &[s])?;
                if fi.is_zero() {
                    continue;
                }
                let excess = log_l2_norm(&fi) - norm_bound(&f, s, x, 0.0);
                out.push(excess / ((2 * s - 1) as f64 * x.codim() as f64 * x.degree() as f64));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(ConstantFit::from_ratios("derivation_norm", &ratios.concat()))
}

/// Slack of the minimal-component selection on random two-point cycles, per `log deg Z / a`.
pub fn calibrate_component_slack(seed: u64, prec: u32) -> Result<ConstantFit> {
    let mut rng = rng_for(seed, 7);
    let mut ratios = Vec::new();
    while ratios.len() < 60 {
        let n = rng.random_range(2..=3usize);
        let y1 = random_integer_point(&mut rng, n, 20, prec)?;
        let y2 = random_integer_point(&mut rng, n, 20, prec)?;
        let theta = random_integer_point(&mut rng, n, 20, prec)?;
        let m1 = rng.random_range(1..=3u32);
        let m2 = rng.random_range(1..=3u32);
        let Ok(z) = Cycle::new(vec![(m1, Component::Point(y1)), (m2, Component::Point(y2))]) else { continue };
        let s = rng.random_range(0..=2u32);
        let a = rng.random_range(1..=2u32) as f64;
        let Ok(choice) = min_distance_component(&z, &theta, s, a, 0.0) else { continue };
        let log_deg = (z.degree() as f64).ln();
        ratios.push((2.0 * choice.phi_component - choice.phi_cycle) * a / log_deg);
    }
    Ok(ConstantFit::from_ratios("component_slack", &ratios))
}

/// Tangent direction of a plane curve `F = 0` at `theta`: orthogonal to `theta` and killed by `dF`.
pub fn plane_tangent(f: &HomogeneousPolynomial, theta: &ProjectivePoint) -> Vec<Complex> {
    let prec = theta.precision();
    let c = theta.coords();
    let grad: Vec<Complex> = (0..3).map(|i| f.partial(i).eval_complex(c)).collect();
    let conj: Vec<Complex> = c.iter().map(|z| Complex::with_val(prec, z.conj_ref())).collect();
    let cross = |i: usize, j: usize| Complex::with_val(prec, &grad[i] * &conj[j]) - Complex::with_val(prec, &grad[j] * &conj[i]);
    let v = vec![cross(1, 2), cross(2, 0), cross(0, 1)];
    let norm = num::norm(&v);
    v.into_iter().map(|z| z / &norm).collect()
}

/// Loss from restricting to tangent multi-indices for zero-cycles on random conics, per
/// `deg Z max(1, log deg Z)`.
pub fn calibrate_tangent_restriction(seed: u64, prec: u32) -> Result<ConstantFit> {
    let mut rng = rng_for(seed, 8);
    let mut ratios = Vec::new();
    while ratios.len() < 40 {
        let x = random_plane_curve(&mut rng, 2, 5)?;
        let points = random_points_on(&x, 4, rng.random(), prec);
        if points.len() < 2 {
            continue;
        }
        let theta = points[0].clone();
        let chart = Chart::aligned(&theta, &[plane_tangent(&x.forms()[0], &theta)]);
        let count = rng.random_range(1..points.len());
        let comps: Vec<(u32, Component)> =
            points[1..=count].iter().map(|p| (rng.random_range(1..=2u32), Component::Point(p.clone()))).collect();
        let Ok(z) = Cycle::new(comps) else { continue };
        let s = rng.random_range(1..=2u32);
        let (Ok(full), Ok(tangent)) = (cycle_distance_in(&z, &chart, s, None), cycle_distance_in(&z, &chart, s, Some(1))) else {
            continue;
        };
        let deg = z.degree() as f64;
        ratios.push((full - tangent) / (deg * deg.ln().max(1.0)));
    }
    Ok(ConstantFit::from_ratios("tangent_restriction", &ratios))
}

/// Grid for `c_bar`; the smallest entry for which every calibration conic admits a point.
pub const AVOID_GRID: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0];

/// Number of calibration conics for the avoidance constants.
pub const AVOID_CONICS: usize = 40;

/// `(c_bar, c_tilde)` from integral points avoiding random conics.
pub fn calibrate_avoidance(seed: u64) -> Result<(ConstantFit, ConstantFit)> {
    let mut rng = rng_for(seed, 9);
    let curves: Vec<VarietyPresentation> = (0..AVOID_CONICS).map(|_| random_plane_curve(&mut rng, 2, 5)).collect::<Result<_>>()?;
    let samples: Vec<_> = curves.iter().enumerate().map(|(i, x)| x.sample_points(2000, seed ^ (900 + i as u64))).collect();
    for &c_bar in &AVOID_GRID {
        let opts = AvoidOptions { avoid_distance: c_bar, avoid_height: f64::INFINITY, ..AvoidOptions::default() };
        let found: Vec<Option<f64>> = curves
            .par_iter()
            .zip(samples.par_iter())
            .map(|(x, s)| find_avoiding_subspace_in(s, 2, x.degree() as u64, 2, &opts).ok().map(|w| w.height / (x.degree() as f64).ln()))
            .collect();
        if found.iter().all(Option::is_some) {
            let heights: Vec<f64> = found.into_iter().flatten().collect();
            let distance = ConstantFit { name: "avoid_distance".into(), samples: curves.len(), worst_ratio: c_bar, value: c_bar };
            return Ok((distance, ConstantFit::from_ratios("avoid_height", &heights)));
        }
    }
    Err(crate::Error::SearchExhausted("no grid value of c_bar works on every calibration conic".into()))
}

/// Runs every calibration suite.
pub fn calibrate(seed: u64, prec: u32) -> Result<CalibrationRun> {
    let (upper, lower) = calibrate_product(seed);
    let (c_bar, c_tilde) = calibrate_avoidance(seed)?;
    let fits = vec![
        upper,
        lower,
        calibrate_liouville(seed)?,
        calibrate_chart_change(seed, prec)?,
        calibrate_denominator_change(seed, prec)?,
        calibrate_jacobian_norm(seed)?,
        calibrate_derivation_norm(seed)?,
        calibrate_component_slack(seed, prec)?,
        calibrate_tangent_restriction(seed, prec)?,
        c_bar,
        c_tilde,
    ];
    let value = |name: &str| fits.iter().find(|f| f.name == name).map(|f| f.value).expect("every constant is fitted");
    let calibration = Calibration {
        product_upper: value("product_upper"),
        product_lower: value("product_lower"),
        liouville: value("liouville"),
        chart_change: value("chart_change"),
        denominator_change: value("denominator_change"),
        jacobian_norm: value("jacobian_norm"),
        derivation_norm: value("derivation_norm"),
        component_slack: value("component_slack"),
        tangent_restriction: value("tangent_restriction"),
        avoid_distance: value("avoid_distance"),
        avoid_height: value("avoid_height"),
    };
    calibration.validate()?;
    Ok(CalibrationRun { seed, precision_bits: prec, fits, calibration })
}
