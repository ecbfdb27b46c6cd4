use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use super::quadruple::{check_regular_growth, criterion_limit, GrowthQuadruple, LimitDiagnostics, RegularityReport};
use crate::algebraic::UniPoly;
use crate::config::RunConfig;
use crate::derivations::{build_derivation_data, derivative_sup, DerivationData, VarietyFile, VarietyPresentation};
use crate::error::{Error, Result};
use crate::metric::{algebraic_distance, fs_distance_float, Component, ComponentFile, PointFile, ProjectivePoint};
use crate::num;
use crate::polycore::{log_l2_norm, poly_mul, HomogeneousPolynomial, PolynomialFile};

/// Sections, growth data and a point, bundled for a criterion check.
#[derive(Clone, Debug)]
pub struct CriterionInstance {
    pub quadruple: GrowthQuadruple,
    pub theta: ProjectivePoint,
    pub variety: VarietyPresentation,
    /// `F_k` for the indices where a family is given.
    pub families: BTreeMap<usize, Vec<HomogeneousPolynomial>>,
    /// Linear form with `g(theta) != 0` used as denominator.
    pub g: HomogeneousPolynomial,
    pub s: u32,
    /// Subvarieties near `theta` tested by the restriction condition.
    pub candidates: Vec<Component>,
}

impl CriterionInstance {
    pub fn validate(&self) -> Result<()> {
        self.quadruple.validate()?;
        let n = self.variety.ambient_dim() + 1;
        if self.theta.num_coords() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.theta.num_coords() });
        }
        if self.g.num_vars() != n || self.g.degree() != 1 || self.g.is_zero() {
            return Err(Error::InvalidInstance("g must be a nonzero linear form".into()));
        }
        let prec = self.theta.precision();
        let tiny = -(prec as f64 / 2.0) * std::f64::consts::LN_2;
        if algebraic_distance(&self.g, &self.theta).map_or(true, |v| v < tiny) {
            return Err(Error::PoleAtPoint("g vanishes at theta".into()));
        }
        for f in self.variety.forms() {
            if algebraic_distance(f, &self.theta).is_ok_and(|v| v > tiny) {
                return Err(Error::PointOffVariety("a defining form does not vanish at theta".into()));
            }
        }
        for (&k, family) in &self.families {
            if k >= self.quadruple.len() {
                return Err(Error::InvalidInstance(format!("family index {k} beyond the prefix")));
            }
            if family.is_empty() {
                return Err(Error::InvalidInstance(format!("family {k} is empty")));
            }
            for f in family {
                if f.num_vars() != n || f.is_zero() {
                    return Err(Error::InvalidInstance(format!("family {k} has a zero or misplaced section")));
                }
            }
        }
        for c in &self.candidates {
            if c.num_coords() != n {
                return Err(Error::DimensionMismatch { expected: n, got: c.num_coords() });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from(self)).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        Self::try_from(&file)
    }
}

/// JSON form of a [`CriterionInstance`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub quadruple: GrowthQuadruple,
    pub theta: PointFile,
    /// Omitted for the whole projective space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<VarietyFile>,
    pub families: BTreeMap<String, Vec<PolynomialFile>>,
    pub g: PolynomialFile,
    pub s: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<ComponentFile>,
}

impl From<&CriterionInstance> for InstanceFile {
    fn from(inst: &CriterionInstance) -> Self {
        let is_space = inst.variety.forms().is_empty();
        Self {
            quadruple: inst.quadruple.clone(),
            theta: PointFile::from(&inst.theta),
            variety: (!is_space).then(|| VarietyFile::from(&inst.variety)),
            families: inst
                .families
                .iter()
                .map(|(k, v)| (k.to_string(), v.iter().map(PolynomialFile::from).collect()))
                .collect(),
            g: PolynomialFile::from(&inst.g),
            s: inst.s,
            candidates: inst
                .candidates
                .iter()
                .map(|c| match c {
                    Component::Point(p) => ComponentFile { mult: 1, point: Some(PointFile::from(p)), divisor: None },
                    Component::Divisor(f) => ComponentFile { mult: 1, point: None, divisor: Some(PolynomialFile::from(f)) },
                })
                .collect(),
        }
    }
}

impl TryFrom<&InstanceFile> for CriterionInstance {
    type Error = Error;

    fn try_from(file: &InstanceFile) -> Result<Self> {
        let theta = ProjectivePoint::try_from(&file.theta)?;
        let variety = match &file.variety {
            Some(v) => VarietyPresentation::try_from(v)?,
            None => VarietyPresentation::projective_space(theta.ambient_dim()),
        };
        let mut families = BTreeMap::new();
        for (k, v) in &file.families {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad family index {k:?}")))?;
            let polys: Result<Vec<HomogeneousPolynomial>> = v.iter().map(HomogeneousPolynomial::try_from).collect();
            families.insert(k, polys?);
        }
        let candidates = crate::metric::Cycle::from_file(&file.candidates)?.components().iter().map(|(_, c)| c.clone()).collect();
        let inst = Self {
            quadruple: file.quadruple.clone(),
            theta,
            variety,
            families,
            g: HomogeneousPolynomial::try_from(&file.g)?,
            s: file.s,
            candidates,
        };
        inst.validate()?;
        Ok(inst)
    }
}

/// Hypothesis that failed at some index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Degree,
    Norm,
    DerivativeBound,
    CommonZero,
    Restriction,
}

/// Overall outcome of a harness run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    HypothesesHold,
    HypothesisFailed { k: usize, which: Hypothesis },
    Inconclusive { reason: String },
}

/// How the common-zero condition was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommonZeroMethod {
    /// Common roots of binary forms, located exactly.
    Exact,
    /// Random points in the ball; probabilistic.
    Sampled,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommonZeroCheck {
    pub method: CommonZeroMethod,
    /// `log` of the ball radius around `theta`.
    pub log_radius: f64,
    /// Closest common zero (exact) or best sampled point, as `log |x, theta|`.
    pub witness_log_distance: Option<f64>,
    pub samples: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionCheck {
    /// Candidates on which no derivative of order `<= S_k/3` survives.
    pub vanishing_candidates: Vec<usize>,
    pub max_order: u64,
    pub ok: bool,
}

/// Per-index results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexCheck {
    pub k: usize,
    pub max_degree: u32,
    pub degree_bound: u64,
    pub degree_ok: bool,
    pub max_log_norm: f64,
    pub norm_bound: f64,
    pub norm_ok: bool,
    /// `max_f sup_{|I| <= S_k} log|∂^I (f/g^{deg f})(theta)|`; `None` when all vanish.
    pub derivative_sup: Option<f64>,
    pub derivative_bound: f64,
    pub derivative_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_zero: Option<CommonZeroCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<RestrictionCheck>,
}

impl IndexCheck {
    fn first_failure(&self) -> Option<Hypothesis> {
        if !self.degree_ok {
            Some(Hypothesis::Degree)
        } else if !self.norm_ok {
            Some(Hypothesis::Norm)
        } else if !self.derivative_ok {
            Some(Hypothesis::DerivativeBound)
        } else if self.common_zero.as_ref().is_some_and(|c| !c.ok) {
            Some(Hypothesis::CommonZero)
        } else if self.restriction.as_ref().is_some_and(|r| !r.ok) {
            Some(Hypothesis::Restriction)
        } else {
            None
        }
    }
}

/// Report of a criterion harness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarnessReport {
    pub criterion: String,
    pub checks: Vec<IndexCheck>,
    pub limit: LimitDiagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<RegularityReport>,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// `s + 1` when the hypotheses hold: the criterion asserts `t >= s + 1`.
    pub asserted_min_rel_dim: Option<u32>,
    pub known_rel_dim: usize,
    /// Whether the assertion is compatible with the known relative dimension.
    pub consistent: Option<bool>,
}

impl HarnessReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HypothesesHold
    }
}

fn tiny_log(prec: u32) -> f64 {
    -(prec as f64 / 2.0) * std::f64::consts::LN_2
}

/// `f g^(D - deg f)`, so that `f / g^D` is the quotient of two sections of the same degree.
/// Sections already above `D` are left alone; the degree check reports them.
fn lift_to_degree(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial, degree: u64) -> HomogeneousPolynomial {
    let deg = f.degree() as u64;
    if deg >= degree {
        return f.clone();
    }
    poly_mul(f, &g.pow((degree - deg) as u32)).expect("same number of variables")
}

#[derive(Clone, Copy)]
struct Checks {
    common_zero: bool,
    restriction: bool,
}

fn index_check(inst: &CriterionInstance, data: &DerivationData, k: usize, cfg: &RunConfig, which: Checks) -> Result<IndexCheck> {
    let q = &inst.quadruple;
    let family = &inst.families[&k];
    let max_degree = family.iter().map(|f| f.degree()).max().unwrap_or(0);
    let max_log_norm = family.iter().map(log_l2_norm).fold(f64::NEG_INFINITY, f64::max);
    let order = q.orders[k] as u32;
    let mut sup = f64::NEG_INFINITY;
    for f in family {
        let lifted = lift_to_degree(f, &inst.g, q.degrees[k]);
        let v = derivative_sup(&lifted, order, &inst.variety, data, &inst.theta, Some(&inst.g))?;
        sup = sup.max(v);
    }
    let derivative_bound = -q.v(k);
    let common_zero = if which.common_zero && k >= 1 { Some(common_zero_check(inst, k, cfg)?) } else { None };
    let restriction = if which.restriction { Some(restriction_check(inst, data, k)?) } else { None };
    Ok(IndexCheck {
        k,
        max_degree,
        degree_bound: q.degrees[k],
        degree_ok: max_degree as u64 <= q.degrees[k],
        max_log_norm,
        norm_bound: q.h(k),
        norm_ok: max_log_norm <= q.h(k),
        derivative_sup: sup.is_finite().then_some(sup),
        derivative_bound,
        derivative_ok: sup <= derivative_bound,
        common_zero,
        restriction,
    })
}

/// `log` radius of the ball in which `F_k` may not have a common zero.
fn ball_log_radius(inst: &CriterionInstance, k: usize, cfg: &RunConfig) -> f64 {
    let q = &inst.quadruple;
    let r = q.v(k - 1) / q.s(k - 1);
    if cfg.flip_ball_sign {
        r
    } else {
        -r
    }
}

fn common_zero_check(inst: &CriterionInstance, k: usize, cfg: &RunConfig) -> Result<CommonZeroCheck> {
    let log_radius = ball_log_radius(inst, k, cfg);
    let family = &inst.families[&k];
    if inst.theta.num_coords() == 2 && inst.variety.forms().is_empty() {
        return exact_common_zero(family, &inst.theta, log_radius);
    }
    sampled_common_zero(inst, k, log_radius, cfg)
}

/// Binary forms: common zeros are the roots of the gcd of the dehomogenizations, plus `[0:1]`
/// when every form is divisible by `x0`.
fn exact_common_zero(family: &[HomogeneousPolynomial], theta: &ProjectivePoint, log_radius: f64) -> Result<CommonZeroCheck> {
    let prec = theta.precision();
    let mut gcd: Option<UniPoly> = None;
    let mut at_infinity = true;
    for f in family {
        let coeffs: Vec<rug::Rational> = (0..=f.degree()).map(|j| f.coeff(&[f.degree() - j, j])).collect();
        at_infinity &= coeffs.last().is_some_and(|c| *c == 0);
        let p = UniPoly::new(coeffs);
        gcd = Some(match gcd {
            None => p,
            Some(g) => g.gcd(&p),
        });
    }
    let mut zeros: Vec<ProjectivePoint> = Vec::new();
    if let Some(g) = gcd.filter(|g| g.degree().unwrap_or(0) > 0) {
        for r in g.roots(prec) {
            zeros.push(ProjectivePoint::from_complex(vec![num::complex_one(prec), r])?);
        }
    }
    if at_infinity {
        zeros.push(ProjectivePoint::from_i64(&[0, 1], prec)?);
    }
    let mut witness: Option<f64> = None;
    for z in &zeros {
        let d = num::ln_float(&fs_distance_float(z, theta)?);
        witness = Some(witness.map_or(d, |w: f64| w.min(d)));
    }
    let ok = witness.is_none_or(|w| w > log_radius);
    Ok(CommonZeroCheck { method: CommonZeroMethod::Exact, log_radius, witness_log_distance: witness, samples: 0, ok })
}

/// Random points of `X` in the ball; fails when every section is as small as `e^{-V_k}` there.
fn sampled_common_zero(inst: &CriterionInstance, k: usize, log_radius: f64, cfg: &RunConfig) -> Result<CommonZeroCheck> {
    let prec = inst.theta.precision();
    let family = &inst.families[&k];
    let threshold = -inst.quadruple.v(k);
    let t = inst.variety.rel_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let radius = Float::with_val(prec, log_radius).exp();
    let mut best: Option<(f64, f64)> = None;
    let mut count = 0;
    for _ in 0..cfg.near_samples {
        let delta: Vec<Complex> = (0..t)
            .map(|_| {
                let re: f64 = rng.random_range(-1.0..1.0);
                let im: f64 = rng.random_range(-1.0..1.0);
                Complex::with_val(prec, (re, im)) * &radius / (2.0 * t as f64)
            })
            .collect();
        let Ok(x) = near_point(&inst.variety, &inst.theta, &delta) else { continue };
        let Ok(d) = fs_distance_float(&x, &inst.theta) else { continue };
        let dist = num::ln_float(&d);
        if dist > log_radius {
            continue;
        }
        count += 1;
        let worst = family.iter().map(|f| algebraic_distance(f, &x).unwrap_or(f64::NEG_INFINITY)).fold(f64::NEG_INFINITY, f64::max);
        if best.is_none_or(|(w, _)| worst < w) {
            best = Some((worst, dist));
        }
    }
    let ok = best.is_none_or(|(w, _)| w >= threshold);
    Ok(CommonZeroCheck {
        method: CommonZeroMethod::Sampled,
        log_radius,
        witness_log_distance: best.map(|(_, d)| d),
        samples: count,
        ok,
    })
}

/// Point of `X` whose base coordinates are those of `theta` shifted by `delta`, fibers by Newton.
fn near_point(x: &VarietyPresentation, theta: &ProjectivePoint, delta: &[Complex]) -> Result<ProjectivePoint> {
    let prec = theta.precision();
    let c = theta.coords();
    if c[0].is_zero() {
        return Err(Error::DegeneratePoint("x0 vanishes at theta".into()));
    }
    let mut coords: Vec<Complex> = c.iter().map(|z| Complex::with_val(prec, z / &c[0])).collect();
    for (i, d) in delta.iter().enumerate() {
        coords[i + 1] += d;
    }
    for (&mu, p) in x.eliminants() {
        let dp = p.partial(mu);
        for _ in 0..(prec / 4 + 40) {
            let v = p.eval_complex(&coords);
            let dv = dp.eval_complex(&coords);
            if dv.is_zero() {
                return Err(Error::SingularPoint(format!("eliminant for x{mu} is singular")));
            }
            let step = Complex::with_val(prec, &v / &dv);
            coords[mu] -= &step;
            let s = Float::with_val(prec, step.abs_ref());
            if s.is_zero() || s.get_exp().unwrap_or(i32::MIN) < -(prec as i32) + 8 {
                break;
            }
        }
    }
    ProjectivePoint::from_complex(coords)
}

/// Points at which to test a candidate: the point itself, or seeded points of a divisor.
fn candidate_points(c: &Component, prec: u32, seed: u64) -> Result<Vec<ProjectivePoint>> {
    match c {
        Component::Point(p) => Ok(vec![p.clone()]),
        Component::Divisor(h) => divisor_points(h, 8, prec, seed),
    }
}

/// Points of `div h`: random rational values for all but one coordinate, then every root in the
/// remaining one.
fn divisor_points(h: &HomogeneousPolynomial, count: usize, prec: u32, seed: u64) -> Result<Vec<ProjectivePoint>> {
    let n = h.num_vars();
    let var = (0..n).max_by_key(|&v| (h.degree_in(v), std::cmp::Reverse(v))).expect("at least one variable");
    if h.degree_in(var) == 0 {
        return Err(Error::InvalidPolynomial("constant divisor".into()));
    }
    let slices = h.coefficients_in(var);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let x: Vec<Rational> = (0..n)
            .map(|i| if i == var { Rational::new() } else { Rational::from((rng.random_range(-50i64..=50), rng.random_range(1i64..=20))) })
            .collect();
        let coeffs: Vec<Rational> = slices.iter().map(|c| c.eval_rational(&x)).collect();
        let poly = UniPoly::new(coeffs);
        if poly.degree().unwrap_or(0) == 0 {
            continue;
        }
        for r in poly.roots(prec) {
            let coords: Vec<Complex> =
                x.iter().enumerate().map(|(i, c)| if i == var { r.clone() } else { num::complex_from_rational(prec, c) }).collect();
            if let Ok(p) = ProjectivePoint::from_complex(coords) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn restriction_check(inst: &CriterionInstance, data: &DerivationData, k: usize) -> Result<RestrictionCheck> {
    let prec = inst.theta.precision();
    let max_order = inst.quadruple.orders[k] / 3;
    let family = &inst.families[&k];
    let mut vanishing = Vec::new();
    for (i, c) in inst.candidates.iter().enumerate() {
        let points = candidate_points(c, prec, i as u64 + 1)?;
        let survives = points.iter().all(|y| {
            let floor = tiny_log(y.precision().min(prec));
            family.iter().any(|f| {
                derivative_sup(f, max_order as u32, &inst.variety, data, y, Some(&inst.g))
                    .is_ok_and(|v| v - log_l2_norm(f) > floor)
            })
        });
        if !survives {
            vanishing.push(i);
        }
    }
    Ok(RestrictionCheck { ok: vanishing.is_empty(), vanishing_candidates: vanishing, max_order })
}

fn assemble(
    criterion: &str,
    inst: &CriterionInstance,
    checks: Vec<IndexCheck>,
    limit: LimitDiagnostics,
    regularity: Option<RegularityReport>,
) -> HarnessReport {
    let failure = checks.iter().find_map(|c| c.first_failure().map(|w| (c.k, w)));
    let verdict = match failure {
        Some((k, which)) => Verdict::HypothesisFailed { k, which },
        None if regularity.as_ref().is_some_and(|r| !r.holds) => Verdict::Inconclusive { reason: "regularity".into() },
        None if !limit.diverges => Verdict::Inconclusive { reason: "divergence".into() },
        None if checks.is_empty() => Verdict::Inconclusive { reason: "no families".into() },
        None => Verdict::HypothesesHold,
    };
    let known_rel_dim = inst.variety.rel_dim();
    let asserted = (verdict == Verdict::HypothesesHold).then_some(inst.s + 1);
    HarnessReport {
        criterion: criterion.into(),
        checks,
        limit,
        regularity,
        verdict,
        asserted_min_rel_dim: asserted,
        known_rel_dim,
        consistent: asserted.map(|a| a as usize <= known_rel_dim),
    }
}

fn run_checks(inst: &CriterionInstance, cfg: &RunConfig, which: Checks) -> Result<Vec<IndexCheck>> {
    let data = build_derivation_data(&inst.variety)?;
    let keys: Vec<usize> = inst.families.keys().copied().collect();
    keys.par_iter().map(|&k| index_check(inst, &data, k, cfg, which)).collect()
}

/// Checks the degree, norm, derivative and common-zero hypotheses of the first criterion
/// at every index carrying a family, plus the divergence of the limit.
pub fn check_hypotheses_algind1(inst: &CriterionInstance, cfg: &RunConfig) -> Result<HarnessReport> {
    inst.validate()?;
    let checks = run_checks(inst, cfg, Checks { common_zero: true, restriction: false })?;
    let limit = criterion_limit(&inst.quadruple, inst.s, cfg.divergence_factor);
    Ok(assemble("algind1", inst, checks, limit, None))
}

/// Checks the hypotheses of the second criterion: regular growth, strict divergence, and per
/// index the norm, derivative and restriction conditions.
pub fn check_hypotheses_algind2(inst: &CriterionInstance, cfg: &RunConfig) -> Result<HarnessReport> {
    inst.validate()?;
    let regularity = check_regular_growth(&inst.quadruple)?;
    let limit = criterion_limit(&inst.quadruple, inst.s, cfg.divergence_factor);
    if !regularity.holds {
        return Ok(assemble("algind2", inst, Vec::new(), limit, Some(regularity)));
    }
    let mut limit = limit;
    let start = regularity.start.unwrap_or(0);
    limit.diverges &= limit.values[start..].windows(2).all(|w| w[1] > w[0]);
    let checks = run_checks(inst, cfg, Checks { common_zero: false, restriction: true })?;
    Ok(assemble("algind2", inst, checks, limit, Some(regularity)))
}
