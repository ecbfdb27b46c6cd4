use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use diophant_core::approx::{
    approximation_exponent, find_algebraic_approximant, find_avoiding_subspace, ApproximantReport, AvoidOptions,
    AvoidingSubspaceReport, ExponentCell,
};
use diophant_core::calibrate::calibrate;
use diophant_core::config::RunConfig;
use diophant_core::criteria::{check_hypotheses_algind1, check_hypotheses_algind2, instances, CriterionInstance, HarnessReport};
use diophant_core::derivations::{
    build_derivation_data, degree_bound, derivative_at, norm_bound, VarietyFile, VarietyPresentation,
};
use diophant_core::heights::{cycle_height_with, divisor_height_with, weighted_derivated_distance, weighted_size, HeightValue};
use diophant_core::metric::{
    algebraic_distance, cycle_distance, derivated_algebraic_distance, Cycle, PointFile, ProjectivePoint,
};
use diophant_core::multiplicity::{check_local_bezout, vanishing_order, BezoutReport, MultiplicityValue};
use diophant_core::num;
use diophant_core::polycore::{
    log_l2_norm, mahler_integral_with, sup_norm_with, HomogeneousPolynomial, MonteCarloOptions, NormValue,
    PolynomialFile, SupNormOptions,
};
use rug::{Complex, Float};
use serde::Serialize;

use crate::{plot, Cli, Command};

/// Constructed criterion instances available without an input file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    PositiveAlgind1,
    DegreeViolation,
    NormViolation,
    DerivativeViolation,
    PositiveAlgind2,
    RestrictionViolation,
    IrregularAlgind2,
}

impl Example {
    fn build(self) -> diophant_core::Result<CriterionInstance> {
        match self {
            Self::PositiveAlgind1 => instances::positive_algind1(),
            Self::DegreeViolation => instances::degree_violation(),
            Self::NormViolation => instances::norm_violation(),
            Self::DerivativeViolation => instances::derivative_violation(),
            Self::PositiveAlgind2 => instances::positive_algind2(),
            Self::RestrictionViolation => instances::restriction_violation(),
            Self::IrregularAlgind2 => instances::irregular_algind2(),
        }
    }

    fn criterion(self) -> Criterion {
        match self {
            Self::PositiveAlgind2 | Self::RestrictionViolation | Self::IrregularAlgind2 => Criterion::Algind2,
            _ => Criterion::Algind1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Algind1,
    Algind2,
}

/// Exit code for a harness report that does not establish the hypotheses.
pub const EXIT_NOT_HOLDING: u8 = 2;

pub fn run(cli: &Cli) -> Result<u8> {
    let mut cfg = RunConfig::load(cli.global.config.as_deref()).context("loading configuration")?;
    if let Some(p) = cli.global.precision {
        cfg.precision_bits = p;
    }
    if let Some(s) = cli.global.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Norm { poly, samples } => emit(out, &norm(&read_poly(poly)?, &cfg, *samples)?),
        Command::Dist { point, poly, cycle, order, weight } => {
            let theta = read_point(point, &cfg)?;
            let report = match (poly, cycle) {
                (Some(p), _) => dist_poly(&read_poly(p)?, &theta, *order)?,
                (None, Some(c)) => dist_cycle(&read_cycle(c)?, &theta, *order, *weight)?,
                (None, None) => bail!("one of --poly or --cycle is required"),
            };
            emit(out, &report)
        }
        Command::Derive { variety, poly, index, point, g } => {
            let x = read_variety(variety)?;
            let f = read_poly(poly)?;
            let theta = point.as_deref().map(|p| read_point(p, &cfg)).transpose()?;
            let g = g.as_deref().map(read_poly).transpose()?;
            emit(out, &derive(&x, &f, index, theta.as_ref(), g.as_ref(), &cfg)?)
        }
        Command::Mult { poly, point, with } => {
            let f = read_poly(poly)?;
            let y = read_point(point, &cfg)?;
            let order = vanishing_order(&f, &y)?;
            let bezout = with.as_deref().map(|w| read_poly(w).and_then(|g| Ok(check_local_bezout(&f, &g, &y)?))).transpose()?;
            emit(out, &MultReport { order, bezout })
        }
        Command::FindApprox { digits, max_degree, max_height } => {
            let (theta, d) = read_digits(digits)?;
            let r = find_algebraic_approximant(&theta, d, *max_degree, *max_height)?;
            emit(out, &ApproximantReport::from(&r))
        }
        Command::AvoidSubspace { variety, codim, samples } => {
            let x = read_variety(variety)?;
            let opts = AvoidOptions::from_calibration(&cfg.calibration);
            let w = find_avoiding_subspace(&x, *codim, *samples, cfg.seed, &opts)?;
            emit(out, &AvoidingSubspaceReport::from(&w))
        }
        Command::ExponentScan { digits, max_degree, heights, svg } => {
            let (theta, d) = read_digits(digits)?;
            let schedule: Vec<(usize, f64)> =
                (1..=*max_degree).flat_map(|deg| heights.iter().map(move |&h| (deg, h))).collect();
            let cells = approximation_exponent(&theta, d, &schedule)?;
            if let Some(path) = svg {
                plot::line_chart(path, &exponent_series(&cells, *max_degree))?;
            }
            emit(out, &cells)
        }
        Command::CheckCriterion { instance, example, criterion, save_instance, svg } => {
            let (inst, which) = match (instance, example) {
                (Some(path), _) => (CriterionInstance::from_json(&read_text(path)?)?, *criterion),
                (None, Some(ex)) => (ex.build()?, ex.criterion()),
                (None, None) => bail!("one of --instance or --example is required"),
            };
            if let Some(path) = save_instance {
                write_text(path, &inst.to_json())?;
            }
            let report = match which {
                Criterion::Algind1 => check_hypotheses_algind1(&inst, &cfg)?,
                Criterion::Algind2 => check_hypotheses_algind2(&inst, &cfg)?,
            };
            if let Some(path) = svg {
                plot::line_chart(path, &criterion_series(&report))?;
            }
            emit(out, &report)?;
            return Ok(if report.holds() { 0 } else { EXIT_NOT_HOLDING });
        }
        Command::Calibrate { write } => {
            let run = calibrate(cfg.seed, cfg.precision_bits)?;
            if let Some(path) = write {
                write_text(path, &pretty(&run.calibration)?)?;
            }
            emit(out, &run)
        }
    }?;
    Ok(0)
}

#[derive(Serialize)]
struct NormReport {
    vars: usize,
    degree: u32,
    log_l2: f64,
    sup: NormValue,
    mahler_integral: NormValue,
    height: HeightValue,
}

fn norm(f: &HomogeneousPolynomial, cfg: &RunConfig, samples: usize) -> Result<NormReport> {
    if f.is_zero() {
        bail!("the zero polynomial has no norm");
    }
    let mc = MonteCarloOptions { seed: cfg.seed, samples, ..MonteCarloOptions::default() };
    let sup = SupNormOptions { seed: cfg.seed, ..SupNormOptions::default() };
    Ok(NormReport {
        vars: f.num_vars(),
        degree: f.degree(),
        log_l2: log_l2_norm(f),
        sup: sup_norm_with(f, sup),
        mahler_integral: mahler_integral_with(f, mc),
        height: divisor_height_with(f, mc)?,
    })
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DistReport {
    Polynomial { order: u32, log_distance: f64, derivated_log_distance: f64 },
    Cycle { order: u32, degree: u64, derivated_log_distance: f64, weight: Option<f64>, weighted: Option<WeightedDist> },
}

#[derive(Serialize)]
struct WeightedDist {
    size: f64,
    height: f64,
    log_distance: f64,
}

fn dist_poly(f: &HomogeneousPolynomial, theta: &ProjectivePoint, order: u32) -> Result<DistReport> {
    Ok(DistReport::Polynomial {
        order,
        log_distance: algebraic_distance(f, theta)?,
        derivated_log_distance: derivated_algebraic_distance(f, theta, order)?,
    })
}

fn dist_cycle(z: &Cycle, theta: &ProjectivePoint, order: u32, weight: Option<f64>) -> Result<DistReport> {
    let weighted = match weight {
        Some(a) => Some(WeightedDist {
            size: weighted_size(z, a)?,
            height: cycle_height_with(z, MonteCarloOptions::default())?.value,
            log_distance: weighted_derivated_distance(z, theta, order, a)?,
        }),
        None => None,
    };
    Ok(DistReport::Cycle {
        order,
        degree: z.degree(),
        derivated_log_distance: cycle_distance(z, theta, order)?,
        weight,
        weighted,
    })
}

#[derive(Serialize)]
struct DeriveReport {
    index: Vec<u32>,
    derivative: PolynomialFile,
    degree_bound: u32,
    log_norm: Option<f64>,
    log_norm_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_abs_value: Option<f64>,
}

fn derive(
    x: &VarietyPresentation,
    f: &HomogeneousPolynomial,
    index: &[u32],
    theta: Option<&ProjectivePoint>,
    g: Option<&HomogeneousPolynomial>,
    cfg: &RunConfig,
) -> Result<DeriveReport> {
    let data = build_derivation_data(x)?;
    let p = data.derivative_polynomial(f, index)?;
    let order: u32 = index.iter().sum();
    let value = theta.map(|t| derivative_at(f, index, x, &data, t, g)).transpose()?;
    Ok(DeriveReport {
        index: index.to_vec(),
        derivative: PolynomialFile::from(&p),
        degree_bound: degree_bound(f, order, x),
        log_norm: (!p.is_zero()).then(|| log_l2_norm(&p)),
        log_norm_bound: norm_bound(f, order, x, cfg.calibration.derivation_norm),
        log_abs_value: value.as_ref().map(num::ln_abs),
        value: value.as_ref().map(complex_strings),
    })
}

#[derive(Serialize)]
struct MultReport {
    order: MultiplicityValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    bezout: Option<BezoutReport>,
}

fn complex_strings(z: &Complex) -> [String; 2] {
    let digits = Some((z.prec().0 as f64 / std::f64::consts::LOG2_10).floor() as usize);
    [z.real().to_string_radix(10, digits), z.imag().to_string_radix(10, digits)]
}

fn exponent_series(cells: &[ExponentCell], max_degree: usize) -> Vec<(String, Vec<(f64, f64)>)> {
    (1..=max_degree)
        .map(|d| {
            let pts = cells.iter().filter(|c| c.degree == d).filter_map(|c| c.exponent.map(|e| (c.height_bound, e))).collect();
            (format!("degree {d}"), pts)
        })
        .collect()
}

fn criterion_series(report: &HarnessReport) -> Vec<(String, Vec<(f64, f64)>)> {
    let limit = report.limit.values.iter().enumerate().map(|(k, v)| ((k + 1) as f64, v.max(f64::MIN_POSITIVE).ln())).collect();
    let margins = report
        .checks
        .iter()
        .filter_map(|c| c.derivative_sup.map(|s| (c.k as f64, c.derivative_bound - s)))
        .collect();
    vec![("log limit value".into(), limit), ("derivative margin".into(), margins)]
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_poly(path: &Path) -> Result<HomogeneousPolynomial> {
    HomogeneousPolynomial::from_json(&read_text(path)?).with_context(|| format!("parsing polynomial {}", path.display()))
}

fn read_cycle(path: &Path) -> Result<Cycle> {
    Cycle::from_json(&read_text(path)?).with_context(|| format!("parsing cycle {}", path.display()))
}

fn read_variety(path: &Path) -> Result<VarietyPresentation> {
    let file: VarietyFile = serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing variety {}", path.display()))?;
    Ok(VarietyPresentation::try_from(&file)?)
}

/// Reads a point, raising its working precision to the configured one.
fn read_point(path: &Path, cfg: &RunConfig) -> Result<ProjectivePoint> {
    let file: PointFile = serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing point {}", path.display()))?;
    let p = ProjectivePoint::try_from(&file)?;
    Ok(if cfg.precision_bits > p.precision() { p.with_precision(cfg.precision_bits) } else { p })
}

/// Reads whitespace-separated affine coordinates `theta_1 .. theta_M` of `[1 : theta_1 : ...]`.
///
/// Decimals are treated as truncations: the returned digit count is the smallest number of
/// significant digits among them. Integers and fractions alone give an exact rational point.
fn read_digits(path: &Path) -> Result<(ProjectivePoint, u32)> {
    let text = read_text(path)?;
    let mut values = vec![rug::Rational::from(1)];
    let mut digits: Option<u32> = None;
    for token in text.split_whitespace() {
        let (v, d) = num::parse_rational(token)?;
        values.push(v);
        if let Some(d) = d {
            digits = Some(digits.map_or(d, |m| m.min(d)));
        }
    }
    if values.len() < 2 {
        bail!("{} holds no numbers", path.display());
    }
    match digits {
        None => Ok((ProjectivePoint::from_rationals(&values, num::DEFAULT_PRECISION)?, 0)),
        Some(d) => {
            let prec = num::bits_for_digits(d);
            let coords = values.iter().map(|v| Complex::with_val(prec, Float::with_val(prec, v))).collect();
            Ok((ProjectivePoint::from_complex(coords)?, d))
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let text = pretty(value)?;
    match out {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
