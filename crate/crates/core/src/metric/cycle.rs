use rug::Complex;
use serde::{Deserialize, Serialize};

use super::chart::Chart;
use super::point::{PointFile, ProjectivePoint};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::num;
use crate::polycore::{log_l2_norm_float, HomogeneousPolynomial, PolynomialFile};

/// Irreducible component of an effective cycle.
#[derive(Clone, Debug)]
pub enum Component {
    /// A closed point; algebraic points stand for their full conjugate set.
    Point(ProjectivePoint),
    /// The hypersurface `div f`.
    Divisor(HomogeneousPolynomial),
}

impl Component {
    pub fn num_coords(&self) -> usize {
        match self {
            Component::Point(p) => p.num_coords(),
            Component::Divisor(f) => f.num_vars(),
        }
    }

    pub fn degree(&self) -> u64 {
        match self {
            Component::Point(p) => p.field_degree() as u64,
            Component::Divisor(f) => f.degree() as u64,
        }
    }
}

/// Effective cycle `sum n_i Z_i` with positive multiplicities.
#[derive(Clone, Debug, Default)]
pub struct Cycle {
    components: Vec<(u32, Component)>,
}

impl Cycle {
    pub fn new(components: Vec<(u32, Component)>) -> Result<Self> {
        if let Some((_, first)) = components.first() {
            let n = first.num_coords();
            for (m, c) in &components {
                if *m == 0 {
                    return Err(Error::InvalidInstance("component multiplicity must be positive".into()));
                }
                if c.num_coords() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: c.num_coords() });
                }
            }
        }
        Ok(Self { components })
    }

    pub fn point(p: ProjectivePoint) -> Self {
        Self { components: vec![(1, Component::Point(p))] }
    }

    pub fn divisor(f: HomogeneousPolynomial) -> Self {
        Self { components: vec![(1, Component::Divisor(f))] }
    }

    pub fn components(&self) -> &[(u32, Component)] {
        &self.components
    }

    /// `n * self`.
    pub fn scaled(&self, n: u32) -> Self {
        Self { components: self.components.iter().map(|(m, c)| (m * n, c.clone())).collect() }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Self { components }
    }

    pub fn degree(&self) -> u64 {
        self.components.iter().map(|(m, c)| *m as u64 * c.degree()).sum()
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.components.iter().all(|(_, c)| matches!(c, Component::Point(_)))
    }

    /// Jet of `exp D(Z, .)` in the chart: linear factors for points, normalized pullbacks for divisors.
    pub fn distance_jet(&self, chart: &Chart, order: u32) -> Result<Jet> {
        let prec = chart.precision();
        let space = JetSpace::new(chart.dim(), order, prec);
        let mut acc = Jet::constant(&space, Complex::with_val(prec, 1));
        for (mult, comp) in &self.components {
            if comp.num_coords() != chart.basis().len() {
                return Err(Error::DimensionMismatch { expected: chart.basis().len(), got: comp.num_coords() });
            }
            let factor = match comp {
                Component::Point(p) => {
                    let mut j = Jet::constant(&space, Complex::with_val(prec, 1));
                    for conj in p.conjugates() {
                        j = j.mul(&point_factor(chart, &space, &conj.with_precision(prec)));
                    }
                    j
                }
                Component::Divisor(f) => {
                    if f.is_zero() {
                        return Err(Error::InvalidPolynomial("zero polynomial has no divisor".into()));
                    }
                    let pulled = chart.pullback(f, order);
                    let n = log_l2_norm_float(f, prec).exp();
                    pulled.scale(&Complex::with_val(prec, n.recip()))
                }
            };
            acc = acc.mul(&factor.powi(*mult));
        }
        Ok(acc)
    }
}

/// Linear function vanishing at `y` whose modulus at the chart center is `|y, theta|`.
fn point_factor(chart: &Chart, space: &std::sync::Arc<JetSpace>, y: &ProjectivePoint) -> Jet {
    let prec = chart.precision();
    let v = chart.frame_coords(&y.unit());
    let r = num::norm(&v[1..]);
    if r.is_zero() {
        return Jet::zero(space);
    }
    let v0r = Complex::with_val(prec, &v[0] / &r);
    let lin: Vec<Complex> =
        v[1..].iter().map(|vj| -Complex::with_val(prec, &v0r * Complex::with_val(prec, vj.conj_ref()))).collect();
    Jet::affine(space, &Complex::with_val(prec, (&r, 0)), &lin)
}

/// `sup_{|J| <= S} log|∂^J exp D(Z, .)|` at `theta` in the canonical chart (holomorphic multi-indices).
pub fn cycle_distance(z: &Cycle, theta: &ProjectivePoint, order: u32) -> Result<f64> {
    cycle_distance_in(z, &Chart::canonical(theta), order, None)
}

/// As [`cycle_distance`] in a given chart; `directions` restricts to multi-indices supported on the
/// first `directions` chart coordinates.
pub fn cycle_distance_in(z: &Cycle, chart: &Chart, order: u32, directions: Option<usize>) -> Result<f64> {
    let jet = z.distance_jet(chart, order)?;
    Ok(match directions {
        Some(t) => jet.max_log_derivative(|e| e[t..].iter().all(|&k| k == 0)),
        None => jet.max_log_derivative(|_| true),
    })
}

/// `log|Z, theta|` for `S = 0`, i.e. the log of the product of point distances and normalized values.
pub fn cycle_log_distance(z: &Cycle, theta: &ProjectivePoint) -> Result<f64> {
    cycle_distance(z, theta, 0)
}

/// JSON component entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentFile {
    pub mult: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<PolynomialFile>,
}

impl Cycle {
    pub fn to_file(&self) -> Vec<ComponentFile> {
        self.components
            .iter()
            .map(|(m, c)| match c {
                Component::Point(p) => ComponentFile { mult: *m, point: Some(PointFile::from(p)), divisor: None },
                Component::Divisor(f) => ComponentFile { mult: *m, point: None, divisor: Some(PolynomialFile::from(f)) },
            })
            .collect()
    }

    pub fn from_file(entries: &[ComponentFile]) -> Result<Self> {
        let mut components = Vec::with_capacity(entries.len());
        for e in entries {
            let comp = match (&e.point, &e.divisor) {
                (Some(p), None) => Component::Point(ProjectivePoint::try_from(p)?),
                (None, Some(f)) => Component::Divisor(HomogeneousPolynomial::try_from(f)?),
                _ => return Err(Error::Parse("component needs exactly one of point or divisor".into())),
            };
            components.push((e.mult, comp));
        }
        Self::new(components)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<ComponentFile> = serde_json::from_str(text)?;
        Self::from_file(&entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("cycle serializes")
    }
}

/// Smallest precision among the points.
pub fn common_precision(points: &[&ProjectivePoint]) -> u32 {
    points.iter().map(|p| p.precision()).min().unwrap_or(num::DEFAULT_PRECISION)
}

