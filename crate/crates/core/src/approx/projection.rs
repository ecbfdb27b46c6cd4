use rug::{Complex, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::lll::lll_reduce;
use super::subspace::IntegralSubspace;
use crate::algebraic::UniPoly;
use crate::error::{Error, Result};
use crate::heights::cycle_height;
use crate::metric::{
    derivated_algebraic_distance, fs_distance_float, orthonormal_basis, point_subspace_distance_float, Component,
    Cycle, ExactCoords, ProjectivePoint,
};
use crate::num;
use crate::polycore::{log_l2_norm, HomogeneousPolynomial};

/// Linear projection `P^M --> P^t` with center `P(W)`, given by integer rows spanning `W^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSetup {
    rows: Vec<Vec<Integer>>,
    center: Vec<Vec<Integer>>,
    coordinate: bool,
}

impl ProjectionSetup {
    /// Keeps the coordinates listed in `kept` and forgets the others.
    pub fn coordinate(num_coords: usize, kept: &[usize]) -> Result<Self> {
        if kept.len() < 2 || kept.len() >= num_coords || kept.iter().any(|&i| i >= num_coords) {
            return Err(Error::Config(format!("invalid kept coordinates {kept:?} out of {num_coords}")));
        }
        let mut sorted = kept.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != kept.len() {
            return Err(Error::Config("kept coordinates repeat".into()));
        }
        let unit = |i: usize| (0..num_coords).map(|j| Integer::from((i == j) as u32)).collect::<Vec<_>>();
        let rows = kept.iter().map(|&i| unit(i)).collect();
        let center = (0..num_coords).filter(|i| !kept.contains(i)).map(unit).collect();
        Ok(Self { rows, center, coordinate: true })
    }

    /// Projection away from an integral subspace, along a reduced integer basis of its complement.
    pub fn from_center(w: &IntegralSubspace) -> Result<Self> {
        let rows = integer_kernel(w.basis());
        if rows.len() < 2 {
            return Err(Error::Config("projection target must be at least a line".into()));
        }
        Ok(Self { rows: lll_reduce(rows), center: w.basis().to_vec(), coordinate: false })
    }

    pub fn rows(&self) -> &[Vec<Integer>] {
        &self.rows
    }

    pub fn center(&self) -> &[Vec<Integer>] {
        &self.center
    }

    pub fn is_coordinate(&self) -> bool {
        self.coordinate
    }

    pub fn source_coords(&self) -> usize {
        self.rows[0].len()
    }

    pub fn target_coords(&self) -> usize {
        self.rows.len()
    }

    /// Upper bound on `log` of the operator norm of the rows; zero for coordinate projections.
    pub fn height_slack(&self) -> f64 {
        if self.coordinate {
            return 0.0;
        }
        let s: Integer = self.rows.iter().flatten().map(|c| Integer::from(c.square_ref())).sum();
        num::ln_rational(&Rational::from(s)) / 2.0
    }

    fn rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.iter().map(|c| Rational::from(c.clone())).collect()).collect()
    }

    /// Image of a point; rejects points on (or numerically on) the center.
    pub fn project_point(&self, x: &ProjectivePoint) -> Result<ProjectivePoint> {
        if x.num_coords() != self.source_coords() {
            return Err(Error::DimensionMismatch { expected: self.source_coords(), got: x.num_coords() });
        }
        let prec = x.precision();
        let d = point_subspace_distance_float(x, &self.center)?;
        if d.is_zero() || d.get_exp().unwrap_or(i32::MIN) < -((prec / 2) as i32) {
            return Err(Error::MeetsCenter("point lies on the projection center".into()));
        }
        let floats: Vec<Complex> = self
            .rows
            .iter()
            .map(|r| {
                let mut s = num::complex_zero(prec);
                for (c, z) in r.iter().zip(x.coords()) {
                    s += Complex::with_val(prec, z * c);
                }
                s
            })
            .collect();
        match x.exact() {
            Some(ExactCoords::Rational(v)) => {
                let img: Vec<Integer> =
                    self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| Integer::from(a * b)).sum()).collect();
                ProjectivePoint::from_integers(&img, prec)
            }
            Some(ExactCoords::Algebraic { minpoly, coords }) => {
                let img: Vec<UniPoly> = self
                    .rows
                    .iter()
                    .map(|r| {
                        r.iter().zip(coords).fold(UniPoly::zero(), |acc, (c, q)| acc.add(&q.scale(&Rational::from(c.clone()))))
                    })
                    .collect();
                ProjectivePoint::from_parts(floats, ExactCoords::Algebraic { minpoly: minpoly.clone(), coords: img }, prec)
            }
            None => ProjectivePoint::from_complex(floats),
        }
    }

    /// Coordinates of the orthogonal projection onto `W^⊥` in an orthonormal frame.
    fn orthogonal_image(&self, x: &ProjectivePoint) -> Result<ProjectivePoint> {
        let prec = x.precision();
        let frame = orthonormal_basis(&self.rows, prec);
        let u = x.unit();
        ProjectivePoint::from_complex(frame.iter().map(|b| num::hermitian(&u, b)).collect())
    }
}

/// Integer basis of the orthogonal complement of the row span.
fn integer_kernel(rows: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|c| Rational::from(c.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(row, p);
        let inv = Rational::from(m[row][col].recip_ref());
        for c in &mut m[row] {
            *c *= &inv;
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let f = m[i][col].clone();
                for j in 0..n {
                    let t = Rational::from(&f * &m[row][j]);
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::new(); n];
            v[f] = Rational::from(1);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            let mut den = Integer::from(1);
            for c in &v {
                den.lcm_mut(c.denom());
            }
            let ints: Vec<Integer> = v.iter().map(|c| Integer::from((c * Rational::from(&den)).numer())).collect();
            let g = ints.iter().fold(Integer::new(), |g, c| g.gcd(c));
            ints.into_iter().map(|c| c / &g).collect()
        })
        .collect()
}

/// Height bookkeeping for a projected zero-cycle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub degree_source: u64,
    pub degree_image: u64,
    pub height_source: f64,
    pub height_image: f64,
    /// Allowed increase; zero for coordinate projections.
    pub slack: f64,
    pub holds: bool,
}

/// Pushes a zero-cycle forward and compares degrees and heights.
pub fn project(setup: &ProjectionSetup, z: &Cycle) -> Result<(Cycle, ProjectionReport)> {
    let mut image = Vec::with_capacity(z.components().len());
    for (m, c) in z.components() {
        match c {
            Component::Point(p) => image.push((*m, Component::Point(setup.project_point(p)?))),
            Component::Divisor(_) => {
                return Err(Error::InvalidInstance("only zero-cycles are projected".into()));
            }
        }
    }
    let image = Cycle::new(image)?;
    let height_source = cycle_height(z)?.value;
    let height_image = cycle_height(&image)?.value;
    let slack = setup.height_slack() * z.degree() as f64;
    let report = ProjectionReport {
        degree_source: z.degree(),
        degree_image: image.degree(),
        height_source,
        height_image,
        slack,
        holds: height_image <= height_source + slack + 1e-12 * (1.0 + height_source.abs()),
    };
    Ok((image, report))
}

/// Both sides of `log|πx, πy| <= log|x, y| - log|x, P(W)| - log|y, P(W)|`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ContractionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn distance_contraction(setup: &ProjectionSetup, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<ContractionReport> {
    let px = setup.orthogonal_image(x)?;
    let py = setup.orthogonal_image(y)?;
    let lhs = num::ln_float(&fs_distance_float(&px, &py)?);
    let dx = num::ln_float(&point_subspace_distance_float(x, setup.center())?);
    let dy = num::ln_float(&point_subspace_distance_float(y, setup.center())?);
    let rhs = num::ln_float(&fs_distance_float(x, y)?) - dx - dy;
    let tol = 1e-12 * (1.0 + rhs.abs());
    Ok(ContractionReport { lhs, rhs, holds: lhs <= rhs + tol })
}

/// Norm shift of a pulled-back section.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PullbackReport {
    pub degree: u32,
    /// `log |f*|_2 - log |f|_2`.
    pub l2_shift: f64,
    pub shift_per_degree: f64,
}

/// `f*(x) = f(U x)` for the projection rows `U`.
pub fn pullback_section(f: &HomogeneousPolynomial, setup: &ProjectionSetup) -> Result<(HomogeneousPolynomial, PullbackReport)> {
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("zero section".into()));
    }
    if f.num_vars() != setup.target_coords() {
        return Err(Error::DimensionMismatch { expected: setup.target_coords(), got: f.num_vars() });
    }
    let pulled = f.substitute_linear(&setup.rational_rows());
    let l2_shift = log_l2_norm(&pulled) - log_l2_norm(f);
    let degree = f.degree();
    let shift_per_degree = if degree == 0 { 0.0 } else { l2_shift / degree as f64 };
    Ok((pulled, PullbackReport { degree, l2_shift, shift_per_degree }))
}

/// Both sides of `sup log|∂^I f*(θ)| <= sup log|∂^I f(πθ)|` over `|I| <= order`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PullbackDerivativeReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn pullback_derivatives(
    f: &HomogeneousPolynomial,
    setup: &ProjectionSetup,
    theta: &ProjectivePoint,
    order: u32,
) -> Result<PullbackDerivativeReport> {
    let (pulled, _) = pullback_section(f, setup)?;
    let lhs = derivated_algebraic_distance(&pulled, theta, order)? + log_l2_norm(&pulled);
    if !setup.coordinate {
        return Err(Error::Config("derivative comparison needs a coordinate projection".into()));
    }
    let image = setup.project_point(theta)?;
    let rhs = derivated_algebraic_distance(f, &image, order)? + log_l2_norm(f);
    let tol = 1e-10 * (1.0 + rhs.abs());
    Ok(PullbackDerivativeReport { lhs, rhs, holds: lhs <= rhs + tol })
}
