use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::algebraic::{minimal_polynomial_of_image, UniPoly};
use crate::error::{Error, Result};
use crate::num;

/// Largest number-field degree handled exactly.
pub const MAX_FIELD_DEGREE: usize = 4;

/// Exact coordinates behind a floating representative.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactCoords {
    /// Primitive integer vector.
    Rational(Vec<Integer>),
    /// `[q_0(alpha) : ... : q_M(alpha)]` with `alpha` a root of the irreducible `minpoly`.
    Algebraic { minpoly: UniPoly, coords: Vec<UniPoly> },
}

/// Point of `P^M` with a floating representative at a fixed precision.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    coords: Vec<Complex>,
    exact: Option<ExactCoords>,
    precision: u32,
}

impl ProjectivePoint {
    pub fn from_complex(coords: Vec<Complex>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DegeneratePoint("need at least two coordinates".into()));
        }
        if coords.iter().all(|z| z.is_zero()) {
            return Err(Error::DegeneratePoint("all coordinates vanish".into()));
        }
        let precision = coords.iter().map(|z| z.prec().0).min().unwrap_or(num::DEFAULT_PRECISION);
        Ok(Self { coords, exact: None, precision })
    }

    pub fn from_f64(coords: &[(f64, f64)], prec: u32) -> Result<Self> {
        Self::from_complex(coords.iter().map(|&(re, im)| Complex::with_val(prec, (re, im))).collect())
    }

    /// Rational point; stored as a primitive integer vector with positive first nonzero entry.
    pub fn from_rationals(coords: &[Rational], prec: u32) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DegeneratePoint("need at least two coordinates".into()));
        }
        let mut den = Integer::from(1);
        for c in coords {
            den.lcm_mut(c.denom());
        }
        let ints: Vec<Integer> = coords.iter().map(|c| Integer::from((c * Rational::from(&den)).numer())).collect();
        Self::from_integers(&ints, prec)
    }

    pub fn from_integers(coords: &[Integer], prec: u32) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DegeneratePoint("need at least two coordinates".into()));
        }
        let mut g = Integer::new();
        for c in coords {
            g.gcd_mut(c);
        }
        if g == 0 {
            return Err(Error::DegeneratePoint("all coordinates vanish".into()));
        }
        let first_sign = coords.iter().find(|c| **c != 0).map(|c| c.cmp0()).unwrap();
        if first_sign == std::cmp::Ordering::Less {
            g = -g;
        }
        let ints: Vec<Integer> = coords.iter().map(|c| Integer::from(c / &g)).collect();
        let floats = ints.iter().map(|c| Complex::with_val(prec, (c, 0))).collect();
        Ok(Self { coords: floats, exact: Some(ExactCoords::Rational(ints)), precision: prec })
    }

    pub fn from_i64(coords: &[i64], prec: u32) -> Result<Self> {
        let ints: Vec<Integer> = coords.iter().map(|&c| Integer::from(c)).collect();
        Self::from_integers(&ints, prec)
    }

    /// Algebraic point `[q_0(alpha) : ...]` where `alpha` is the root of `minpoly` nearest `root_hint`.
    pub fn from_algebraic(minpoly: UniPoly, coords: Vec<UniPoly>, root_hint: &Complex, prec: u32) -> Result<Self> {
        let d = minpoly.degree().unwrap_or(0);
        if d == 0 {
            return Err(Error::InvalidPolynomial("minimal polynomial must have positive degree".into()));
        }
        if d > MAX_FIELD_DEGREE {
            return Err(Error::UnsupportedField(format!("degree {d} exceeds {MAX_FIELD_DEGREE}")));
        }
        let alpha = minpoly
            .nearest_root(root_hint, prec)
            .ok_or_else(|| Error::DegeneratePoint("minimal polynomial has no roots".into()))?;
        let floats: Vec<Complex> = coords.iter().map(|q| q.eval_complex(&alpha)).collect();
        let mut p = Self::from_complex(floats)?;
        p.exact = Some(ExactCoords::Algebraic { minpoly: minpoly.primitive(), coords });
        p.precision = prec;
        Ok(p)
    }

    /// Point whose floating representative was computed alongside its exact coordinates.
    pub(crate) fn from_parts(coords: Vec<Complex>, exact: ExactCoords, precision: u32) -> Result<Self> {
        let mut p = Self::from_complex(coords)?;
        p.exact = Some(exact);
        p.precision = precision;
        Ok(p)
    }

    pub fn coords(&self) -> &[Complex] {
        &self.coords
    }

    pub fn exact(&self) -> Option<&ExactCoords> {
        self.exact.as_ref()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }

    /// Rational coordinates when the point is defined over Q.
    pub fn rational_coords(&self) -> Option<Vec<Rational>> {
        match &self.exact {
            Some(ExactCoords::Rational(v)) => Some(v.iter().map(|c| Rational::from(c.clone())).collect()),
            Some(ExactCoords::Algebraic { minpoly, coords }) if minpoly.degree() == Some(1) => {
                let root = -minpoly.coeffs()[0].clone() / minpoly.coeffs()[1].clone() ;
                Some(coords.iter().map(|q| q.eval_rational(&root)).collect())
            }
            _ => None,
        }
    }

    pub fn integer_coords(&self) -> Option<&[Integer]> {
        match &self.exact {
            Some(ExactCoords::Rational(v)) => Some(v),
            _ => None,
        }
    }

    /// Number of conjugates (degree of the zero-cycle over Q), 1 for float-only points.
    pub fn field_degree(&self) -> usize {
        match &self.exact {
            Some(ExactCoords::Algebraic { minpoly, .. }) => minpoly.degree().unwrap_or(1),
            _ => 1,
        }
    }

    /// All Galois conjugates as floating points (just `self` when not algebraic).
    pub fn conjugates(&self) -> Vec<ProjectivePoint> {
        match &self.exact {
            Some(ExactCoords::Algebraic { minpoly, coords }) if minpoly.degree().unwrap_or(0) > 1 => minpoly
                .roots(self.precision)
                .iter()
                .filter_map(|r| {
                    let v: Vec<Complex> = coords.iter().map(|q| q.eval_complex(r)).collect();
                    Self::from_complex(v).ok()
                })
                .collect(),
            _ => vec![self.clone()],
        }
    }

    /// Unit-norm representative.
    pub fn unit(&self) -> Vec<Complex> {
        let n = num::norm(&self.coords);
        self.coords.iter().map(|z| Complex::with_val(self.precision, z / &n)).collect()
    }

    pub fn norm(&self) -> Float {
        num::norm(&self.coords)
    }

    /// Same point at another precision (exact data re-evaluated when present).
    pub fn with_precision(&self, prec: u32) -> Self {
        match &self.exact {
            Some(ExactCoords::Rational(v)) => Self::from_integers(v, prec).expect("valid point"),
            Some(ExactCoords::Algebraic { minpoly, coords }) => {
                Self::from_algebraic(minpoly.clone(), coords.clone(), &self.coords_ratio_hint(), prec).expect("valid point")
            }
            None => Self {
                coords: self.coords.iter().map(|z| Complex::with_val(prec, z)).collect(),
                exact: None,
                precision: prec,
            },
        }
    }

    fn coords_ratio_hint(&self) -> Complex {
        match &self.exact {
            Some(ExactCoords::Algebraic { minpoly, coords }) => {
                // Recover the generating root from the stored coordinates by matching conjugates.
                let roots = minpoly.roots(self.precision);
                let mut best = roots[0].clone();
                let mut best_d = f64::INFINITY;
                for r in roots {
                    let v: Vec<Complex> = coords.iter().map(|q| q.eval_complex(&r)).collect();
                    let d = num::wedge_norm(&v, &self.coords).to_f64();
                    if d < best_d {
                        best_d = d;
                        best = r;
                    }
                }
                best
            }
            _ => Complex::new(self.precision),
        }
    }

    /// Minimal polynomials of the affine coordinates `x_i / x_j`, for a chosen nonzero `x_j`.
    pub fn coordinate_minpolys(&self) -> Result<Vec<UniPoly>> {
        match &self.exact {
            Some(ExactCoords::Algebraic { minpoly, coords }) if coords[0] == UniPoly::constant(Rational::from(1)) => coords
                .iter()
                .skip(1)
                .map(|q| minimal_polynomial_of_image(minpoly, q))
                .collect(),
            Some(ExactCoords::Rational(v)) if v[0] != 0 => Ok(v
                .iter()
                .skip(1)
                .map(|c| UniPoly::new(vec![-Rational::from(c.clone()), Rational::from(v[0].clone())]).primitive())
                .collect()),
            _ => Err(Error::UnsupportedField("affine minimal polynomials need x0 = 1".into())),
        }
    }
}

/// JSON interchange form of a point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointFile {
    pub float: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpolys: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integers: Option<Vec<String>>,
    pub precision: u32,
}

impl From<&ProjectivePoint> for PointFile {
    fn from(p: &ProjectivePoint) -> Self {
        let digits = (p.precision as f64 / std::f64::consts::LOG2_10).floor() as usize;
        let float = p
            .coords
            .iter()
            .map(|z| [z.real().to_string_radix(10, Some(digits)), z.imag().to_string_radix(10, Some(digits))])
            .collect();
        let minpolys = p.coordinate_minpolys().ok().filter(|_| matches!(p.exact, Some(ExactCoords::Algebraic { .. }))).map(|v| {
            v.iter().map(|q| q.coeffs().iter().map(|c| c.to_string()).collect()).collect()
        });
        let integers = p.integer_coords().map(|v| v.iter().map(|c| c.to_string()).collect());
        Self { float, minpolys, integers, precision: p.precision }
    }
}

impl TryFrom<&PointFile> for ProjectivePoint {
    type Error = Error;

    fn try_from(file: &PointFile) -> Result<Self> {
        if let Some(ints) = &file.integers {
            let v: Result<Vec<Integer>> =
                ints.iter().map(|s| s.parse::<Integer>().map_err(|_| Error::Parse(format!("bad integer {s:?}")))).collect();
            return Self::from_integers(&v?, file.precision);
        }
        let mut coords = Vec::with_capacity(file.float.len());
        for [re, im] in &file.float {
            let re = Float::parse(re).map_err(|_| Error::Parse(format!("bad float {re:?}")))?;
            let im = Float::parse(im).map_err(|_| Error::Parse(format!("bad float {im:?}")))?;
            coords.push(Complex::with_val(file.precision, (re, im)));
        }
        let mut point = Self::from_complex(coords)?;
        point.precision = file.precision;
        if let Some(minpolys) = &file.minpolys {
            if minpolys.len() == 1 && point.num_coords() == 2 && !point.coords[0].is_zero() {
                let coeffs: Result<Vec<Rational>> =
                    minpolys[0].iter().map(|s| num::parse_rational(s).map(|r| r.0)).collect();
                let p = UniPoly::new(coeffs?);
                let hint = Complex::with_val(file.precision, &point.coords[1] / &point.coords[0]);
                return Self::from_algebraic(
                    p,
                    vec![UniPoly::constant(Rational::from(1)), UniPoly::from_i64(&[0, 1])],
                    &hint,
                    file.precision,
                );
            }
        }
        Ok(point)
    }
}

impl ProjectivePoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PointFile::from(self)).expect("point serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PointFile = serde_json::from_str(text)?;
        Self::try_from(&file)
    }
}
