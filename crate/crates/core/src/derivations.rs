//! Eliminant presentations of projective varieties and the derivation calculus on them.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::algebraic::{roots_complex_f64, sylvester};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::metric::ProjectivePoint;
use crate::num;
use crate::polycore::{log_l2_norm, random_unit_vector, CompiledPolynomial, HomogeneousPolynomial, PolynomialFile};

/// Largest ambient dimension handled.
pub const MAX_AMBIENT_DIM: usize = 4;
/// Largest number of defining forms handled.
pub const MAX_FORMS: usize = 2;

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn polynomial_determinant(m: &[Vec<HomogeneousPolynomial>]) -> HomogeneousPolynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let num_vars = m[0][0].num_vars();
    let mut acc = HomogeneousPolynomial::zero(num_vars, 0);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<HomogeneousPolynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let sub = polynomial_determinant(&minor);
        if sub.is_zero() {
            continue;
        }
        let term = &m[0][col] * &sub;
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Resultant of two forms with respect to `x_var`.
pub fn polynomial_resultant(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial, var: usize) -> HomogeneousPolynomial {
    let a = f.coefficients_in(var);
    let b = g.coefficients_in(var);
    let n = f.num_vars();
    match (a.len() - 1, b.len() - 1) {
        (0, k) => a[0].pow(k as u32),
        (k, 0) => b[0].pow(k as u32),
        _ => polynomial_determinant(&sylvester(&a, &b, HomogeneousPolynomial::zero(n, 0))),
    }
}

/// A variety of pure dimension `t` in `P^M`, presented by eliminants `P_mu(x_0..x_t, x_mu)`.
#[derive(Clone, Debug)]
pub struct VarietyPresentation {
    ambient_dim: usize,
    rel_dim: usize,
    forms: Vec<HomogeneousPolynomial>,
    eliminants: BTreeMap<usize, HomogeneousPolynomial>,
    degree: u32,
}

impl VarietyPresentation {
    /// All of `P^M`.
    pub fn projective_space(ambient_dim: usize) -> Self {
        Self { ambient_dim, rel_dim: ambient_dim, forms: Vec::new(), eliminants: BTreeMap::new(), degree: 1 }
    }

    /// Complete intersection of `forms`; base coordinates are `x_0..x_t` with `t = M - #forms`.
    pub fn from_forms(forms: &[HomogeneousPolynomial]) -> Result<Self> {
        let first = forms.first().ok_or_else(|| Error::InvalidPolynomial("no defining forms".into()))?;
        let n = first.num_vars();
        let m = n - 1;
        if m > MAX_AMBIENT_DIM {
            return Err(Error::DeskScaleExceeded(format!("ambient dimension {m} > {MAX_AMBIENT_DIM}")));
        }
        if forms.len() > MAX_FORMS || forms.len() > m {
            return Err(Error::DeskScaleExceeded(format!("{} defining forms", forms.len())));
        }
        for f in forms {
            if f.num_vars() != n {
                return Err(Error::DimensionMismatch { expected: n, got: f.num_vars() });
            }
            if f.is_zero() || f.degree() == 0 {
                return Err(Error::InvalidPolynomial("defining forms must be nonconstant".into()));
            }
        }
        let t = m - forms.len();
        let mut eliminants = BTreeMap::new();
        for mu in t + 1..=m {
            let p = if forms.len() == 1 {
                forms[0].clone()
            } else {
                let other = if mu == m { m - 1 } else { m };
                polynomial_resultant(&forms[0], &forms[1], other)
            };
            let p = p.primitive();
            if p.is_zero() || !p.involves(mu) {
                return Err(Error::NotGeneralPosition(format!("eliminant for x{mu} does not involve x{mu}")));
            }
            eliminants.insert(mu, p);
        }
        let degree = forms.iter().map(|f| f.degree()).product();
        Ok(Self { ambient_dim: m, rel_dim: t, forms: forms.to_vec(), eliminants, degree })
    }

    /// Presentation from given eliminants (their product of degrees is taken as the degree bound).
    pub fn from_eliminants(ambient_dim: usize, rel_dim: usize, eliminants: BTreeMap<usize, HomogeneousPolynomial>) -> Result<Self> {
        if ambient_dim > MAX_AMBIENT_DIM {
            return Err(Error::DeskScaleExceeded(format!("ambient dimension {ambient_dim}")));
        }
        let expected: Vec<usize> = (rel_dim + 1..=ambient_dim).collect();
        if eliminants.keys().copied().collect::<Vec<_>>() != expected {
            return Err(Error::InvalidInstance(format!("eliminants must be indexed by {expected:?}")));
        }
        for (&mu, p) in &eliminants {
            if p.num_vars() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch { expected: ambient_dim + 1, got: p.num_vars() });
            }
            if !p.involves(mu) {
                return Err(Error::NotGeneralPosition(format!("eliminant for x{mu} does not involve x{mu}")));
            }
            if (rel_dim + 1..=ambient_dim).any(|nu| nu != mu && p.involves(nu)) {
                return Err(Error::InvalidPolynomial(format!("eliminant for x{mu} involves another fiber variable")));
            }
        }
        let degree = eliminants.values().map(|p| p.degree()).max().unwrap_or(1);
        let forms = eliminants.values().cloned().collect();
        Ok(Self { ambient_dim, rel_dim, forms, eliminants, degree })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rel_dim(&self) -> usize {
        self.rel_dim
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.rel_dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn forms(&self) -> &[HomogeneousPolynomial] {
        &self.forms
    }

    pub fn eliminants(&self) -> &BTreeMap<usize, HomogeneousPolynomial> {
        &self.eliminants
    }

    /// Height surrogate: largest log L2 norm of an eliminant (0 for projective space).
    pub fn height_surrogate(&self) -> f64 {
        self.eliminants.values().map(log_l2_norm).fold(0.0, f64::max)
    }

    /// Seeded points of `X(C)` in double precision: Fubini–Study base points and all fiber solutions.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.ambient_dim + 1;
        let mut out = Vec::with_capacity(count);
        let compiled: Vec<CompiledPolynomial> = self.forms.iter().map(CompiledPolynomial::new).collect();
        let mut guard = 0;
        while out.len() < count && guard < count * 50 {
            guard += 1;
            let base = random_unit_vector(&mut rng, self.rel_dim + 1);
            let mut fibers: Vec<Vec<Complex64>> = vec![Vec::new()];
            for (&mu, p) in &self.eliminants {
                let coeffs = p.coefficients_in(mu);
                let mut point = vec![Complex64::new(0.0, 0.0); n];
                point[..=self.rel_dim].copy_from_slice(&base);
                let c: Vec<Complex64> = coeffs.iter().map(|q| CompiledPolynomial::new(q).eval(&point)).collect();
                let roots = roots_complex_f64(&c);
                fibers = fibers
                    .into_iter()
                    .flat_map(|prefix| {
                        roots.iter().map(move |r| {
                            let mut v = prefix.clone();
                            v.push(*r);
                            v
                        })
                    })
                    .collect();
            }
            for fiber in fibers {
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                x[..=self.rel_dim].copy_from_slice(&base);
                x[self.rel_dim + 1..].copy_from_slice(&fiber);
                let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if !norm.is_finite() {
                    continue;
                }
                for z in &mut x {
                    *z /= norm;
                }
                let on_x = compiled.iter().all(|f| f.eval(&x).norm() < 1e-7);
                if on_x {
                    out.push(x);
                    if out.len() == count {
                        break;
                    }
                }
            }
        }
        out
    }

    /// Raises a double-precision point of `X` to `prec` bits by Newton steps on each eliminant fiber.
    pub fn refine_point(&self, x: &[Complex64], prec: u32) -> Result<ProjectivePoint> {
        let scale = x[0];
        if scale.norm() == 0.0 {
            return Err(Error::DegeneratePoint("x0 vanishes at the point".into()));
        }
        let mut coords: Vec<Complex> = x.iter().map(|z| {
            let w = z / scale;
            Complex::with_val(prec, (w.re, w.im))
        }).collect();
        for (&mu, p) in &self.eliminants {
            let dp = p.partial(mu);
            for _ in 0..(prec / 4 + 40) {
                let v = p.eval_complex(&coords);
                let d = dp.eval_complex(&coords);
                if d.is_zero() {
                    return Err(Error::SingularPoint(format!("eliminant for x{mu} is singular")));
                }
                let step = Complex::with_val(prec, &v / &d);
                coords[mu] -= &step;
                let s = Float::with_val(prec, step.abs_ref());
                if s.is_zero() || s.get_exp().unwrap_or(i32::MIN) < -(prec as i32) + 8 {
                    break;
                }
            }
        }
        ProjectivePoint::from_complex(coords)
    }
}

/// JSON form of a presentation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarietyFile {
    #[serde(rename = "M")]
    pub ambient_dim: usize,
    pub t: usize,
    pub eliminants: BTreeMap<String, PolynomialFile>,
}

impl From<&VarietyPresentation> for VarietyFile {
    fn from(x: &VarietyPresentation) -> Self {
        Self {
            ambient_dim: x.ambient_dim,
            t: x.rel_dim,
            eliminants: x.eliminants.iter().map(|(mu, p)| (mu.to_string(), PolynomialFile::from(p))).collect(),
        }
    }
}

impl TryFrom<&VarietyFile> for VarietyPresentation {
    type Error = Error;

    fn try_from(file: &VarietyFile) -> Result<Self> {
        if file.t == file.ambient_dim {
            return Ok(Self::projective_space(file.ambient_dim));
        }
        let mut map = BTreeMap::new();
        for (k, v) in &file.eliminants {
            let mu: usize = k.parse().map_err(|_| Error::Parse(format!("bad eliminant index {k:?}")))?;
            map.insert(mu, HomogeneousPolynomial::try_from(v)?);
        }
        Self::from_eliminants(file.ambient_dim, file.t, map)
    }
}

/// Cleared-denominator coefficients of the derivations `∂_l` on a presented variety.
#[derive(Clone, Debug)]
pub struct DerivationData {
    rel_dim: usize,
    eliminant_partials: BTreeMap<usize, HomogeneousPolynomial>,
    jacobian: HomogeneousPolynomial,
    coefficients: BTreeMap<(usize, usize), HomogeneousPolynomial>,
}

/// `P = prod_mu ∂P_mu/∂x_mu` and `A_{l,mu} = -(∂P_mu/∂x_l) prod_{nu != mu} ∂P_nu/∂x_nu`.
pub fn build_derivation_data(x: &VarietyPresentation) -> Result<DerivationData> {
    let n = x.ambient_dim + 1;
    let mut eliminant_partials = BTreeMap::new();
    for (&mu, p) in &x.eliminants {
        let d = p.partial(mu);
        if d.is_zero() {
            return Err(Error::NotGeneralPosition(format!("eliminant for x{mu} has zero partial")));
        }
        eliminant_partials.insert(mu, d);
    }
    let mut jacobian = HomogeneousPolynomial::constant(n, 1);
    for d in eliminant_partials.values() {
        jacobian = &jacobian * d;
    }
    let mut coefficients = BTreeMap::new();
    for l in 1..=x.rel_dim {
        for (&mu, p) in &x.eliminants {
            let mut a = -&p.partial(l);
            for (&nu, d) in &eliminant_partials {
                if nu != mu {
                    a = &a * d;
                }
            }
            coefficients.insert((l, mu), a);
        }
    }
    Ok(DerivationData { rel_dim: x.rel_dim, eliminant_partials, jacobian, coefficients })
}

impl DerivationData {
    /// The common denominator `P`.
    pub fn jacobian(&self) -> &HomogeneousPolynomial {
        &self.jacobian
    }

    pub fn coefficient(&self, l: usize, mu: usize) -> Option<&HomogeneousPolynomial> {
        self.coefficients.get(&(l, mu))
    }

    pub fn rel_dim(&self) -> usize {
        self.rel_dim
    }

    /// `P * ∂_l g` as a polynomial.
    pub fn first_order(&self, g: &HomogeneousPolynomial, l: usize) -> HomogeneousPolynomial {
        let mut out = &self.jacobian * &g.partial(l);
        for &mu in self.eliminant_partials.keys() {
            let term = &self.coefficients[&(l, mu)] * &g.partial(mu);
            out = &out + &term;
        }
        out
    }

    /// Numerator `f_I` with `∂^I (f / x0^D) = f_I / (P^{2|I|-1} x0^{D-|I|})`.
    pub fn derivative_polynomial(&self, f: &HomogeneousPolynomial, multi_index: &[u32]) -> Result<HomogeneousPolynomial> {
        let mut cache = BTreeMap::new();
        self.numerator(f, multi_index, &mut cache)
    }

    fn numerator(
        &self,
        f: &HomogeneousPolynomial,
        index: &[u32],
        cache: &mut BTreeMap<Vec<u32>, HomogeneousPolynomial>,
    ) -> Result<HomogeneousPolynomial> {
        if index.len() != self.rel_dim {
            return Err(Error::DimensionMismatch { expected: self.rel_dim, got: index.len() });
        }
        if let Some(p) = cache.get(index) {
            return Ok(p.clone());
        }
        let order: u32 = index.iter().sum();
        let result = if order == 0 {
            f.clone()
        } else {
            let pos = index.iter().position(|&k| k > 0).unwrap();
            let mut prev = index.to_vec();
            prev[pos] -= 1;
            let l = pos + 1;
            let base = self.numerator(f, &prev, cache)?;
            if order == 1 {
                self.first_order(&base, l)
            } else {
                let s = order - 1;
                let lhs = &self.jacobian * &self.first_order(&base, l);
                let rhs = (&base * &self.first_order(&self.jacobian, l)).scale(&Rational::from(2 * s - 1));
                &lhs - &rhs
            }
        };
        cache.insert(index.to_vec(), result.clone());
        Ok(result)
    }
}

/// Degree bound `deg f + (2S - 1) (M - t) deg X` for `f_I` with `|I| = S >= 1`.
pub fn degree_bound(f: &HomogeneousPolynomial, order: u32, x: &VarietyPresentation) -> u32 {
    if order == 0 {
        return f.degree();
    }
    f.degree() + (2 * order - 1) * x.codim() as u32 * x.degree()
}

/// Bound `codim * (h_X + c deg X)` on `log|P|_2` for the common denominator `P`.
pub fn jacobian_norm_bound(x: &VarietyPresentation, c: f64) -> f64 {
    x.codim() as f64 * (x.height_surrogate() + c * x.degree() as f64)
}

/// Right-hand side of the norm bound for `log|f_I|_2`, with slack constant `c`.
pub fn norm_bound(f: &HomogeneousPolynomial, order: u32, x: &VarietyPresentation, c: f64) -> f64 {
    let deg_x = x.degree() as f64;
    let s = order as f64;
    log_l2_norm(f)
        + (f.degree().max(1) as f64).ln()
        + (2.0 * s - 1.0).max(0.0) * x.codim() as f64 * (x.height_surrogate() + c * deg_x + deg_x.ln())
        + num::ln_factorial(2 * order as u64)
}

fn multi_indices(dim: usize, max_order: u32) -> Vec<Vec<u32>> {
    let space = JetSpace::new(dim, max_order, 16);
    space.exponents().to_vec()
}

/// `∂^I (f / g^D)` at `theta`, where `g` is a linear form not vanishing at `theta` (default `x_0`).
pub fn derivative_at(
    f: &HomogeneousPolynomial,
    multi_index: &[u32],
    x: &VarietyPresentation,
    data: &DerivationData,
    theta: &ProjectivePoint,
    g: Option<&HomogeneousPolynomial>,
) -> Result<Complex> {
    if multi_index.len() != x.rel_dim {
        return Err(Error::DimensionMismatch { expected: x.rel_dim, got: multi_index.len() });
    }
    let order: u32 = multi_index.iter().sum();
    let jet = quotient_jet(f, order, Some(multi_index), x, data, theta, g)?;
    Ok(jet.derivative(multi_index))
}

/// `sup_{|I| <= order} log|∂^I (f / g^D)(theta)|`, from a single Taylor expansion.
pub fn derivative_sup(
    f: &HomogeneousPolynomial,
    order: u32,
    x: &VarietyPresentation,
    data: &DerivationData,
    theta: &ProjectivePoint,
    g: Option<&HomogeneousPolynomial>,
) -> Result<f64> {
    let jet = quotient_jet(f, order, None, x, data, theta, g)?;
    Ok(jet.max_log_derivative(|_| true))
}

/// Taylor expansion of `f / g^D` at `theta` in the base chart coordinates, up to `order`
/// (only exponents below `bound` when given).
fn quotient_jet(
    f: &HomogeneousPolynomial,
    order: u32,
    bound: Option<&[u32]>,
    x: &VarietyPresentation,
    data: &DerivationData,
    theta: &ProjectivePoint,
    g: Option<&HomogeneousPolynomial>,
) -> Result<Jet> {
    let t = x.rel_dim;
    let prec = theta.precision();
    let coords = theta.coords();
    if coords[0].is_zero() {
        return Err(Error::DegeneratePoint("x0 vanishes at the point".into()));
    }
    let p_val = data.jacobian.eval_complex(coords);
    if p_val.is_zero() || crate::num::ln_abs(&p_val) < -(prec as f64 / 2.0) * std::f64::consts::LN_2 {
        return Err(Error::SingularPoint("the Jacobian product vanishes".into()));
    }
    let space = JetSpace::new(t, order, prec);
    let exponents = multi_indices(t, order);
    let jet_of = |h: &HomogeneousPolynomial, deg: u32| -> Result<Jet> {
        let mut cache = BTreeMap::new();
        let mut jet = Jet::zero(&space);
        for e in &exponents {
            if bound.is_some_and(|b| e.iter().zip(b).any(|(a, b)| a > b)) {
                continue;
            }
            let s: u32 = e.iter().sum();
            let num_poly = data.numerator(h, e, &mut cache)?;
            let value = eval_derivative(&num_poly, s, deg, &p_val, coords, prec);
            let mut fact = rug::Integer::from(1);
            for &k in e {
                fact *= rug::Integer::from(rug::Integer::factorial(k));
            }
            jet.set_coeff(e, Complex::with_val(prec, value / fact));
        }
        Ok(jet)
    };
    let mut total = jet_of(f, f.degree())?;
    if let Some(g) = g {
        if g.degree() != 1 {
            return Err(Error::InvalidPolynomial("g must be a linear form".into()));
        }
        let q = jet_of(g, 1)?;
        if q.coeffs()[0].is_zero() {
            return Err(Error::DegeneratePoint("g vanishes at the point".into()));
        }
        total = total.mul(&q.recip().powi(f.degree()));
    }
    Ok(total)
}

fn eval_derivative(numerator: &HomogeneousPolynomial, order: u32, deg: u32, p_val: &Complex, coords: &[Complex], prec: u32) -> Complex {
    let v = numerator.eval_complex(coords);
    if order == 0 {
        let x0 = Complex::with_val(prec, rug::ops::Pow::pow(&coords[0], deg));
        return Complex::with_val(prec, v / x0);
    }
    let pk = Complex::with_val(prec, rug::ops::Pow::pow(p_val, 2 * order - 1));
    let x0_power = deg as i64 - order as i64;
    let x0 = if x0_power >= 0 {
        Complex::with_val(prec, rug::ops::Pow::pow(&coords[0], x0_power as u32))
    } else {
        Complex::with_val(prec, rug::ops::Pow::pow(&coords[0], x0_power as i32))
    };
    Complex::with_val(prec, v / pk / x0)
}
