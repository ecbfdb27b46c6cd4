//! Univariate polynomials over the rationals, exact resultants and numerical roots.

use num_complex::Complex64;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map(|c| *c == 0).unwrap_or(false) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = Integer>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(Rational::from).collect())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - c`
    pub fn linear_root(c: Rational) -> Self {
        Self::new(vec![-c, Rational::from(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, x: &Complex) -> Complex {
        let prec = x.prec().0;
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += Complex::with_val(prec, (c, 0));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * i as u32)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = other.coeffs.get(i).cloned().unwrap_or_default();
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::new(out)
    }

    /// Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::new(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = Rational::from(rem.last().unwrap() / &lead);
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= Rational::from(&q * c);
            }
            quot[k] = q;
            rem.pop();
            while rem.last().map(|c| *c == 0).unwrap_or(false) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `modulus`, if they are coprime.
    pub fn inverse_mod(&self, modulus: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (modulus.clone(), self.div_rem(modulus).1);
        let (mut s0, mut s1) = (Self::zero(), Self::constant(Rational::from(1)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = Rational::from(r0.leading().recip_ref());
        Some(s0.scale(&c).div_rem(modulus).1)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        self.scale(&Rational::from(l.recip_ref()))
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = Integer::new();
        let mut den = Integer::from(1);
        for c in &self.coeffs {
            num.gcd_mut(c.numer());
            den.lcm_mut(c.denom());
        }
        let mut s = Rational::from((den, num));
        if self.leading() < 0 {
            s = -s;
        }
        self.scale(&s)
    }

    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        self.div_rem(&g).0.primitive()
    }

    pub fn integer_coeffs(&self) -> Vec<Integer> {
        self.coeffs.iter().map(|c| c.numer().clone()).collect()
    }

    /// Coefficient vector norm `sqrt(sum c_i^2)` in log scale.
    pub fn log_coefficient_norm(&self) -> f64 {
        let s: Rational = self.coeffs.iter().map(|c| Rational::from(c.square_ref())).sum();
        crate::num::ln_rational(&s) / 2.0
    }

    /// Numerical roots (with multiplicity) at `prec` bits.
    pub fn roots(&self, prec: u32) -> Vec<Complex> {
        let d = match self.degree() {
            Some(d) if d > 0 => d,
            _ => return Vec::new(),
        };
        let mut roots = aberth_f64(self);
        let dp = self.derivative();
        let tol_bits = prec.saturating_sub(16);
        let mut out = Vec::with_capacity(d);
        for r in roots.drain(..) {
            let mut z = Complex::with_val(prec, (r.re, r.im));
            for _ in 0..(prec / 8 + 60) {
                let fz = self.eval_complex(&z);
                let dz = dp.eval_complex(&z);
                if dz.is_zero() {
                    break;
                }
                let step = Complex::with_val(prec, &fz / &dz);
                z -= &step;
                let sz = Float::with_val(prec, step.abs_ref());
                let az = Float::with_val(prec, z.abs_ref()).max(&Float::with_val(prec, 1));
                if sz.is_zero() || (Float::with_val(prec, &sz / &az).get_exp().unwrap_or(i32::MIN) < -(tol_bits as i32)) {
                    break;
                }
            }
            out.push(z);
        }
        out
    }

    /// Root nearest to `target`.
    pub fn nearest_root(&self, target: &Complex, prec: u32) -> Option<Complex> {
        self.roots(prec).into_iter().min_by(|a, b| {
            let da = Float::with_val(prec, (a - target.clone()).abs_ref());
            let db = Float::with_val(prec, (b - target.clone()).abs_ref());
            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

fn aberth_f64(p: &UniPoly) -> Vec<Complex64> {
    let c: Vec<Complex64> = p.coeffs.iter().map(|x| Complex64::new(x.to_f64(), 0.0)).collect();
    roots_complex_f64(&c)
}

/// Roots of a polynomial with complex double coefficients (constant term first), by Aberth iteration.
pub fn roots_complex_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().map(|z| z.norm() == 0.0).unwrap_or(false) {
        c.pop();
    }
    if c.len() < 2 {
        return Vec::new();
    }
    let d = c.len() - 1;
    let lead = c[d];
    for z in &mut c {
        *z /= lead;
    }
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let deval = |z: Complex64| {
        c.iter().enumerate().skip(1).rev().fold(Complex64::new(0.0, 0.0), |acc, (i, a)| acc * z + a * i as f64)
    };
    let radius = 1.0 + c[..d].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let ratio = eval(z[i]) / deval(z[i]);
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::from(1);
    for col in 0..n {
        let pivot = match (col..n).find(|&r| m[r][col] != 0) {
            Some(p) => p,
            None => return Rational::new(),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let factor = Rational::from(&m[r][col] / &pv);
            for c in col..n {
                let t = Rational::from(&factor * &m[col][c]);
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Sylvester matrix of two univariate coefficient lists (constant term first).
pub fn sylvester<T: Clone>(a: &[T], b: &[T], zero: T) -> Vec<Vec<T>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two univariate polynomials.
pub fn resultant(a: &UniPoly, b: &UniPoly) -> Rational {
    match (a.degree(), b.degree()) {
        (None, _) | (_, None) => Rational::new(),
        (Some(0), Some(n)) => rug::ops::Pow::pow(a.leading(), n as u32),
        (Some(m), Some(0)) => rug::ops::Pow::pow(b.leading(), m as u32),
        _ => determinant(sylvester(a.coeffs(), b.coeffs(), Rational::new())),
    }
}

/// Interpolating polynomial through `(x_i, y_i)` (Newton form, exact).
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = Rational::from(&coef[i] - &coef[i - 1]);
            let den = Rational::from(&xs[i] - &xs[i - j]);
            coef[i] = num / den;
        }
    }
    let mut poly = UniPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        poly = poly.mul(&UniPoly::linear_root(xs[i].clone())).add(&UniPoly::constant(coef[i].clone()));
    }
    poly
}

/// Minimal polynomial of `q(alpha)` where `alpha` is a root of the irreducible `p`.
pub fn minimal_polynomial_of_image(p: &UniPoly, q: &UniPoly) -> Result<UniPoly> {
    let d = p.degree().ok_or_else(|| Error::InvalidPolynomial("zero minimal polynomial".into()))?;
    let xs: Vec<Rational> = (0..=d as i64).map(Rational::from).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|y| resultant(p, &UniPoly::constant(y.clone()).sub(q)))
        .collect();
    let r = interpolate(&xs, &ys);
    Ok(r.squarefree())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x - 2, x^2 - 1) = (2)^2 - 1
        let a = UniPoly::from_i64(&[-2, 1]);
        let b = UniPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(resultant(&a, &b), Rational::from(3));
    }

    #[test]
    fn roots_of_quadratic() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let mut r: Vec<f64> = p.roots(200).iter().map(|z| z.real().to_f64()).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-15);
        assert!((r[0] + 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn high_precision_root() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let z = p.nearest_root(&Complex::with_val(400, (1.4, 0)), 400).unwrap();
        let err = Float::with_val(400, z.real() - Float::with_val(400, 2).sqrt()).abs();
        assert!(err < Float::with_val(400, 1e-100));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UniPoly::from_i64(&[3, -1, 0, 2]);
        let xs: Vec<Rational> = (0..4).map(Rational::from).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval_rational(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }

    #[test]
    fn inverse_modulo_quadratic() {
        // (1 + x)^{-1} mod x^2 - 2 is (x - 1).
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let q = UniPoly::from_i64(&[1, 1]);
        assert_eq!(q.inverse_mod(&p).unwrap(), UniPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn minimal_polynomial_of_square_of_root() {
        // alpha^2 where alpha^2 = 2 has minimal polynomial y - 2.
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let q = UniPoly::from_i64(&[0, 0, 1]);
        assert_eq!(minimal_polynomial_of_image(&p, &q).unwrap(), UniPoly::from_i64(&[-2, 1]));
        let q = UniPoly::from_i64(&[1, 1]);
        assert_eq!(minimal_polynomial_of_image(&p, &q).unwrap(), UniPoly::from_i64(&[-1, -2, 1]));
    }
}
