//! Truncated multivariate Taylor series with high-precision complex coefficients.

use std::collections::HashMap;
use std::sync::Arc;

use rug::{Complex, Float, Integer};

/// Monomial index tables shared by all jets of a given shape.
#[derive(Debug)]
pub struct JetSpace {
    pub num_vars: usize,
    pub order: u32,
    pub prec: u32,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    products: Vec<(usize, usize, usize)>,
}

impl JetSpace {
    pub fn new(num_vars: usize, order: u32, prec: u32) -> Arc<Self> {
        let mut exps = Vec::new();
        for total in 0..=order {
            compositions(num_vars, total, &mut Vec::new(), &mut exps);
        }
        let index: HashMap<Vec<u32>, usize> = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut products = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            for (j, b) in exps.iter().enumerate() {
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&k) = index.get(&s) {
                    products.push((i, j, k));
                }
            }
        }
        Arc::new(Self { num_vars, order, prec, exps, index, products })
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
}

fn compositions(n: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == n - 1 {
        let mut e = prefix.clone();
        e.push(total);
        out.push(e);
        return;
    }
    for k in (0..=total).rev() {
        prefix.push(k);
        compositions(n, total - k, prefix, out);
        prefix.pop();
    }
}

/// Truncated Taylor expansion around the origin.
#[derive(Clone, Debug)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<Complex>,
}

impl Jet {
    pub fn zero(space: &Arc<JetSpace>) -> Self {
        let coeffs = vec![Complex::new(space.prec); space.len()];
        Self { space: space.clone(), coeffs }
    }

    pub fn constant(space: &Arc<JetSpace>, c: Complex) -> Self {
        let mut j = Self::zero(space);
        j.coeffs[0] = Complex::with_val(space.prec, c);
        j
    }

    /// `c + sum_i linear[i] * z_i`
    pub fn affine(space: &Arc<JetSpace>, c: &Complex, linear: &[Complex]) -> Self {
        let mut j = Self::constant(space, c.clone());
        if space.order >= 1 {
            for (i, a) in linear.iter().enumerate() {
                let mut e = vec![0; space.num_vars];
                e[i] = 1;
                let k = space.index[&e];
                j.coeffs[k] = Complex::with_val(space.prec, a);
            }
        }
        j
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn coeff(&self, exp: &[u32]) -> &Complex {
        &self.coeffs[self.space.index[exp]]
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, exp: &[u32], c: Complex) {
        let k = self.space.index[exp];
        self.coeffs[k] = c;
    }

    /// `∂^J` of the expanded function at the origin, i.e. `J! * coeff_J`.
    pub fn derivative(&self, exp: &[u32]) -> Complex {
        let mut f = Integer::from(1);
        for &k in exp {
            f *= Integer::from(Integer::factorial(k));
        }
        Complex::with_val(self.space.prec, self.coeff(exp) * f)
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Complex::with_val(self.space.prec, a + b)).collect();
        Self { space: self.space.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Complex::with_val(self.space.prec, a - b)).collect();
        Self { space: self.space.clone(), coeffs }
    }

    pub fn scale(&self, c: &Complex) -> Self {
        let coeffs = self.coeffs.iter().map(|a| Complex::with_val(self.space.prec, a * c)).collect();
        Self { space: self.space.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.space);
        for &(i, j, k) in &self.space.products {
            if self.coeffs[i].is_zero() || other.coeffs[j].is_zero() {
                continue;
            }
            let t = Complex::with_val(self.space.prec, &self.coeffs[i] * &other.coeffs[j]);
            out.coeffs[k] += t;
        }
        out
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(&self.space, Complex::with_val(self.space.prec, 1));
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Self {
        let prec = self.space.prec;
        let a0 = self.coeffs[0].clone();
        let inv0 = Complex::with_val(prec, a0.recip_ref());
        // 1/(a0 (1 + u)) = (1/a0) sum (-u)^k with u nilpotent up to the order.
        let mut u = self.scale(&inv0);
        u.coeffs[0] = Complex::new(prec);
        let neg_u = u.scale(&Complex::with_val(prec, -1));
        let mut term = Self::constant(&self.space, Complex::with_val(prec, 1));
        let mut sum = term.clone();
        for _ in 0..self.space.order {
            term = term.mul(&neg_u);
            sum = sum.add(&term);
        }
        sum.scale(&inv0)
    }

    /// Largest `log|∂^J|` over multi-indices accepted by `filter`.
    pub fn max_log_derivative<F: Fn(&[u32]) -> bool>(&self, filter: F) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for e in self.space.exps.iter() {
            if !filter(e) {
                continue;
            }
            let d = self.derivative(e);
            let a = Float::with_val(self.space.prec, d.abs_ref());
            if !a.is_zero() {
                best = best.max(a.ln().to_f64());
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_of_one_minus_z() {
        let space = JetSpace::new(1, 5, 128);
        let one = Complex::with_val(128, 1);
        let j = Jet::affine(&space, &one, &[Complex::with_val(128, -1)]);
        let r = j.recip();
        for k in 0..=5u32 {
            assert_eq!(r.coeff(&[k]).real().to_f64(), 1.0);
        }
    }

    #[test]
    fn derivative_of_square() {
        let space = JetSpace::new(2, 3, 128);
        let zero = Complex::new(128);
        let z0 = Jet::affine(&space, &zero, &[Complex::with_val(128, 1), Complex::new(128)]);
        let sq = z0.powi(2);
        assert_eq!(sq.derivative(&[2, 0]).real().to_f64(), 2.0);
        assert_eq!(sq.derivative(&[1, 1]).real().to_f64(), 0.0);
    }
}
