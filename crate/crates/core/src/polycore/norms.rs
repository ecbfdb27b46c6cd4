use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::poly::HomogeneousPolynomial;
use crate::num;

/// A real quantity together with an error radius (zero when exact).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub error_radius: f64,
}

impl NormValue {
    pub fn exact(value: f64) -> Self {
        Self { value, error_radius: 0.0 }
    }
}

/// Squared L2 norm of `x^alpha` for the Fubini–Study probability measure on `P^M`.
pub fn monomial_norm_sq(exp: &[u32]) -> Rational {
    let m = exp.len() as u32 - 1;
    let d: u32 = exp.iter().sum();
    let mut num = num::factorial(m);
    for &a in exp {
        num *= num::factorial(a);
    }
    Rational::from((num, num::factorial(d + m)))
}

/// Exact squared L2 norm; monomials are orthogonal for the Fubini–Study measure.
pub fn l2_norm_sq(f: &HomogeneousPolynomial) -> Rational {
    let mut s = Rational::new();
    for (e, c) in f.terms() {
        s += Rational::from(c.square_ref()) * monomial_norm_sq(e);
    }
    s
}

/// L2 norm over the unit sphere.
pub fn l2_norm(f: &HomogeneousPolynomial) -> NormValue {
    NormValue::exact(log_l2_norm(f).exp())
}

/// Natural log of the L2 norm, computed from the exact square.
pub fn log_l2_norm(f: &HomogeneousPolynomial) -> f64 {
    num::ln_rational(&l2_norm_sq(f)) / 2.0
}

/// Both sides of the product-norm sandwich for `f g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductBounds {
    pub log_product: f64,
    /// `log|f| + log|g| - lower log(1 + D D')`.
    pub lower: f64,
    /// `log|f| + log|g| + upper (D + D') + log C(D + D' + M, M)`.
    pub upper: f64,
    pub holds: bool,
}

/// Evaluates the product-norm bounds with constants `upper` and `lower`.
pub fn product_norm_bounds(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial, upper: f64, lower: f64) -> ProductBounds {
    let fg = f * g;
    let split = log_l2_norm(f) + log_l2_norm(g);
    let (d1, d2) = (f.degree() as u64, g.degree() as u64);
    let m = f.ambient_dim() as u64;
    let log_product = log_l2_norm(&fg);
    let lo = split - lower * (1.0 + (d1 * d2) as f64).ln();
    let hi = split + upper * (d1 + d2) as f64 + num::ln_binomial(d1 + d2 + m, m);
    ProductBounds { log_product, lower: lo, upper: hi, holds: lo <= log_product && log_product <= hi }
}

/// Log of the L2 norm at a given precision.
pub fn log_l2_norm_float(f: &HomogeneousPolynomial, prec: u32) -> Float {
    let s = Float::with_val(prec, &l2_norm_sq(f));
    s.ln() / 2u32
}

/// Monomial table evaluated in double precision.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial {
    num_vars: usize,
    max_power: Vec<usize>,
    terms: Vec<(Vec<u32>, f64)>,
}

impl CompiledPolynomial {
    pub fn new(f: &HomogeneousPolynomial) -> Self {
        let num_vars = f.num_vars();
        let max_power = (0..num_vars).map(|i| f.degree_in(i) as usize).collect();
        let terms = f.terms().map(|(e, c)| (e.clone(), c.to_f64())).collect();
        Self { num_vars, max_power, terms }
    }

    fn powers(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        (0..self.num_vars)
            .map(|i| {
                let mut v = vec![Complex64::new(1.0, 0.0); self.max_power[i] + 1];
                for k in 1..v.len() {
                    v[k] = v[k - 1] * x[i];
                }
                v
            })
            .collect()
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let pw = self.powers(x);
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for (i, &k) in e.iter().enumerate() {
                t *= pw[i][k as usize];
            }
            s += t;
        }
        s
    }

    /// Value and holomorphic gradient.
    pub fn eval_with_gradient(&self, x: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let pw = self.powers(x);
        let mut s = Complex64::new(0.0, 0.0);
        let mut g = vec![Complex64::new(0.0, 0.0); self.num_vars];
        for (e, c) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for (i, &k) in e.iter().enumerate() {
                t *= pw[i][k as usize];
            }
            s += t;
            for (j, &kj) in e.iter().enumerate() {
                if kj == 0 {
                    continue;
                }
                let mut d = Complex64::new(*c * kj as f64, 0.0);
                for (i, &k) in e.iter().enumerate() {
                    let p = if i == j { k - 1 } else { k };
                    d *= pw[i][p as usize];
                }
                g[j] += d;
            }
        }
        (s, g)
    }
}

/// Uniform point on the unit sphere of `C^n` (Fubini–Study distributed in `P^{n-1}`).
pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let r = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= r;
    }
    v
}

fn normalize(v: &mut [Complex64]) {
    let r = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= r;
    }
}

/// Options for the multistart sup-norm search.
#[derive(Clone, Copy, Debug)]
pub struct SupNormOptions {
    pub seed: u64,
    pub samples: usize,
    pub starts: usize,
    pub max_iterations: usize,
}

impl Default for SupNormOptions {
    fn default() -> Self {
        Self { seed: 0, samples: 256, starts: 8, max_iterations: 400 }
    }
}

fn ascend(f: &CompiledPolynomial, start: &[Complex64], max_iterations: usize) -> (f64, Vec<Complex64>) {
    let mut x = start.to_vec();
    let mut value = f.eval(&x).norm_sqr();
    let mut step = 0.5;
    for _ in 0..max_iterations {
        let (fx, grad) = f.eval_with_gradient(&x);
        let mut dir: Vec<Complex64> = grad.iter().map(|g| fx * g.conj()).collect();
        let along: Complex64 = dir.iter().zip(&x).map(|(d, xi)| d * xi.conj()).sum();
        for (d, xi) in dir.iter_mut().zip(&x) {
            *d -= along * xi;
        }
        let dn = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if dn <= 1e-15 * value.max(1e-300) {
            break;
        }
        let mut improved = false;
        for _ in 0..40 {
            let mut y: Vec<Complex64> = x.iter().zip(&dir).map(|(a, d)| a + d * (step / dn)).collect();
            normalize(&mut y);
            let vy = f.eval(&y).norm_sqr();
            if vy > value {
                let gain = vy - value;
                x = y;
                value = vy;
                step = (step * 1.5).min(1.0);
                improved = gain > 1e-15 * value;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (value, x)
}

/// Sup of `|f(x)|/|x|^D` over the unit sphere by seeded multistart projected ascent.
/// The error radius is the observed spread among starts reaching the top basin.
pub fn sup_norm_with(f: &HomogeneousPolynomial, opts: SupNormOptions) -> NormValue {
    if f.is_zero() {
        return NormValue::exact(0.0);
    }
    let compiled = CompiledPolynomial::new(f);
    let n = f.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut candidates: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(opts.samples + n);
    for i in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[i] = Complex64::new(1.0, 0.0);
        candidates.push((compiled.eval(&e).norm_sqr(), e));
    }
    for _ in 0..opts.samples.max(opts.starts) {
        let x = random_unit_vector(&mut rng, n);
        candidates.push((compiled.eval(&x).norm_sqr(), x));
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut results: Vec<f64> = candidates
        .iter()
        .take(opts.starts)
        .map(|(_, x)| ascend(&compiled, x, opts.max_iterations).0.sqrt())
        .collect();
    results.sort_by(|a, b| b.total_cmp(a));
    let best = results[0];
    let spread = results
        .iter()
        .skip(1)
        .filter(|&&v| v >= best * (1.0 - 1e-4))
        .map(|&v| best - v)
        .fold(0.0, f64::max);
    NormValue { value: best, error_radius: spread.max(best * 1e-12) }
}

pub fn sup_norm(f: &HomogeneousPolynomial) -> NormValue {
    sup_norm_with(f, SupNormOptions::default())
}

/// Options for the Monte Carlo log-integral.
#[derive(Clone, Copy, Debug)]
pub struct MonteCarloOptions {
    pub seed: u64,
    pub samples: usize,
    pub block_size: usize,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self { seed: 0, samples: 1 << 17, block_size: 4096 }
    }
}

/// Mean of `g` over `samples` Fubini–Study points, with a 3σ error radius.
/// Blocks are seeded by index and reduced in order, so the result is reproducible.
pub fn monte_carlo_mean<G>(num_vars: usize, opts: MonteCarloOptions, g: G) -> NormValue
where
    G: Fn(&[Complex64]) -> f64 + Sync,
{
    let block = opts.block_size.max(1);
    let blocks = opts.samples.div_ceil(block);
    let sums: Vec<(f64, f64, usize)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(b as u64);
            let count = block.min(opts.samples - b * block);
            let (mut s, mut s2, mut n) = (0.0, 0.0, 0usize);
            for _ in 0..count {
                let x = random_unit_vector(&mut rng, num_vars);
                let v = g(&x);
                if v.is_finite() {
                    s += v;
                    s2 += v * v;
                    n += 1;
                }
            }
            (s, s2, n)
        })
        .collect();
    let (s, s2, n) = sums.iter().fold((0.0, 0.0, 0usize), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let n = n.max(1) as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0);
    NormValue { value: mean, error_radius: 3.0 * (var / n).sqrt() }
}

/// Monte Carlo estimate of the integral of `log|f|` against the Fubini–Study measure.
pub fn mahler_integral_with(f: &HomogeneousPolynomial, opts: MonteCarloOptions) -> NormValue {
    if f.is_zero() {
        return NormValue { value: f64::NEG_INFINITY, error_radius: 0.0 };
    }
    if f.degree() == 0 {
        return NormValue::exact(num::ln_rational(&f.coeff(&vec![0; f.num_vars()])));
    }
    let compiled = CompiledPolynomial::new(f);
    monte_carlo_mean(f.num_vars(), opts, |x| compiled.eval(x).norm().ln())
}

pub fn mahler_integral(f: &HomogeneousPolynomial) -> NormValue {
    mahler_integral_with(f, MonteCarloOptions::default())
}

/// `sum_{m=1}^{M} 1/m`.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|k| 1.0 / k as f64).sum()
}
