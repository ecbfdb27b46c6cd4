use num_complex::Complex64;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::algebraic::determinant;
use crate::derivations::{VarietyPresentation, MAX_AMBIENT_DIM};
use crate::error::{Error, Result};

/// Linear subspace `W` of `Q^{M+1}` given by a saturated integer basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralSubspace {
    basis: Vec<Vec<Integer>>,
}

impl IntegralSubspace {
    /// Validates that the rows are independent and that their maximal minors are coprime.
    pub fn new(basis: Vec<Vec<Integer>>) -> Result<Self> {
        let n = basis.first().map(Vec::len).ok_or_else(|| Error::DegeneratePoint("empty basis".into()))?;
        if basis.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: basis.iter().map(Vec::len).max().unwrap_or(0) });
        }
        if basis.len() >= n {
            return Err(Error::DegeneratePoint("subspace must be proper".into()));
        }
        match minors_gcd(&basis) {
            g if g == 0 => Err(Error::DegeneratePoint("basis is linearly dependent".into())),
            g if g != 1 => Err(Error::DegeneratePoint(format!("basis is not saturated (index {g})"))),
            _ => Ok(Self { basis }),
        }
    }

    pub fn basis(&self) -> &[Vec<Integer>] {
        &self.basis
    }

    /// Vector-space dimension of `W`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_coords(&self) -> usize {
        self.basis[0].len()
    }

    /// Codimension of `P(W)` in `P^M`.
    pub fn codim(&self) -> usize {
        self.num_coords() - self.dim()
    }

    /// `h(P(W)) = log covol(W ∩ Z^{M+1}) = (1/2) log det(B B^T)`.
    pub fn height(&self) -> f64 {
        let k = self.dim();
        let gram: Vec<Vec<Rational>> = (0..k)
            .map(|i| (0..k).map(|j| Rational::from(dot(&self.basis[i], &self.basis[j]))).collect())
            .collect();
        crate::num::ln_rational(&determinant(gram)) / 2.0
    }

    /// Distance from a unit vector to `P(W)` in double precision.
    pub fn distance_f64(&self, x: &[Complex64]) -> f64 {
        distance_to_span(x, &orthonormal_f64(&self.basis))
    }
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| Integer::from(x * y)).sum()
}

/// gcd of all maximal minors; zero iff the rows are dependent.
pub fn minors_gcd(rows: &[Vec<Integer>]) -> Integer {
    let k = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut g = Integer::new();
    for cols in combinations(n, k) {
        let m: Vec<Vec<Rational>> =
            rows.iter().map(|r| cols.iter().map(|&c| Rational::from(r[c].clone())).collect()).collect();
        let d = determinant(m);
        g.gcd_mut(d.numer());
    }
    g
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn orthonormal_f64(basis: &[Vec<Integer>]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in basis {
        let mut w: Vec<Complex64> = v.iter().map(|c| Complex64::new(c.to_f64(), 0.0)).collect();
        for b in &out {
            let c: Complex64 = w.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            out.push(w.iter().map(|z| z / n).collect());
        }
    }
    out
}

fn distance_to_span(x: &[Complex64], ortho: &[Vec<Complex64>]) -> f64 {
    let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let proj: f64 = ortho.iter().map(|b| x.iter().zip(b).map(|(u, v)| u * v.conj()).sum::<Complex64>().norm_sqr()).sum();
    ((nx - proj).max(0.0) / nx).sqrt()
}

/// Search settings for [`find_avoiding_subspace`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AvoidOptions {
    /// `c_bar`.
    pub avoid_distance: f64,
    /// `c_tilde`.
    pub avoid_height: f64,
    /// Required ratio of the sampled minimum to the target bound.
    pub safety: f64,
    /// Largest absolute entry of enumerated vectors.
    pub max_entry: u32,
    /// Cap on candidate tuples examined for subspaces of dimension above one.
    pub max_tuples: usize,
}

impl AvoidOptions {
    /// Default search limits with the calibrated `c_bar` and `c_tilde`.
    pub fn from_calibration(c: &crate::config::Calibration) -> Self {
        Self { avoid_distance: c.avoid_distance, avoid_height: c.avoid_height, ..Self::default() }
    }
}

impl Default for AvoidOptions {
    fn default() -> Self {
        Self { avoid_distance: std::f64::consts::LN_2, avoid_height: 2.0, safety: 1.5, max_entry: 20, max_tuples: 200_000 }
    }
}

/// Outcome of a subspace search.
#[derive(Clone, Debug)]
pub struct AvoidingSubspace {
    pub subspace: IntegralSubspace,
    pub height: f64,
    /// `c_tilde * log deg X`.
    pub height_bound: f64,
    pub height_ok: bool,
    /// `exp(-c_bar) / deg X`.
    pub distance_bound: f64,
    /// Smallest distance from the search sample to `P(W)`.
    pub min_distance: f64,
    pub log_distance_to_x: f64,
}

/// JSON form of an [`AvoidingSubspace`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AvoidingSubspaceReport {
    pub basis: Vec<Vec<String>>,
    pub codim: usize,
    pub height: f64,
    pub height_bound: f64,
    pub height_ok: bool,
    pub distance_bound: f64,
    pub min_distance: f64,
    pub log_distance_to_x: f64,
}

impl From<&AvoidingSubspace> for AvoidingSubspaceReport {
    fn from(a: &AvoidingSubspace) -> Self {
        Self {
            basis: a.subspace.basis().iter().map(|v| v.iter().map(|c| c.to_string()).collect()).collect(),
            codim: a.subspace.codim(),
            height: a.height,
            height_bound: a.height_bound,
            height_ok: a.height_ok,
            distance_bound: a.distance_bound,
            min_distance: a.min_distance,
            log_distance_to_x: a.log_distance_to_x,
        }
    }
}

/// Smallest distance from sample points to `P(W)`.
pub fn min_distance_to_sample(w: &IntegralSubspace, sample: &[Vec<Complex64>]) -> f64 {
    let ortho = orthonormal_f64(w.basis());
    sample.iter().map(|x| distance_to_span(x, &ortho)).fold(f64::INFINITY, f64::min)
}

/// Searches a sampled variety for an integral subspace with `P(W)` of codimension `codim`.
pub fn find_avoiding_subspace(
    x: &VarietyPresentation,
    codim: usize,
    samples: usize,
    seed: u64,
    opts: &AvoidOptions,
) -> Result<AvoidingSubspace> {
    let sample = x.sample_points(samples, seed);
    find_avoiding_subspace_in(&sample, x.ambient_dim(), x.degree() as u64, codim, opts)
}

/// Same search against an explicit point sample of a variety of degree `degree` in `P^M`.
pub fn find_avoiding_subspace_in(
    sample: &[Vec<Complex64>],
    ambient_dim: usize,
    degree: u64,
    codim: usize,
    opts: &AvoidOptions,
) -> Result<AvoidingSubspace> {
    if ambient_dim > MAX_AMBIENT_DIM {
        return Err(Error::DeskScaleExceeded(format!("ambient dimension {ambient_dim} exceeds {MAX_AMBIENT_DIM}")));
    }
    if codim == 0 || codim > ambient_dim {
        return Err(Error::Config(format!("codimension must lie in 1..={ambient_dim}")));
    }
    if sample.is_empty() {
        return Err(Error::SearchExhausted("empty sample of the variety".into()));
    }
    let n = ambient_dim + 1;
    let k = n - codim;
    let degree = degree.max(1) as f64;
    let distance_bound = (-opts.avoid_distance).exp() / degree;
    let threshold = opts.safety * distance_bound;
    let height_bound = opts.avoid_height * degree.ln();

    let mut tuples = 0usize;
    let mut found = None;
    for r in 1..=opts.max_entry {
        let candidates = enumerate_primitive(n, r);
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        found = search(&candidates, sample, k, threshold, &mut chosen, 0, &mut tuples, opts.max_tuples);
        if found.is_some() || tuples >= opts.max_tuples {
            break;
        }
    }
    let Some((basis, min_distance)) = found else {
        return Err(Error::SearchExhausted(format!(
            "no subspace with entries <= {} keeps distance {threshold:.4}",
            opts.max_entry
        )));
    };
    let subspace = IntegralSubspace::new(basis)?;
    let height = subspace.height();
    Ok(AvoidingSubspace {
        height,
        height_bound,
        height_ok: height <= height_bound + 1e-12,
        distance_bound,
        min_distance,
        log_distance_to_x: min_distance.ln(),
        subspace,
    })
}

#[allow(clippy::too_many_arguments)]
fn search(
    candidates: &[Vec<Integer>],
    sample: &[Vec<Complex64>],
    k: usize,
    threshold: f64,
    chosen: &mut Vec<usize>,
    start: usize,
    tuples: &mut usize,
    max_tuples: usize,
) -> Option<(Vec<Vec<Integer>>, f64)> {
    for i in start..candidates.len() {
        if *tuples >= max_tuples {
            return None;
        }
        *tuples += 1;
        chosen.push(i);
        let basis: Vec<Vec<Integer>> = chosen.iter().map(|&j| candidates[j].clone()).collect();
        if minors_gcd(&basis) == 1 {
            let ortho = orthonormal_f64(&basis);
            let d = sample.iter().map(|x| distance_to_span(x, &ortho)).fold(f64::INFINITY, f64::min);
            if d >= threshold {
                if chosen.len() == k {
                    chosen.pop();
                    return Some((basis, d));
                }
                if let Some(hit) = search(candidates, sample, k, threshold, chosen, i + 1, tuples, max_tuples) {
                    chosen.pop();
                    return Some(hit);
                }
            }
        }
        chosen.pop();
    }
    None
}

/// Primitive integer vectors up to sign, ordered by sup-norm shell, then Euclidean norm,
/// then lexicographically.
pub fn enumerate_primitive(n: usize, max_entry: u32) -> Vec<Vec<Integer>> {
    let r = max_entry as i64;
    let mut out: Vec<(i64, i64, Vec<i64>)> = Vec::new();
    let mut v = vec![-r; n];
    loop {
        let first_nonzero = v.iter().find(|&&c| c != 0).copied();
        if first_nonzero.is_some_and(|c| c > 0) {
            let g = v.iter().fold(0i64, |g, &c| gcd(g, c.abs()));
            if g == 1 {
                let sup = v.iter().map(|c| c.abs()).max().unwrap_or(0);
                let sq = v.iter().map(|c| c * c).sum();
                out.push((sup, sq, v.clone()));
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out.into_iter().map(|(_, _, v)| v.into_iter().map(Integer::from).collect()).collect();
            }
            i -= 1;
            if v[i] < r {
                v[i] += 1;
                break;
            }
            v[i] = -r;
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
