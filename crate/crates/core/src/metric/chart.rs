use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};

use super::point::ProjectivePoint;
use crate::jet::{Jet, JetSpace};
use crate::num;
use crate::polycore::{random_unit_vector, HomogeneousPolynomial};

/// Affine chart `z -> [b_0 + sum_j z_j b_j]` given by a unitary frame with `b_0` on the center.
#[derive(Clone, Debug)]
pub struct Chart {
    basis: Vec<Vec<Complex>>,
    prec: u32,
}

fn gram_schmidt(vectors: &[Vec<Complex>], prec: u32, want: usize) -> Vec<Vec<Complex>> {
    let mut out: Vec<Vec<Complex>> = Vec::with_capacity(want);
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 3));
    for v in vectors {
        if out.len() == want {
            break;
        }
        let mut w: Vec<Complex> = v.iter().map(|z| Complex::with_val(prec, z)).collect();
        for _ in 0..2 {
            for b in &out {
                let c = num::hermitian(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= Complex::with_val(prec, &c * bi);
                }
            }
        }
        let n = num::norm(&w);
        if n > tiny {
            out.push(w.iter().map(|z| Complex::with_val(prec, z / &n)).collect());
        }
    }
    out
}

impl Chart {
    /// Canonical chart: Householder reflection sending the center to the first basis vector.
    pub fn canonical(theta: &ProjectivePoint) -> Self {
        let prec = theta.precision();
        let u = theta.unit();
        let n = u.len();
        let a0 = num::abs(&u[0]);
        let lambda = if a0.is_zero() {
            Complex::with_val(prec, 1)
        } else {
            Complex::with_val(prec, &u[0] / &a0)
        };
        let mut w = u.clone();
        w[0] -= &lambda;
        let wn2 = Float::with_val(prec, num::norm(&w).square_ref());
        let basis: Vec<Vec<Complex>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let delta = if i == k { Complex::with_val(prec, 1) } else { Complex::new(prec) };
                        if wn2.is_zero() {
                            return delta;
                        }
                        let wk = &w[k];
                        let wi_conj = Complex::with_val(prec, w[i].conj_ref());
                        let t = Complex::with_val(prec, wk * &wi_conj) * 2u32 / &wn2;
                        delta - t
                    })
                    .collect()
            })
            .collect();
        Self { basis, prec }
    }

    /// Chart whose first `directions.len()` chart coordinates span the given directions at the center.
    pub fn aligned(theta: &ProjectivePoint, directions: &[Vec<Complex>]) -> Self {
        let prec = theta.precision();
        let n = theta.num_coords();
        let mut vectors = vec![theta.unit()];
        vectors.extend(directions.iter().cloned());
        for i in 0..n {
            let mut e = vec![Complex::new(prec); n];
            e[i] = Complex::with_val(prec, 1);
            vectors.push(e);
        }
        Self { basis: gram_schmidt(&vectors, prec, n), prec }
    }

    /// Same center, tangent frame rotated by a seeded random unitary matrix.
    pub fn rotated(&self, seed: u64) -> Self {
        let n = self.basis.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<Vec<Complex>> = (1..n)
            .map(|_| {
                random_unit_vector(&mut rng, n - 1)
                    .into_iter()
                    .map(|z| Complex::with_val(self.prec, (z.re, z.im)))
                    .collect()
            })
            .collect();
        let v = gram_schmidt(&raw, self.prec, n - 1);
        let mut basis = vec![self.basis[0].clone()];
        for row in &v {
            let mut b = vec![Complex::new(self.prec); n];
            for (j, c) in row.iter().enumerate() {
                for k in 0..n {
                    b[k] += Complex::with_val(self.prec, c * &self.basis[j + 1][k]);
                }
            }
            basis.push(b);
        }
        Self { basis, prec: self.prec }
    }

    pub fn basis(&self) -> &[Vec<Complex>] {
        &self.basis
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    /// Coordinates of a vector in the frame.
    pub fn frame_coords(&self, v: &[Complex]) -> Vec<Complex> {
        self.basis.iter().map(|b| num::hermitian(v, b)).collect()
    }

    /// Ambient representative of the chart point `z`.
    pub fn point(&self, z: &[Complex]) -> Vec<Complex> {
        let n = self.basis.len();
        let mut x: Vec<Complex> = self.basis[0].clone();
        for (j, zj) in z.iter().enumerate() {
            for k in 0..n {
                x[k] += Complex::with_val(self.prec, zj * &self.basis[j + 1][k]);
            }
        }
        x
    }

    /// Coordinate functions `x_k(z)` as affine jets.
    pub fn coordinate_jets(&self, space: &Arc<JetSpace>) -> Vec<Jet> {
        let n = self.basis.len();
        (0..n)
            .map(|k| {
                let lin: Vec<Complex> = (1..n).map(|j| self.basis[j][k].clone()).collect();
                Jet::affine(space, &self.basis[0][k], &lin)
            })
            .collect()
    }

    /// Taylor jet of `f` pulled back to the chart, to order `order`.
    pub fn pullback(&self, f: &HomogeneousPolynomial, order: u32) -> Jet {
        let space = JetSpace::new(self.dim(), order, self.prec);
        let coords = self.coordinate_jets(&space);
        let powers: Vec<Vec<Jet>> = coords
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut v = vec![Jet::constant(&space, Complex::with_val(self.prec, 1))];
                for k in 1..=f.degree_in(i) as usize {
                    let next = v[k - 1].mul(x);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Jet::zero(&space);
        for (e, c) in f.terms() {
            let mut t = Jet::constant(&space, Complex::with_val(self.prec, (c, 0)));
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }
}
