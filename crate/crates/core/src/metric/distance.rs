use rug::{Float, Integer};

use super::chart::Chart;
use super::point::ProjectivePoint;
use crate::error::{Error, Result};
use crate::num;
use crate::polycore::{log_l2_norm_float, HomogeneousPolynomial};

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

/// Fubini–Study chordal distance `|x ∧ y| / (|x| |y|)` at the working precision.
pub fn fs_distance_float(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<Float> {
    check_dims(x.num_coords(), y.num_coords())?;
    let prec = x.precision().min(y.precision());
    let xs = x.with_precision(prec);
    let ys = y.with_precision(prec);
    let w = num::wedge_norm(xs.coords(), ys.coords());
    Ok(w / xs.norm() / ys.norm())
}

pub fn fs_distance(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<f64> {
    Ok(fs_distance_float(x, y)?.to_f64())
}

/// Natural log of the distance, `-inf` for equal points.
pub fn log_fs_distance(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<f64> {
    Ok(num::ln_float(&fs_distance_float(x, y)?))
}

/// Orthonormal basis of the span of integer vectors.
pub fn orthonormal_basis(basis: &[Vec<Integer>], prec: u32) -> Vec<Vec<rug::Complex>> {
    let vectors: Vec<Vec<rug::Complex>> =
        basis.iter().map(|v| v.iter().map(|c| rug::Complex::with_val(prec, (c, 0))).collect()).collect();
    let mut out: Vec<Vec<rug::Complex>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &out {
            let c = num::hermitian(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= rug::Complex::with_val(prec, &c * bi);
            }
        }
        let n = num::norm(&w);
        if !n.is_zero() {
            out.push(w.iter().map(|z| rug::Complex::with_val(prec, z / &n)).collect());
        }
    }
    out
}

/// Distance from `x` to the linear subspace `P(W)` spanned by integer vectors.
pub fn point_subspace_distance_float(x: &ProjectivePoint, basis: &[Vec<Integer>]) -> Result<Float> {
    for b in basis {
        check_dims(x.num_coords(), b.len())?;
    }
    let prec = x.precision();
    let ortho = orthonormal_basis(basis, prec);
    let u = x.unit();
    let mut r = u.clone();
    for b in &ortho {
        let c = num::hermitian(&u, b);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri -= rug::Complex::with_val(prec, &c * bi);
        }
    }
    Ok(num::norm(&r))
}

pub fn point_subspace_distance(x: &ProjectivePoint, basis: &[Vec<Integer>]) -> Result<f64> {
    Ok(point_subspace_distance_float(x, basis)?.to_f64())
}

/// `log(|f(theta)| / (|f|_2 |theta|^D))`.
pub fn algebraic_distance(f: &HomogeneousPolynomial, theta: &ProjectivePoint) -> Result<f64> {
    check_dims(f.num_vars(), theta.num_coords())?;
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial has no divisor".into()));
    }
    let prec = theta.precision();
    let value = f.eval_complex(&theta.unit());
    let a = num::abs(&value);
    if a.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok((a.ln() - log_l2_norm_float(f, prec)).to_f64())
}

/// `sup_{|J| <= S} log|∂^J F(0)| - log|f|_2` with `F` the pullback of `f` to the canonical chart at `theta`.
pub fn derivated_algebraic_distance(f: &HomogeneousPolynomial, theta: &ProjectivePoint, order: u32) -> Result<f64> {
    derivated_algebraic_distance_in(f, &Chart::canonical(theta), order)
}

pub fn derivated_algebraic_distance_in(f: &HomogeneousPolynomial, chart: &Chart, order: u32) -> Result<f64> {
    check_dims(f.num_vars(), chart.basis().len())?;
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial has no divisor".into()));
    }
    let jet = chart.pullback(f, order);
    let top = jet.max_log_derivative(|_| true);
    Ok(top - log_l2_norm_float(f, chart.precision()).to_f64())
}
