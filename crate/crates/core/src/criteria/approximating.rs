use serde::{Deserialize, Serialize};

use super::quadruple::GrowthQuadruple;
use crate::error::{Error, Result};
use crate::heights::{weighted_derivated_distance, weighted_size};
use crate::metric::{Cycle, ProjectivePoint};

/// Both sides of the two conditions making `Y` sufficiently approximating of order `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximatingReport {
    pub k: usize,
    pub codim: u32,
    pub order: u32,
    /// Weight `H_k / D_k`.
    pub weight: f64,
    pub size: f64,
    /// `(S_Y / S_k^p) 4^p D_k^(p-1) H_k`.
    pub size_bound: f64,
    /// `size_bound - size`.
    pub size_margin: f64,
    /// `phi^{floor(S_Y / 9^p)}(theta, Y)`.
    pub phi: f64,
    /// `-4 S_Y V_k / (14^(p-1) t(Y) S_k)`.
    pub phi_bound: f64,
    /// `phi_bound - phi`.
    pub phi_margin: f64,
    pub holds: bool,
}

/// Evaluates whether `Y` with order `S_Y` is sufficiently approximating of order `k` for a
/// subvariety of codimension `codim`, returning both margins.
pub fn sufficiently_approximating(
    y: &Cycle,
    s_y: u32,
    k: usize,
    q: &GrowthQuadruple,
    theta: &ProjectivePoint,
    codim: u32,
) -> Result<ApproximatingReport> {
    if k >= q.len() {
        return Err(Error::InvalidInstance(format!("index {k} beyond the prefix")));
    }
    if codim == 0 {
        return Err(Error::InvalidInstance("codimension must be positive".into()));
    }
    let p = codim as i32;
    let weight = q.h(k) / q.d(k);
    let size = weighted_size(y, weight)?;
    let size_bound = s_y as f64 / q.s(k).powi(p) * 4f64.powi(p) * q.d(k).powi(p - 1) * q.h(k);
    let order = s_y / 9u32.pow(codim);
    let phi = weighted_derivated_distance(y, theta, order, weight)?;
    let phi_bound = -4.0 * s_y as f64 * q.v(k) / (14f64.powi(p - 1) * size * q.s(k));
    let size_margin = size_bound - size;
    let phi_margin = phi_bound - phi;
    Ok(ApproximatingReport {
        k,
        codim,
        order,
        weight,
        size,
        size_bound,
        size_margin,
        phi,
        phi_bound,
        phi_margin,
        holds: size_margin >= 0.0 && phi_margin >= 0.0,
    })
}
