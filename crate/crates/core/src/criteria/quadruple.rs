use serde::{Deserialize, Serialize};

use super::growth::{growth_exponent, GrowthEstimate, MIN_SAMPLES};
use crate::error::{Error, Result};

/// Sequences `(D_k, S_k, H_k, V_k)` on a finite prefix `k = 0, 1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthQuadruple {
    #[serde(rename = "D")]
    pub degrees: Vec<u64>,
    #[serde(rename = "S")]
    pub orders: Vec<u64>,
    #[serde(rename = "H")]
    pub heights: Vec<f64>,
    #[serde(rename = "V")]
    pub decays: Vec<f64>,
}

impl GrowthQuadruple {
    pub fn new(degrees: Vec<u64>, orders: Vec<u64>, heights: Vec<f64>, decays: Vec<f64>) -> Result<Self> {
        let q = Self { degrees, orders, heights, decays };
        q.validate()?;
        Ok(q)
    }

    /// Builds a quadruple from functions of `k = 1..=len`.
    pub fn from_fn(
        len: usize,
        d: impl Fn(f64) -> f64,
        s: impl Fn(f64) -> f64,
        h: impl Fn(f64) -> f64,
        v: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let ks = (1..=len).map(|k| k as f64);
        Self::new(
            ks.clone().map(|k| d(k).round() as u64).collect(),
            ks.clone().map(|k| s(k).round() as u64).collect(),
            ks.clone().map(&h).collect(),
            ks.map(&v).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.degrees.len();
        if n < MIN_SAMPLES {
            return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: n });
        }
        for len in [self.orders.len(), self.heights.len(), self.decays.len()] {
            if len != n {
                return Err(Error::InvalidInstance(format!("sequence lengths differ: {n} vs {len}")));
            }
        }
        for k in 0..n {
            if self.degrees[k] == 0 || self.orders[k] == 0 {
                return Err(Error::NonPositive(k));
            }
            if !(self.heights[k] > 0.0 && self.heights[k].is_finite() && self.decays[k] > 0.0 && self.decays[k].is_finite()) {
                return Err(Error::NonPositive(k));
            }
            if self.orders[k] > self.degrees[k] {
                return Err(Error::InvalidInstance(format!("S_{k} = {} exceeds D_{k} = {}", self.orders[k], self.degrees[k])));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn d(&self, k: usize) -> f64 {
        self.degrees[k] as f64
    }

    pub fn s(&self, k: usize) -> f64 {
        self.orders[k] as f64
    }

    pub fn h(&self, k: usize) -> f64 {
        self.heights[k]
    }

    pub fn v(&self, k: usize) -> f64 {
        self.decays[k]
    }
}

/// Outcome of the regular-growth conditions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularityReport {
    pub holds: bool,
    /// First index from which `S_k <= D_k / 3` holds for the rest of the prefix.
    pub start: Option<usize>,
    pub n_d_over_s: Option<GrowthEstimate>,
    pub n_h_over_d: Option<GrowthEstimate>,
    /// `min H_k / D_k` over the evaluated range.
    pub witnessed_c: f64,
    pub reasons: Vec<String>,
}

/// Ratio by which `D/S` and `H/S` must increase across the evaluated range to count as unbounded.
pub const UNBOUNDED_FACTOR: f64 = 2.0;

/// Checks regular polynomial growth on the prefix.
///
/// The conditions are evaluated from the first index after which `S_k <= D_k/3` always holds,
/// which must lie in the first half of the prefix.
pub fn check_regular_growth(q: &GrowthQuadruple) -> Result<RegularityReport> {
    q.validate()?;
    let n = q.len();
    let mut reasons = Vec::new();
    let start = (0..n).find(|&k0| (k0..n).all(|k| 3 * q.orders[k] <= q.degrees[k])).filter(|&k0| k0 <= n / 2);
    let Some(k0) = start else {
        reasons.push("S_k <= D_k/3 fails on the second half of the prefix".into());
        return Ok(RegularityReport { holds: false, start: None, n_d_over_s: None, n_h_over_d: None, witnessed_c: 0.0, reasons });
    };
    let range = k0..n;
    let ds: Vec<f64> = range.clone().map(|k| q.d(k) / q.s(k)).collect();
    let hs: Vec<f64> = range.clone().map(|k| q.h(k) / q.s(k)).collect();
    let hd: Vec<f64> = range.clone().map(|k| q.h(k) / q.d(k)).collect();
    for (name, seq) in [("D/S", &ds), ("H/S", &hs)] {
        if !seq.windows(2).all(|w| w[1] > w[0]) {
            reasons.push(format!("{name} is not strictly increasing"));
        }
        if seq.last().unwrap() / seq[0] <= UNBOUNDED_FACTOR {
            reasons.push(format!("{name} grows by less than {UNBOUNDED_FACTOR}x"));
        }
    }
    let full = |f: &dyn Fn(usize) -> f64| -> Vec<f64> { (0..n).map(f).collect() };
    let n_ds = growth_exponent(&full(&|k| q.d(k) / q.s(k))).ok();
    let n_hd = growth_exponent(&full(&|k| q.h(k) / q.d(k))).ok();
    match n_ds {
        Some(e) if e.exponent > 2.0 * e.spread => {}
        _ => reasons.push("growth exponent of D/S is not positive".into()),
    }
    match n_hd {
        Some(e) if e.exponent >= -2.0 * e.spread => {}
        _ => reasons.push("H/D decays, so no c > 0 bounds it below".into()),
    }
    let witnessed_c = hd.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(RegularityReport {
        holds: reasons.is_empty(),
        start,
        n_d_over_s: n_ds,
        n_h_over_d: n_hd,
        witnessed_c,
        reasons,
    })
}

/// Values of `S_k^s V_k / (D_k^s (D_k + H_k))` and the finite-prefix divergence proxy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitDiagnostics {
    pub values: Vec<f64>,
    /// Tail (second half) is non-decreasing.
    pub monotone_tail: bool,
    /// Last value over first value.
    pub growth: f64,
    pub factor: f64,
    pub diverges: bool,
}

pub fn criterion_limit(q: &GrowthQuadruple, s: u32, factor: f64) -> LimitDiagnostics {
    let values: Vec<f64> = (0..q.len())
        .map(|k| (q.s(k) / q.d(k)).powi(s as i32) * q.v(k) / (q.d(k) + q.h(k)))
        .collect();
    let tail = &values[values.len() / 2..];
    let monotone_tail = tail.windows(2).all(|w| w[1] >= w[0]);
    let growth = values.last().copied().unwrap_or(0.0) / values.first().copied().unwrap_or(1.0);
    LimitDiagnostics { diverges: monotone_tail && growth > factor, values, monotone_tail, growth, factor }
}

/// Constants entering the window `tau D / 2 <= D_k / S_k < tau D`, `tau = min(c1, b / (10 + d))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowConstants {
    pub c1: f64,
    pub b: f64,
    pub d: f64,
    pub n: u32,
}

impl WindowConstants {
    pub fn tau(&self) -> f64 {
        self.c1.min(self.b / (10.0 + self.d))
    }
}

/// Index in the window and the induced inequalities for `H = G(F^{-1}(D))`, where
/// `F(k) = D_k / S_k` and `G(k) = H_k / D_k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowReport {
    pub k: usize,
    pub tau: f64,
    pub lower: f64,
    pub upper: f64,
    pub ratio: f64,
    /// `H(D)`, or `None` when `F` never reaches `D` on the prefix.
    pub h_of_d: Option<f64>,
    /// `tau H / 2 <= H_k / S_k < tau H`.
    pub height_window: Option<bool>,
    /// `tau (H + D) / 2 <= (H_k + D_k) / S_k < tau (H + D) <= 2 tau H`.
    pub sum_window: Option<bool>,
}

pub fn regularity_window(q: &GrowthQuadruple, d_value: f64, c: &WindowConstants) -> Result<WindowReport> {
    let tau = c.tau();
    if !(tau > 0.0) {
        return Err(Error::Config("window constants must be positive".into()));
    }
    let (lower, upper) = (tau * d_value / 2.0, tau * d_value);
    let k = (0..q.len())
        .find(|&k| {
            let r = q.d(k) / q.s(k);
            lower <= r && r < upper
        })
        .ok_or_else(|| Error::NoWindow(format!("no D_k/S_k in [{lower}, {upper})")))?;
    let ratio = q.d(k) / q.s(k);
    let h_of_d = (0..q.len()).find(|&j| q.d(j) / q.s(j) >= d_value).map(|j| q.h(j) / q.d(j));
    let height_window = h_of_d.map(|h| {
        let v = q.h(k) / q.s(k);
        tau * h / 2.0 <= v && v < tau * h
    });
    let sum_window = h_of_d.map(|h| {
        let v = (q.h(k) + q.d(k)) / q.s(k);
        tau * (h + d_value) / 2.0 <= v && v < tau * (h + d_value) && tau * (h + d_value) <= 2.0 * tau * h
    });
    Ok(WindowReport { k, tau, lower, upper, ratio, h_of_d, height_window, sum_window })
}
