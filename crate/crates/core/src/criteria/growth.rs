use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shortest prefix accepted by the estimators.
pub const MIN_SAMPLES: usize = 16;

/// Geometric windows `[N/2^(j+1), N/2^j]` used by the estimator.
const WINDOWS: usize = 5;

/// Estimated growth exponent `n_f = lim k (f(k+1) - f(k)) / f(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub exponent: f64,
    /// Uncertainty: the larger of the extrapolation step and the disagreement between two
    /// extrapolations from overlapping window triples.
    pub spread: f64,
}

fn validate(samples: &[f64]) -> Result<()> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: samples.len() });
    }
    if let Some(i) = samples.iter().position(|&v| !(v.is_finite() && v > 0.0)) {
        return Err(Error::NonPositive(i));
    }
    Ok(())
}

/// Aitken extrapolation of `newest, middle, oldest`; falls back to `newest` when the
/// differences are not geometric.
fn aitken(newest: f64, middle: f64, oldest: f64) -> f64 {
    let (d1, d2) = (newest - middle, middle - oldest);
    let den = d1 - d2;
    if d1 * d2 <= 0.0 || den.abs() <= 1e-12 * (1.0 + newest.abs()) {
        return newest;
    }
    newest - d1 * d1 / den
}

/// Estimates the growth exponent of `f(1), f(2), ...`.
///
/// The log-log secant slope is taken between means over the geometric windows
/// `[N/2^(j+1), N/2^j]`. A sequence `k^n (c + d k^-g)` gives slopes `n + C 2^(j g)`, so Aitken's
/// extrapolation over three consecutive windows removes the leading correction whatever `g` is.
pub fn growth_exponent(samples: &[f64]) -> Result<GrowthEstimate> {
    validate(samples)?;
    let n = samples.len();
    let window = |j: usize| ((n >> (j + 1)).max(1), n >> j);
    let means: Vec<(f64, f64)> = (0..WINDOWS)
        .map(|j| {
            let (lo, hi) = window(j);
            let len = (hi - lo + 1) as f64;
            let log_f = (lo..=hi).map(|k| samples[k - 1].ln()).sum::<f64>() / len;
            let log_k = (lo..=hi).map(|k| (k as f64).ln()).sum::<f64>() / len;
            (log_f, log_k)
        })
        .collect();
    let slopes: Vec<f64> = means.windows(2).map(|w| (w[0].0 - w[1].0) / (w[0].1 - w[1].1)).collect();

    // A step sequence such as a generalized inverse repeats values; its window means are off by
    // up to the largest relative jump, and extrapolating would amplify that error.
    let (lo, hi) = (window(WINDOWS - 2).0, n);
    if (lo..hi).any(|k| samples[k] == samples[k - 1]) {
        let jump = |j: usize| {
            let (lo, hi) = window(j);
            (lo..hi.min(n - 1)).map(|k| (samples[k] / samples[k - 1]).ln().abs()).fold(0.0, f64::max)
        };
        let rounding = (jump(0) + jump(1)) / (means[0].1 - means[1].1);
        let exponent = slopes[0];
        let spread = (exponent - slopes[1]).abs().max(rounding).max(1e-9 * (1.0 + exponent.abs()));
        return Ok(GrowthEstimate { exponent, spread });
    }

    let exponent = aitken(slopes[0], slopes[1], slopes[2]);
    let previous = aitken(slopes[1], slopes[2], slopes[3]);
    let spread = (exponent - slopes[0]).abs().max((exponent - previous).abs()).max(1e-9 * (1.0 + exponent.abs()));
    Ok(GrowthEstimate { exponent, spread })
}

/// `f^{-1}(n) = inf { k >= 1 : f(k) >= n }` for `n = 1..=len`, searching `k` up to `max_k`.
pub fn inverse_sequence(f: &dyn Fn(f64) -> f64, len: usize, max_k: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(len);
    let mut k = 1usize;
    for n in 1..=len {
        while f(k as f64) < n as f64 {
            k += 1;
            if k > max_k {
                return Err(Error::TooFewSamples { needed: k, got: max_k });
            }
        }
        out.push(k as f64);
    }
    Ok(out)
}

/// One closure rule and whether it holds within the estimator spreads.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosureCheck {
    pub rule: String,
    pub estimated: f64,
    pub predicted: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Closure rules for a pair of growth functions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CalculusReport {
    pub n_f: GrowthEstimate,
    pub n_g: GrowthEstimate,
    pub checks: Vec<ClosureCheck>,
    pub holds: bool,
}

fn sample(f: &dyn Fn(f64) -> f64, len: usize) -> Vec<f64> {
    (1..=len).map(|k| f(k as f64)).collect()
}

/// Verifies the sum, product, quotient, composition and inverse rules, the doubling bound
/// `f(k + n) <= 2 f(k)` on the tail, and order consistency, for `f` and `g` sampled on `1..=len`.
///
/// Each rule holds if the estimated exponent lies within twice the sum of the spreads involved.
pub fn check_growth_calculus(f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64, len: usize) -> Result<CalculusReport> {
    let fs = sample(f, len);
    let gs = sample(g, len);
    let n_f = growth_exponent(&fs)?;
    let n_g = growth_exponent(&gs)?;
    let mut checks = Vec::new();
    let mut push = |rule: &str, est: GrowthEstimate, predicted: f64, spread: f64| {
        let tolerance = 2.0 * (est.spread + spread);
        checks.push(ClosureCheck {
            rule: rule.into(),
            estimated: est.exponent,
            predicted,
            tolerance,
            holds: (est.exponent - predicted).abs() <= tolerance,
        });
    };
    let sum: Vec<f64> = fs.iter().zip(&gs).map(|(a, b)| a + b).collect();
    push("sum", growth_exponent(&sum)?, n_f.exponent.max(n_g.exponent), n_f.spread + n_g.spread);
    let prod: Vec<f64> = fs.iter().zip(&gs).map(|(a, b)| a * b).collect();
    push("product", growth_exponent(&prod)?, n_f.exponent + n_g.exponent, n_f.spread + n_g.spread);
    let quot: Vec<f64> = fs.iter().map(|a| 1.0 / a).collect();
    push("quotient", growth_exponent(&quot)?, -n_f.exponent, n_f.spread);
    let comp: Vec<f64> = gs.iter().map(|&b| f(b)).collect();
    push(
        "composition",
        growth_exponent(&comp)?,
        n_f.exponent * n_g.exponent,
        n_f.spread * n_g.exponent.abs() + n_g.spread * n_f.exponent.abs(),
    );
    if n_f.exponent > 2.0 * n_f.spread {
        let inv = inverse_sequence(f, len, len.saturating_mul(len).max(1 << 20))?;
        let predicted = 1.0 / n_f.exponent;
        push("inverse", growth_exponent(&inv)?, predicted, n_f.spread * predicted * predicted);
    }
    let tail = len / 2;
    let doubling = (tail..len - 1).all(|k| fs[k + 1] <= 2.0 * fs[k]);
    checks.push(ClosureCheck {
        rule: "doubling".into(),
        estimated: if doubling { 1.0 } else { 0.0 },
        predicted: 1.0,
        tolerance: 0.0,
        holds: doubling,
    });
    // Dominance counts as eventual only if it holds on the tail and the gap is not closing.
    let gap = |k: usize| (fs[k] / gs[k]).ln();
    let f_dominates = (tail..len).all(|k| fs[k] >= gs[k]) && gap(len - 1) >= gap(tail);
    let g_dominates = (tail..len).all(|k| gs[k] >= fs[k]) && gap(len - 1) <= gap(tail);
    let tol = 2.0 * (n_f.spread + n_g.spread);
    let ordered = (!f_dominates || n_f.exponent >= n_g.exponent - tol) && (!g_dominates || n_g.exponent >= n_f.exponent - tol);
    checks.push(ClosureCheck {
        rule: "order".into(),
        estimated: n_f.exponent - n_g.exponent,
        predicted: 0.0,
        tolerance: tol,
        holds: ordered,
    });
    let holds = checks.iter().all(|c| c.holds);
    Ok(CalculusReport { n_f, n_g, checks, holds })
}
