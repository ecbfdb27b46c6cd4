//! Calibrated constants and run configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::DEFAULT_PRECISION;

/// Environment variable naming a configuration file that overrides the shipped one.
pub const CONFIG_ENV: &str = "DIOPHANT_CONFIG";

const SHIPPED: &str = include_str!("../data/calibration.json");

/// Empirically calibrated constants used by the inequality checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    /// Upper slack per degree in the product-norm bound.
    pub product_upper: f64,
    /// Lower slack per `log(1 + D D')` in the product-norm bound.
    pub product_lower: f64,
    /// Liouville constant `d`.
    pub liouville: f64,
    /// Drift `c` allowed per `S * log deg f` between two charts at the same point.
    pub chart_change: f64,
    /// Drift `c` allowed per `(S + D) log(S D)` when the denominator section changes.
    pub denominator_change: f64,
    /// Slack `c` in the bound on `log |P|` per degree of the variety.
    pub jacobian_norm: f64,
    /// Slack `c` in the norm bound for derivative polynomials.
    pub derivation_norm: f64,
    /// Slack `c` of the minimal-component selection, per `log deg Z / a`.
    pub component_slack: f64,
    /// Slack `c` of tangent-direction restriction, per `deg Z log deg Z`.
    pub tangent_restriction: f64,
    /// `c_bar`: subspaces are kept at distance at least `exp(-c_bar) / deg X` from the variety.
    pub avoid_distance: f64,
    /// `c_tilde`: subspace heights are bounded by `c_tilde * log deg X`.
    pub avoid_height: f64,
}

impl Calibration {
    /// Constants shipped with the library.
    pub fn shipped() -> Self {
        serde_json::from_str(SHIPPED).expect("shipped calibration is valid")
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("product_upper", self.product_upper),
            ("product_lower", self.product_lower),
            ("liouville", self.liouville),
            ("chart_change", self.chart_change),
            ("denominator_change", self.denominator_change),
            ("jacobian_norm", self.jacobian_norm),
            ("derivation_norm", self.derivation_norm),
            ("component_slack", self.component_slack),
            ("tangent_restriction", self.tangent_restriction),
            ("avoid_distance", self.avoid_distance),
            ("avoid_height", self.avoid_height),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("calibration constant {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Self::shipped()
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub seed: u64,
    /// Finite-prefix divergence proxy: last value must exceed this multiple of the first.
    pub divergence_factor: f64,
    /// Points drawn in the near-zero sampling checks.
    pub near_samples: usize,
    /// Use `+V/S` instead of `-V/S` as the near-ball radius exponent.
    pub flip_ball_sign: bool,
    pub calibration: Calibration,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision_bits: DEFAULT_PRECISION,
            seed: 0,
            divergence_factor: 1e3,
            near_samples: 10_000,
            flip_ball_sign: false,
            calibration: Calibration::shipped(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::Config(format!("precision must be at least 64 bits, got {}", self.precision_bits)));
        }
        if !(self.divergence_factor > 1.0) {
            return Err(Error::Config("divergence factor must exceed 1".into()));
        }
        self.calibration.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path`, or the file named by `DIOPHANT_CONFIG`, or falls back to defaults.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let env = std::env::var_os(CONFIG_ENV);
        let chosen = env.as_deref().map(Path::new).or(path);
        match chosen {
            Some(p) => Self::from_json(&std::fs::read_to_string(p)?),
            None => Ok(Self::default()),
        }
    }
}
