use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knobs shared by every classifier and probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    /// Largest exponent explored by searches.
    pub horizon: u64,
    /// Expansivity constant `c > 1`.
    pub threshold_c: f64,
    /// Dead band around a tail mean of 1.
    pub gm_tolerance: f64,
    /// Target for the cyclicity max-terms and ratios.
    pub eta: f64,
    pub q_max: u64,
    /// Canonical vectors `e_j` with `|j| <= fhc_bound` are tested for decay.
    pub fhc_bound: i64,
    pub burn_in: u64,
    pub irregular_floor: f64,
    pub irregular_ceiling: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            horizon: 200,
            threshold_c: 2.0,
            gm_tolerance: 1e-9,
            eta: 1.0 / 128.0,
            q_max: 3,
            fhc_bound: 3,
            burn_in: 20,
            irregular_floor: 2f64.powi(-16),
            irregular_ceiling: 2f64.powi(16),
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.horizon < 1 {
            return bad("horizon must be at least 1".into());
        }
        if !(self.threshold_c > 1.0 && self.threshold_c.is_finite()) {
            return bad(format!("threshold_c = {} must exceed 1", self.threshold_c));
        }
        if !(self.gm_tolerance > 0.0) {
            return bad("gm_tolerance must be positive".into());
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad("eta must lie in (0, 1)".into());
        }
        if self.q_max < 1 {
            return bad("q_max must be at least 1".into());
        }
        if self.burn_in >= self.horizon {
            return bad("burn_in must be below the horizon".into());
        }
        if !(self.irregular_floor > 0.0 && self.irregular_floor < 1.0 && self.irregular_ceiling > 1.0) {
            return bad("irregular floor/ceiling must straddle 1".into());
        }
        Ok(())
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }
}
