use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::Magnitude;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Lp,
    C0,
}

/// The sequence space a shift acts on: `l_p` for some `p >= 1`, or `c_0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

#[derive(Deserialize)]
struct RawSpace {
    kind: SpaceKind,
    #[serde(default)]
    p: Option<f64>,
}

impl TryFrom<RawSpace> for SpaceSpec {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        match raw.kind {
            SpaceKind::C0 => Ok(SpaceSpec::c0()),
            SpaceKind::Lp => SpaceSpec::lp(
                raw.p
                    .ok_or_else(|| Error::InvalidArgument("lp space needs an exponent p".into()))?,
            ),
        }
    }
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("exponent p = {p} must be finite and >= 1")));
        }
        Ok(SpaceSpec { kind: SpaceKind::Lp, p: Some(p) })
    }

    pub fn l2() -> Self {
        SpaceSpec { kind: SpaceKind::Lp, p: Some(2.0) }
    }

    pub fn c0() -> Self {
        SpaceSpec { kind: SpaceKind::C0, p: None }
    }

    /// `Some(p)` for `l_p`, `None` for the sup norm.
    pub fn exponent(&self) -> Option<f64> {
        match self.kind {
            SpaceKind::Lp => self.p,
            SpaceKind::C0 => None,
        }
    }

    /// Norm of a finite family of coordinate magnitudes.
    pub fn norm_of<I: IntoIterator<Item = f64>>(&self, abs_values: I) -> f64 {
        match self.exponent() {
            None => abs_values.into_iter().fold(0.0, f64::max),
            Some(p) if p == 1.0 => abs_values.into_iter().sum(),
            Some(p) if p == 2.0 => {
                // scaled to dodge overflow in the squares
                let v: Vec<f64> = abs_values.into_iter().collect();
                let m = v.iter().cloned().fold(0.0, f64::max);
                if m == 0.0 || !m.is_finite() {
                    return m;
                }
                m * v.iter().map(|a| (a / m) * (a / m)).sum::<f64>().sqrt()
            }
            Some(p) => {
                let v: Vec<f64> = abs_values.into_iter().collect();
                let m = v.iter().cloned().fold(0.0, f64::max);
                if m == 0.0 || !m.is_finite() {
                    return m;
                }
                m * v.iter().map(|a| (a / m).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }

    /// Norm of coordinates given as log-domain magnitudes, by log-sum-exp.
    pub fn log_norm_of<I: IntoIterator<Item = Magnitude>>(&self, coords: I) -> Magnitude {
        let logs: Vec<f64> = coords.into_iter().filter(|m| !m.is_zero).map(|m| m.log_abs).collect();
        let Some(top) = logs.iter().cloned().reduce(f64::max) else {
            return Magnitude::ZERO;
        };
        match self.exponent() {
            None => Magnitude::from_log(top),
            Some(p) => {
                let s: f64 = logs.iter().map(|l| ((l - top) * p).exp()).sum();
                Magnitude::from_log(top + s.ln() / p)
            }
        }
    }
}

impl std::fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.exponent() {
            Some(p) => write!(f, "l_{p}"),
            None => write!(f, "c_0"),
        }
    }
}
