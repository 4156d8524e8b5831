use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence_space::WeightSequence;

/// Position of a tail mean (or ratio of means) relative to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Above,
    Below,
    /// Exactly 1, decided in rational arithmetic.
    Unit,
    /// Within the tolerance band but not provably 1.
    Ambiguous,
}

impl Cmp {
    fn from_log(log: f64, tol: f64) -> Cmp {
        if (log.exp() - 1.0).abs() <= tol {
            Cmp::Ambiguous
        } else if log > 0.0 {
            Cmp::Above
        } else {
            Cmp::Below
        }
    }

    /// Strictly above 1, or `None` if that is not decidable.
    pub fn above(self) -> Option<bool> {
        match self {
            Cmp::Above => Some(true),
            Cmp::Below | Cmp::Unit => Some(false),
            Cmp::Ambiguous => None,
        }
    }

    pub fn below(self) -> Option<bool> {
        match self {
            Cmp::Below => Some(true),
            Cmp::Above | Cmp::Unit => Some(false),
            Cmp::Ambiguous => None,
        }
    }
}

/// Exact `prod |w|^2` over a period; `None` if a float has no exact rational form.
fn squared_product(period: &[Complex64]) -> Option<BigRational> {
    let mut acc = BigRational::one();
    for w in period {
        let re = BigRational::from_float(w.re)?;
        let im = BigRational::from_float(w.im)?;
        acc *= &re * &re + &im * &im;
    }
    Some(acc)
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Geometric means of the tails and the core range.
#[derive(Clone, Debug, Serialize)]
pub struct TailSummary {
    pub gm_left: Option<f64>,
    pub gm_right: f64,
    pub core_min: Option<f64>,
    pub core_max: Option<f64>,
    pub log_gm_left: Option<f64>,
    pub log_gm_right: f64,
    #[serde(skip)]
    left_sq: Option<(BigRational, usize)>,
    #[serde(skip)]
    right_sq: (BigRational, usize),
}

/// Tail means of a sequence with periodic tails.
///
/// Generator families with a non-periodic tail are rejected; use the
/// horizon-based operations for those.
pub fn tail_summary(w: &WeightSequence) -> Result<TailSummary> {
    if !w.is_periodic() {
        return Err(Error::NotPeriodic(format!("{:?}", w.family)));
    }
    let exact = |p: &[Complex64]| {
        squared_product(p).ok_or_else(|| Error::InvalidWeights("weights must be finite".into())).map(|r| (r, p.len()))
    };
    let right_sq = exact(&w.right_period)?;
    let left_sq = w.left_period.as_deref().map(exact).transpose()?;
    let core: Vec<f64> = w.core.values.iter().map(|c| c.norm()).collect();
    let log_gm_left = w.left_log_gm();
    let log_gm_right = w.right_log_gm();
    Ok(TailSummary {
        gm_left: log_gm_left.map(f64::exp),
        gm_right: log_gm_right.exp(),
        core_min: core.iter().cloned().reduce(f64::min),
        core_max: core.iter().cloned().reduce(f64::max),
        log_gm_left,
        log_gm_right,
        left_sq,
        right_sq,
    })
}

impl TailSummary {
    pub fn right_vs_one(&self, tol: f64) -> Cmp {
        if self.right_sq.0.is_one() {
            Cmp::Unit
        } else {
            Cmp::from_log(self.log_gm_right, tol)
        }
    }

    /// `None` for unilateral sequences.
    pub fn left_vs_one(&self, tol: f64) -> Option<Cmp> {
        let (sq, _) = self.left_sq.as_ref()?;
        Some(if sq.is_one() { Cmp::Unit } else { Cmp::from_log(self.log_gm_left?, tol) })
    }

    /// Position of `gm_left / gm_right` relative to 1.
    pub fn left_vs_right(&self, tol: f64) -> Option<Cmp> {
        let (l, ll) = self.left_sq.as_ref()?;
        let (r, rl) = &self.right_sq;
        // gm_l = gm_r  <=>  l^{rl} = r^{ll}
        if pow(l, *rl) == pow(r, *ll) {
            return Some(Cmp::Unit);
        }
        Some(Cmp::from_log(self.log_gm_left? - self.log_gm_right, tol))
    }

    pub fn max_log_gm(&self) -> f64 {
        self.log_gm_left.map_or(self.log_gm_right, |l| l.max(self.log_gm_right))
    }

    pub fn min_log_gm(&self) -> f64 {
        self.log_gm_left.map_or(self.log_gm_right, |l| l.min(self.log_gm_right))
    }
}
