use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::space::SpaceSpec;
use super::vector::BiVector;
use super::weights::{window_product, Support, WeightSequence};
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;

/// `Forward`: `e_k -> w_k e_{k+1}`. `Backward`: `e_k -> w_k e_{k-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

fn check_domain(w: &WeightSequence, x: &BiVector) -> Result<()> {
    if let (Support::Unilateral, Some((lo, _))) = (w.support, x.support()) {
        if lo < 1 {
            return Err(Error::InvalidArgument(format!("unilateral vector has an entry at index {lo} < 1")));
        }
    }
    Ok(())
}

fn require_invertible(w: &WeightSequence) -> Result<()> {
    if w.invertible {
        Ok(())
    } else if w.support == Support::Unilateral {
        Err(Error::NotInvertible("unilateral shifts are never invertible".into()))
    } else {
        Err(Error::NotInvertible(format!("zero weight at {:?}", w.zero_weights)))
    }
}

/// Image of `x` under the weighted shift, or under its inverse.
pub fn apply_shift(w: &WeightSequence, x: &BiVector, direction: Direction, inverse: bool) -> Result<BiVector> {
    check_domain(w, x)?;
    if inverse {
        require_invertible(w)?;
    }
    let out = match (direction, inverse) {
        (Direction::Forward, false) => x.reindex_scaled(1, |k| w.weight(k)),
        (Direction::Forward, true) => x.reindex_scaled(-1, |k| w.weight(k - 1).inv()),
        (Direction::Backward, false) => {
            let y = x.reindex_scaled(-1, |k| w.weight(k));
            if w.support == Support::Unilateral {
                y.drop_below(1)
            } else {
                y
            }
        }
        (Direction::Backward, true) => x.reindex_scaled(1, |k| w.weight(k + 1).inv()),
    };
    Ok(out)
}

/// Where `T^n e_k` lands and with which modulus; `None` when it is annihilated.
///
/// Negative `n` means powers of the inverse; callers check invertibility.
pub fn power_coefficient(w: &WeightSequence, direction: Direction, k: i64, n: i64) -> Option<(i64, Magnitude)> {
    let m = n.unsigned_abs();
    let (target, mag) = match (direction, n >= 0) {
        (Direction::Forward, true) => (k + n, window_product(w, k, m)),
        (Direction::Forward, false) => (k + n, window_product(w, k + n, m).recip()?),
        (Direction::Backward, true) => (k - n, window_product(w, k - n + 1, m)),
        (Direction::Backward, false) => (k - n, window_product(w, k + 1, m).recip()?),
    };
    if target < w.first_index() || mag.is_zero {
        None
    } else {
        Some((target, mag))
    }
}

/// `||T^n x||` for `n` in `n_min..=n_max`, computed without materializing `T^n x`.
pub fn orbit_norms(
    w: &WeightSequence,
    x: &BiVector,
    space: SpaceSpec,
    direction: Direction,
    n_min: i64,
    n_max: i64,
) -> Result<Vec<(i64, Magnitude)>> {
    check_domain(w, x)?;
    if n_min < 0 {
        require_invertible(w)?;
    }
    let coords: Vec<(i64, Magnitude)> = x.iter().map(|(k, c)| (k, Magnitude::of(c))).collect();
    Ok((n_min..=n_max)
        .map(|n| {
            let parts = coords
                .iter()
                .filter_map(|&(k, c)| power_coefficient(w, direction, k, n).map(|(_, m)| m * c));
            (n, space.log_norm_of(parts))
        })
        .collect())
}

/// A weighted shift bound to the space it acts on.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShiftOperator {
    pub weights: WeightSequence,
    #[serde(default)]
    pub direction: Direction,
    pub space: SpaceSpec,
}

impl ShiftOperator {
    pub fn new(weights: WeightSequence, direction: Direction, space: SpaceSpec) -> Self {
        ShiftOperator { weights, direction, space }
    }

    pub fn forward(weights: WeightSequence, space: SpaceSpec) -> Self {
        Self::new(weights, Direction::Forward, space)
    }

    pub fn apply(&self, x: &BiVector) -> Result<BiVector> {
        apply_shift(&self.weights, x, self.direction, false)
    }

    pub fn apply_inverse(&self, x: &BiVector) -> Result<BiVector> {
        apply_shift(&self.weights, x, self.direction, true)
    }

    pub fn norm(&self, x: &BiVector) -> f64 {
        x.norm(self.space)
    }

    pub fn is_invertible(&self) -> bool {
        self.weights.invertible
    }

    /// `T^n x` for any sign of `n`.
    pub fn power(&self, x: &BiVector, n: i64) -> Result<BiVector> {
        let mut y = x.clone();
        for _ in 0..n.unsigned_abs() {
            y = if n >= 0 { self.apply(&y)? } else { self.apply_inverse(&y)? };
        }
        Ok(y)
    }
}

/// Weight `w_k` rotated by `lambda`; convenience for phase-invariance checks.
pub fn twisted(w: &WeightSequence, lambda: Complex64) -> Result<WeightSequence> {
    w.scaled(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn basis_images() {
        let w = WeightSequence::theorem_d(2.0).unwrap();
        let e0 = BiVector::basis(0);
        let f = apply_shift(&w, &e0, Direction::Forward, false).unwrap();
        assert_eq!(f, BiVector::from_entries([(1, c(0.5))]));
        let finv = apply_shift(&w, &e0, Direction::Forward, true).unwrap();
        assert_eq!(finv, BiVector::from_entries([(-1, c(0.5))]));
        let b = apply_shift(&w, &e0, Direction::Backward, false).unwrap();
        assert_eq!(b, BiVector::from_entries([(-1, c(0.5))]));
    }

    #[test]
    fn unweighted_shift_moves_indices() {
        let w = WeightSequence::constant(1.0).unwrap();
        let x = BiVector::from_reals(-2, &[1.0, -3.0, 0.5]);
        let y = apply_shift(&w, &x, Direction::Forward, false).unwrap();
        assert_eq!(y, BiVector::from_reals(-1, &[1.0, -3.0, 0.5]));
    }

    #[test]
    fn unilateral_backward_drops_first_coordinate() {
        let w = WeightSequence::unilateral(1, vec![], vec![c(2.0)]).unwrap();
        let x = BiVector::from_reals(1, &[1.0, 1.0]);
        let y = apply_shift(&w, &x, Direction::Backward, false).unwrap();
        assert_eq!(y, BiVector::from_entries([(1, c(2.0))]));
        assert!(apply_shift(&w, &x, Direction::Forward, true).is_err());
        assert!(apply_shift(&w, &BiVector::basis(0), Direction::Forward, false).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let w = WeightSequence::bilateral_real(&[2.0, 0.3], -1, &[1.7, 0.9], &[0.5, 4.0]).unwrap();
        let x = BiVector::from_entries([(-4, Complex64::new(1.0, 2.0)), (0, c(3.0)), (5, c(-1.0))]);
        for dir in [Direction::Forward, Direction::Backward] {
            let y = apply_shift(&w, &x, dir, false).unwrap();
            let back = apply_shift(&w, &y, dir, true).unwrap();
            for (k, v) in x.iter() {
                assert!((back.get(k) - v).norm() <= 4.0 * f64::EPSILON * v.norm());
            }
        }
    }

    #[test]
    fn theorem_d_orbit_norms() {
        let w = WeightSequence::theorem_d(2.0).unwrap();
        let norms = orbit_norms(&w, &BiVector::basis(0), SpaceSpec::l2(), Direction::Forward, -5, 5).unwrap();
        for (n, m) in norms {
            let want = 2f64.powi(-(n.abs() as i32));
            assert!((m.value() - want).abs() < 1e-15 * want.max(1.0), "n={n}");
        }
    }

    #[test]
    fn constant_two_orbit_norms() {
        let w = WeightSequence::constant(2.0).unwrap();
        let norms = orbit_norms(&w, &BiVector::basis(0), SpaceSpec::c0(), Direction::Forward, 0, 4).unwrap();
        let got: Vec<f64> = norms.iter().map(|(_, m)| m.value()).collect();
        for (g, want) in got.iter().zip([1.0, 2.0, 4.0, 8.0, 16.0]) {
            assert!((g - want).abs() < 1e-13);
        }
        let zero = orbit_norms(&w, &BiVector::zero(), SpaceSpec::c0(), Direction::Forward, -3, 3).unwrap();
        assert!(zero.iter().all(|(_, m)| m.is_zero));
    }

    #[test]
    fn long_orbits_stay_in_log_domain() {
        let w = WeightSequence::constant(2.0).unwrap();
        let norms = orbit_norms(&w, &BiVector::basis(0), SpaceSpec::l2(), Direction::Forward, 2000, 2000).unwrap();
        assert!((norms[0].1.ln() - 2000.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn power_coefficient_matches_iteration() {
        let w = WeightSequence::bilateral_real(&[2.0, 0.3], -1, &[1.7, 0.9], &[0.5, 4.0]).unwrap();
        for dir in [Direction::Forward, Direction::Backward] {
            let op = ShiftOperator::new(w.clone(), dir, SpaceSpec::l2());
            for n in -6..=6 {
                let y = op.power(&BiVector::basis(2), n).unwrap();
                let (target, mag) = power_coefficient(&w, dir, 2, n).unwrap();
                assert_eq!(y.support(), Some((target, target)));
                assert!((y.get(target).norm() - mag.value()).abs() < 1e-13 * mag.value());
            }
        }
    }
}
