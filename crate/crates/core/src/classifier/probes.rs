use serde::Serialize;

use super::config::ClassifierConfig;
use super::expansivity::require_invertible_bilateral;
use super::search::and3;
use super::tails::{tail_summary, Cmp};
use super::verdict::Provenance;
use crate::error::Result;
use crate::magnitude::Magnitude;
use crate::sequence_space::{orbit_norms, window_product, BiVector, ShiftOperator, WeightSequence};

/// Operators whose forward orbit norms can be listed.
pub trait ForwardOrbit {
    type Vector;

    /// `||T^n x||` for `n = 0..=n_max`.
    fn forward_orbit_norms(&self, x: &Self::Vector, n_max: u64) -> Result<Vec<Magnitude>>;
}

impl ForwardOrbit for ShiftOperator {
    type Vector = BiVector;

    fn forward_orbit_norms(&self, x: &BiVector, n_max: u64) -> Result<Vec<Magnitude>> {
        Ok(orbit_norms(&self.weights, x, self.space, self.direction, 0, n_max as i64)?
            .into_iter()
            .map(|(_, m)| m)
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrregularWitness {
    /// Position in the candidate list.
    pub candidate: usize,
    pub n_low: u64,
    pub log_low: f64,
    pub n_high: u64,
    pub log_high: f64,
}

/// First candidate whose orbit both dips below the floor and climbs above
/// the ceiling within the horizon.
pub fn irregular_vector_probe<T: ForwardOrbit>(
    op: &T,
    candidates: &[T::Vector],
    cfg: &ClassifierConfig,
) -> Result<Option<IrregularWitness>> {
    for (i, x) in candidates.iter().enumerate() {
        let norms = op.forward_orbit_norms(x, cfg.horizon)?;
        if norms.iter().all(|m| m.is_zero) {
            continue;
        }
        let low = norms.iter().enumerate().find(|(_, m)| m.at_most(cfg.irregular_floor));
        let high = norms.iter().enumerate().find(|(_, m)| m.at_least(cfg.irregular_ceiling));
        if let (Some((nl, ml)), Some((nh, mh))) = (low, high) {
            return Ok(Some(IrregularWitness {
                candidate: i,
                n_low: nl as u64,
                log_low: ml.ln(),
                n_high: nh as u64,
                log_high: mh.ln(),
            }));
        }
    }
    Ok(None)
}

/// Growth of `n F_w^n e_0` over the integers.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Ne0Growth {
    Bounded { sup: f64, provenance: Provenance },
    /// `n` is where `|n| ||F^n e_0||` peaks within the horizon.
    Unbounded { n: i64, log_value: f64, provenance: Provenance },
    Undetermined { n: i64, log_value: f64, horizon: u64 },
}

fn ne0_log(w: &WeightSequence, n: i64) -> f64 {
    let m = n.unsigned_abs();
    let norm = if n >= 0 { window_product(w, 0, m).ln() } else { -window_product(w, n, m).ln() };
    (m as f64).ln() + norm
}

pub fn ne0_growth_probe(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<Ne0Growth> {
    require_invertible_bilateral(w)?;
    let h = cfg.horizon as i64;
    let (n, log_value) = (-h..=h)
        .filter(|&n| n != 0)
        .map(|n| (n, ne0_log(w, n)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    if !w.is_periodic() {
        return Ok(if log_value >= cfg.irregular_ceiling.ln() {
            Ne0Growth::Unbounded { n, log_value, provenance: Provenance::Witnessed }
        } else {
            Ne0Growth::Undetermined { n, log_value, horizon: cfg.horizon }
        });
    }
    let t = tail_summary(w)?;
    let tol = cfg.gm_tolerance;
    // n r^n stays bounded only under strict geometric decay on both sides
    let bounded = and3(t.right_vs_one(tol).below(), t.left_vs_one(tol).and_then(Cmp::above));
    Ok(match bounded {
        Some(true) => Ne0Growth::Bounded { sup: log_value.exp(), provenance: Provenance::Exact },
        Some(false) => Ne0Growth::Unbounded { n, log_value, provenance: Provenance::Exact },
        None => Ne0Growth::Undetermined { n, log_value, horizon: cfg.horizon },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence_space::{Direction, SpaceSpec};

    #[test]
    fn irregular_vector_for_doubling_blocks() {
        let db = WeightSequence::doubling_blocks(2.0).unwrap();
        let op = ShiftOperator::new(db, Direction::Backward, SpaceSpec::l2());
        let cands = vec![BiVector::zero(), BiVector::basis(0)];
        let wit = irregular_vector_probe(&op, &cands, &ClassifierConfig::default()).unwrap().unwrap();
        assert_eq!(wit.candidate, 1);
        assert!(wit.log_low <= -16.0 * 2f64.ln() && wit.log_high >= 16.0 * 2f64.ln());
    }

    #[test]
    fn no_irregular_vector_for_uniformly_expansive_pair() {
        let w = WeightSequence::uniform_expansive_pair(0.5, 2.0).unwrap();
        let op = ShiftOperator::forward(w, SpaceSpec::l2());
        let cands: Vec<BiVector> = (-8..=8).map(BiVector::basis).collect();
        assert_eq!(irregular_vector_probe(&op, &cands, &ClassifierConfig::default()).unwrap(), None);
        assert_eq!(irregular_vector_probe(&op, &[BiVector::zero()], &ClassifierConfig::default()).unwrap(), None);
    }

    #[test]
    fn ne0_examples() {
        let cfg = ClassifierConfig::default();
        let td = ne0_growth_probe(&WeightSequence::theorem_d(2.0).unwrap(), &cfg).unwrap();
        assert!(matches!(td, Ne0Growth::Bounded { sup, .. } if (sup - 0.5).abs() < 1e-12));
        let two = ne0_growth_probe(&WeightSequence::constant(2.0).unwrap(), &cfg).unwrap();
        assert!(matches!(two, Ne0Growth::Unbounded { n: 200, .. }));
        let one = ne0_growth_probe(&WeightSequence::constant(1.0).unwrap(), &cfg).unwrap();
        assert!(matches!(one, Ne0Growth::Unbounded { provenance: Provenance::Exact, .. }));
    }
}
