#![allow(dead_code)]

pub mod oracle;
pub mod suites;

use linshadow::sequence_space::{Direction, ShiftOperator, SpaceSpec, WeightSequence};
use num_complex::Complex64;

/// One named operator in the test registry.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub weights: WeightSequence,
    pub direction: Direction,
    pub space: SpaceSpec,
}

impl Entry {
    fn new(name: &'static str, weights: WeightSequence, direction: Direction) -> Self {
        Entry { name, weights, direction, space: SpaceSpec::l2() }
    }

    pub fn op(&self) -> ShiftOperator {
        ShiftOperator::new(self.weights.clone(), self.direction, self.space)
    }
}

pub fn upesc(alpha: f64, beta: f64) -> WeightSequence {
    // beta up to index 0, alpha from index 1 on
    WeightSequence::bilateral_real(&[beta], 1, &[], &[alpha]).unwrap()
}

/// Shifts covering every branch of the classifiers.
pub fn registry() -> Vec<Entry> {
    use Direction::{Backward, Forward};
    let b = |l: &[f64], s: i64, c: &[f64], r: &[f64]| WeightSequence::bilateral_real(l, s, c, r).unwrap();
    let cx = |re: f64, im: f64| Complex64::new(re, im);
    let mut out = vec![
        Entry::new("theorem_d_2", WeightSequence::theorem_d(2.0).unwrap(), Forward),
        Entry::new("theorem_d_half", WeightSequence::theorem_d(0.5).unwrap(), Forward),
        Entry::new("theorem_d_2_backward", WeightSequence::theorem_d(2.0).unwrap(), Backward),
        Entry::new("doubling_blocks_b", WeightSequence::doubling_blocks(2.0).unwrap(), Backward),
        Entry::new("doubling_blocks_f", WeightSequence::doubling_blocks(2.0).unwrap(), Forward),
        Entry::new("upesc_3_2", upesc(3.0, 2.0), Backward),
        Entry::new("upesc_3_2_forward", upesc(3.0, 2.0), Forward),
        Entry::new("pair_half_2", WeightSequence::uniform_expansive_pair(0.5, 2.0).unwrap(), Forward),
        Entry::new("pair_2_half", WeightSequence::uniform_expansive_pair(2.0, 0.5).unwrap(), Forward),
        Entry::new("pair_3_2", WeightSequence::uniform_expansive_pair(3.0, 2.0).unwrap(), Forward),
        Entry::new("pair_third_b", WeightSequence::uniform_expansive_pair(0.5, 2.0).unwrap(), Backward),
        Entry::new("constant_1", WeightSequence::constant(1.0).unwrap(), Forward),
        Entry::new("constant_2", WeightSequence::constant(2.0).unwrap(), Forward),
        Entry::new("constant_half", WeightSequence::constant(0.5).unwrap(), Forward),
        Entry::new("constant_2_backward", WeightSequence::constant(2.0).unwrap(), Backward),
        Entry::new("mixed_periods", b(&[2.0, 0.25], -1, &[1.0, 5.0, 0.2], &[3.0, 0.5]), Forward),
        Entry::new("mixed_periods_b", b(&[2.0, 0.25], -1, &[1.0, 5.0, 0.2], &[3.0, 0.5]), Backward),
        Entry::new("unit_mean_right", b(&[3.0], 0, &[7.0], &[2.0, 0.5]), Forward),
        Entry::new("long_core", b(&[1.5], -4, &[0.1, 0.1, 0.1, 9.0, 9.0, 0.3, 4.0, 0.25], &[0.8]), Forward),
        Entry::new("zero_weight", b(&[2.0], 0, &[0.0], &[2.0]), Forward),
        Entry::new("zero_weight_left_b", b(&[2.0], -3, &[0.0], &[2.0]), Backward),
        Entry::new("unilateral_2", WeightSequence::unilateral(1, vec![], vec![cx(2.0, 0.0)]).unwrap(), Forward),
        Entry::new(
            "unilateral_core",
            WeightSequence::unilateral(1, vec![cx(0.5, 0.0), cx(0.5, 0.0)], vec![cx(1.5, 0.0)]).unwrap(),
            Forward,
        ),
        Entry::new("unilateral_half", WeightSequence::unilateral(1, vec![], vec![cx(0.5, 0.0)]).unwrap(), Forward),
        Entry::new(
            "complex_twist",
            linshadow::sequence_space::twisted(&WeightSequence::theorem_d(2.0).unwrap(), Complex64::from_polar(1.0, 0.7))
                .unwrap(),
            Forward,
        ),
        Entry::new(
            "complex_periods",
            WeightSequence::bilateral(vec![cx(0.0, 3.0)], 0, vec![cx(1.0, 1.0)], vec![cx(0.3, 0.4), cx(0.0, -5.0)]).unwrap(),
            Forward,
        ),
    ];
    let mut c0 = Entry::new("theorem_d_c0", WeightSequence::theorem_d(2.0).unwrap(), Forward);
    c0.space = SpaceSpec::c0();
    out.push(c0);
    let mut l1 = Entry::new("pair_half_2_l1", WeightSequence::uniform_expansive_pair(0.5, 2.0).unwrap(), Forward);
    l1.space = SpaceSpec::lp(1.0).unwrap();
    out.push(l1);
    out
}

/// Weights `v` with `F_v = B_w^{-1}`: `v_k = 1 / w_{k+1}`.
pub fn inverse_forward(w: &WeightSequence) -> WeightSequence {
    let r = |v: &[Complex64]| v.iter().map(|z| z.inv()).collect::<Vec<_>>();
    WeightSequence::bilateral(
        r(w.left_period.as_ref().unwrap()),
        w.core.start_index - 1,
        r(&w.core.values),
        r(&w.right_period),
    )
    .unwrap()
}
