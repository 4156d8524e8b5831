//! Shadow a random pseudotrajectory of a generalized hyperbolic shift.

use linshadow::sequence_space::{BiVector, ShiftOperator, SpaceSpec, WeightSequence};
use linshadow::shadowing::{generate_pseudotrajectory, shadow, shift_splitting};

fn main() -> linshadow::Result<()> {
    let op = ShiftOperator::forward(WeightSequence::theorem_d(2.0)?, SpaceSpec::l2());
    let s = shift_splitting(&op)?;
    println!("splitting {:?}: C = {}, t = {}, K = {}", s.kind, s.c, s.t, s.sup_constant());

    let pt = generate_pseudotrajectory(&op, &BiVector::basis(0), 0.01, (-50, 50), 7)?;
    let r = shadow(&op, &s, &pt, 1e-9)?;
    println!("delta {:.4}, sup error {:.5}, bound {:.4}, certified {}", pt.delta, r.sup_error(), r.bound_k * pt.delta, r.certified);
    for (n, z, y, e) in r.rows().into_iter().step_by(10) {
        println!("  n = {n:>3}  |z| = {z:.5}  |y| = {y:.5}  error = {e:.5}");
    }
    Ok(())
}
