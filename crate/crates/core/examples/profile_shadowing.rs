//! Decaying and p-summable defects give corrections with the same profile.

use linshadow::sequence_space::{BiVector, ShiftOperator, SpaceSpec, WeightSequence};
use linshadow::shadowing::{generate_with_rule, shadow_profile, shift_splitting, DefectProfile, DefectRule};

fn main() -> linshadow::Result<()> {
    let op = ShiftOperator::forward(WeightSequence::theorem_d(2.0)?, SpaceSpec::l2());
    let s = shift_splitting(&op)?;
    let rule = DefectRule { amplitude: 0.05, decay_exponent: 1.0 };
    let pt = generate_with_rule(&op, &BiVector::basis(0), &rule, (-200, 200), 3)?;
    for profile in [DefectProfile::Decaying, DefectProfile::PSummable { p: 2.0 }] {
        let (r, cert) = shadow_profile(&op, &s, &rule, profile, &pt, 1e-9)?;
        println!("{profile:?}: sup error {:.5}, passed {}", r.sup_error(), cert.passed());
        println!("  {cert:?}");
    }
    Ok(())
}
