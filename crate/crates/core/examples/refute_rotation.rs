//! Lower bounds showing a rotation has no shadowing.

use linshadow::matrix_lab::{MatrixOp, DEFAULT_BAND};
use linshadow::shadowing::refute_shadowing;

fn main() -> linshadow::Result<()> {
    let op = MatrixOp::rotation(0.7)?;
    for n in [50, 100, 200, 400] {
        let r = refute_shadowing(&op, (0, n), DEFAULT_BAND)?;
        println!("N = {n:>3}: sup |z| = {:.3}, every bounded correction has sup |y| >= {:.1}", r.sup_defect, r.lower_bound);
    }
    Ok(())
}
