//! Pseudotrajectories of a Jordan block at 1 that no orbit follows.

use linshadow::matrix_lab::{fd1_counterexample, Fd1Mode, MatrixOp, DEFAULT_BAND};
use num_complex::Complex64;

fn main() -> linshadow::Result<()> {
    let op = MatrixOp::jordan(Complex64::new(1.0, 0.0), 2)?;

    let lp = fd1_counterexample(&op, Fd1Mode::Lp { p: 2.0 }, 10_000, DEFAULT_BAND)?;
    println!("square-summable defects: sum |z|^2 = {:.6} < {:.6}", lp.defect_measure, lp.defect_limit);
    println!("  points with |<u, x>| <= {:.4} miss by at least {:.4} at n = N", lp.divergence.radius.unwrap(), lp.divergence.radius_bound.unwrap());
    println!("  every base point misses by at least {:.4}", lp.divergence.minimax);

    let pos = fd1_counterexample(&op, Fd1Mode::Positive { delta: 0.1 }, 100, DEFAULT_BAND)?;
    println!("constant defects 0.1 over 100 steps: best error {:.4}", pos.divergence.minimax);

    let l1 = fd1_counterexample(&op, Fd1Mode::L1, 1000, DEFAULT_BAND)?;
    println!("summable defects: sum |z| = {:.4}, summed error at least {:.4}", l1.defect_measure, l1.divergence.sum_lower.unwrap());
    Ok(())
}
