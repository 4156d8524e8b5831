//! Spectral splitting of a non-normal hyperbolic matrix and a shadow run on it.

use linshadow::matrix_lab::{is_hyperbolic_matrix, CVector, MatrixOp, DEFAULT_BAND};
use linshadow::shadowing::{generate_pseudotrajectory, matrix_splitting, shadow};
use num_complex::Complex64;

fn main() -> linshadow::Result<()> {
    let op = MatrixOp::from_real_rows(&[vec![0.5, 3.0, 0.0], vec![0.0, 2.0, 1.0], vec![0.0, 0.0, -1.5]])?;
    println!("eigenvalues {:?}", op.eigenvalues());
    println!("normal {}, hyperbolic {:?}", op.is_normal(), is_hyperbolic_matrix(&op, DEFAULT_BAND).value);

    let s = matrix_splitting(&op)?;
    println!("splitting {:?}", s.kind);
    println!("beta = {:.3}, C = {:.3}, t = {:.3}, K = {:.3}", s.beta, s.c, s.t, s.sup_constant());

    let mut x0 = CVector::zeros(3);
    x0[0] = Complex64::new(1.0, 0.0);
    let pt = generate_pseudotrajectory(&op, &x0, 0.01, (-20, 20), 1)?;
    let r = shadow(&op, &s, &pt, 1e-9)?;
    println!("sup |y| = {:.5}, sup error = {:.5}, certified {}", r.sup_correction(), r.sup_error(), r.certified);
    Ok(())
}
