//! Expansivity and positive shadowing of normal matrices.

use linshadow::matrix_lab::{normal_expansive, MatrixOp, DEFAULT_BAND};
use linshadow::shadowing::{positive_shadowing_decision_normal, DecisionConfig};
use num_complex::Complex64;

fn main() -> linshadow::Result<()> {
    let cases = [
        ("diag(0.5, 2)", vec![Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0)]),
        ("diag(i, 3)", vec![Complex64::new(0.0, 1.0), Complex64::new(3.0, 0.0)]),
        ("diag(2, 3e^{i})", vec![Complex64::new(2.0, 0.0), Complex64::from_polar(3.0, 1.0)]),
    ];
    for (name, eig) in cases {
        let op = MatrixOp::diagonal(&eig)?;
        let e = normal_expansive(&op, DEFAULT_BAND)?;
        let d = positive_shadowing_decision_normal(&op, &DecisionConfig::default())?;
        println!("{name}");
        println!("  expansive {:?}, positively {:?}, uniformly positively {:?}", e.expansive.value, e.positively_expansive.value, e.uniformly_positively_expansive.value);
        println!("  positive shadowing {:?}, backed {}", d.verdict.value, d.backed());
    }
    Ok(())
}
