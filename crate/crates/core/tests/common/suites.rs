//! Invariant suites shared by the property tests and the acceptance run.
//!
//! Each suite drives a deterministic proptest runner for `cases` cases and
//! returns the first failure as text.

use linshadow::classifier::{
    classify_expansive_forward, classify_positively_expansive, classify_uniformly_expansive_forward,
    irregular_vector_probe, ClassifierConfig,
};
use linshadow::matrix_lab::{CVector, MatrixOp};
use linshadow::sequence_space::{twisted, BiVector, Direction, ShiftOperator, SpaceSpec, WeightSequence};
use linshadow::shadowing::{
    generate_pseudotrajectory, generate_with_rule, matrix_splitting, shadow, shadow_profile, shift_splitting,
    DefectProfile, DefectRule, LinearOperator, ProfileCertificate, PseudoTrajectory, Splittable, Splitting,
};
use std::cell::Cell;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};

pub const TOL: f64 = 1e-9;
const DELTA: f64 = 0.01;
const MATRIX_WINDOW: (i64, i64) = (-40, 40);
const SHIFT_WINDOW: (i64, i64) = (-30, 30);

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_global_rejects: 4 * cases.max(256), ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| match e {
        TestError::Fail(why, input) => format!("{why} for {input:?}"),
        TestError::Abort(why) => format!("aborted: {why}"),
    })
}

fn lib<T>(r: linshadow::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

// ---------- generators ----------

fn modulus() -> impl Strategy<Value = f64> {
    prop_oneof![0.15..0.8f64, 1.3..3.0f64]
}

/// Real matrix `S U S^{-1}` with `U` upper triangular and diagonal bounded
/// away from the unit circle, so the eigenvalues are known.
#[derive(Clone, Debug)]
pub struct RealHyperbolic {
    pub diagonal: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl RealHyperbolic {
    pub fn op(&self) -> MatrixOp {
        MatrixOp::from_real_rows(&self.rows).unwrap()
    }
}

pub fn real_hyperbolic(max_dim: usize) -> impl Strategy<Value = RealHyperbolic> {
    (1..=max_dim).prop_flat_map(|d| {
        (
            prop::collection::vec((modulus(), any::<bool>()), d),
            prop::collection::vec(-0.5..0.5f64, d * d),
            prop::collection::vec(-1.0..1.0f64, d * d),
        )
            .prop_map(move |(diag, upper, mix)| {
                let diagonal: Vec<f64> = diag.iter().map(|&(m, neg)| if neg { -m } else { m }).collect();
                let u = DMatrix::from_fn(d, d, |i, j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => diagonal[i],
                    std::cmp::Ordering::Less => upper[i * d + j],
                    std::cmp::Ordering::Greater => 0.0,
                });
                // ||0.2 R|| <= 0.2 d < 1 keeps S invertible
                let s = DMatrix::identity(d, d) + DMatrix::from_fn(d, d, |i, j| 0.2 * mix[i * d + j]);
                let a = &s * u * s.clone().try_inverse().unwrap();
                let rows = (0..d).map(|i| (0..d).map(|j| a[(i, j)]).collect()).collect();
                RealHyperbolic { diagonal, rows }
            })
    })
}

/// Bilateral periodic weights with left and right geometric means pushed
/// to `exp(left_log)` and `exp(right_log)`.
#[derive(Clone, Debug)]
pub struct ShiftCase {
    pub left: Vec<f64>,
    pub core: Vec<f64>,
    pub right: Vec<f64>,
}

impl ShiftCase {
    pub fn weights(&self) -> WeightSequence {
        WeightSequence::bilateral_real(&self.left, -(self.core.len() as i64) / 2, &self.core, &self.right).unwrap()
    }

    pub fn forward(&self) -> ShiftOperator {
        ShiftOperator::forward(self.weights(), SpaceSpec::l2())
    }
}

fn period_with_log_gm(log_gm: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.3..3.0f64, 1..=3).prop_map(move |v| {
        let gm = (v.iter().map(|x| x.ln()).sum::<f64>() / v.len() as f64).exp();
        v.iter().map(|x| x * log_gm.exp() / gm).collect()
    })
}

fn signed_log() -> impl Strategy<Value = f64> {
    prop_oneof![-1.0..-0.2f64, 0.2..1.0f64]
}

/// Arbitrary invertible periodic weights, hyperbolic or not.
pub fn any_shift() -> impl Strategy<Value = ShiftCase> {
    (prop::collection::vec(0.3..3.0f64, 1..=3), prop::collection::vec(0.3..3.0f64, 0..=3), prop::collection::vec(0.3..3.0f64, 1..=3))
        .prop_map(|(left, core, right)| ShiftCase { left, core, right })
}

/// Periodic weights whose tail means avoid 1 on each side.
pub fn banded_shift() -> impl Strategy<Value = ShiftCase> {
    (signed_log(), signed_log()).prop_flat_map(|(l, r)| {
        (period_with_log_gm(l), prop::collection::vec(0.3..3.0f64, 0..=3), period_with_log_gm(r))
            .prop_map(|(left, core, right)| ShiftCase { left, core, right })
    })
}

// ---------- generic checks ----------

fn recompute_residual<O: LinearOperator>(op: &O, y: &[O::Vector], pt: &PseudoTrajectory<O::Vector>) -> linshadow::Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..pt.defects.len() {
        let r = op.sub(&op.sub(&y[i + 1], &op.apply(&y[i])?), &pt.defects[i]);
        worst = worst.max(op.norm(&r));
    }
    Ok(worst)
}

fn check_residuals<O: Splittable>(op: &O, s: &Splitting, pt: &PseudoTrajectory<O::Vector>) -> Result<(), TestCaseError> {
    let r = lib(shadow(op, s, pt, TOL))?;
    let scale = 1.0 + r.sup_correction();
    prop_assert!(r.residual_max <= 10.0 * TOL * scale, "reported residual {}", r.residual_max);
    let again = lib(recompute_residual(op, &r.corrections, pt))?;
    prop_assert!(again <= 10.0 * TOL * scale, "recomputed residual {again}");
    Ok(())
}

fn check_bound<O: Splittable>(op: &O, s: &Splitting, pt: &PseudoTrajectory<O::Vector>) -> Result<(), TestCaseError> {
    let r = lib(shadow(op, s, pt, TOL))?;
    let k = 2.0 * s.beta * s.c / (1.0 - s.t);
    prop_assert!(r.sup_correction() <= k * pt.delta + 10.0 * TOL, "sup ||y|| {} > K delta {}", r.sup_correction(), k * pt.delta);
    prop_assert!(r.certified, "not certified: error {} against K delta {}", r.sup_error(), k * pt.delta);
    Ok(())
}

fn check_linearity<O: Splittable>(
    op: &O,
    s: &Splitting,
    pt: &PseudoTrajectory<O::Vector>,
    factor: f64,
) -> Result<(), TestCaseError> {
    let base = lib(shadow(op, s, pt, TOL))?;
    let scaled = lib(shadow(op, s, &lib(pt.rescaled(op, factor))?, TOL))?;
    let slack = 1e-9 * factor * (1.0 + base.sup_correction());
    for (a, b) in base.corrections.iter().zip(&scaled.corrections) {
        let gap = op.norm(&op.axpy(b, c(-factor), a));
        prop_assert!(gap <= slack, "||y' - s y|| = {gap}");
    }
    Ok(())
}

/// `lambda T` against the twisted pseudotrajectory `lambda^n x_n`.
fn check_twist<O: Splittable>(
    op: &O,
    twisted_op: &O,
    pt: &PseudoTrajectory<O::Vector>,
    lambda: Complex64,
) -> Result<(), TestCaseError> {
    let s = lib(op.build_splitting())?;
    let s2 = lib(twisted_op.build_splitting())?;
    // x'_0 = x_0, z'_n = lambda^{n+1} z_n
    let defects: Vec<O::Vector> =
        (pt.n_min..pt.n_max).map(|n| op.scale(pt.defect(n), lambda.powi(n as i32 + 1))).collect();
    let pt2 = lib(PseudoTrajectory::from_defects(twisted_op, pt.point(0), pt.n_min, defects))?;
    for (a, b) in pt.defect_norms.iter().zip(&pt2.defect_norms) {
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a), "defect norms {a} vs {b}");
    }
    let r = lib(shadow(op, &s, pt, TOL))?;
    let r2 = lib(shadow(twisted_op, &s2, &pt2, TOL))?;
    let scale = 1.0 + r.sup_correction();
    for (a, b) in r.correction_norms.iter().zip(&r2.correction_norms) {
        prop_assert!((a - b).abs() <= 1e-8 * scale, "correction norms {a} vs {b}");
    }
    Ok(())
}

fn check_lp<O: Splittable>(op: &O, x0: &O::Vector, window: (i64, i64), seed: u64, p: f64) -> Result<(), TestCaseError> {
    let s = lib(op.build_splitting())?;
    let rule = DefectRule { amplitude: DELTA, decay_exponent: 1.5 };
    let pt = lib(generate_with_rule(op, x0, &rule, window, seed))?;
    let (_, cert) = lib(shadow_profile(op, &s, &rule, DefectProfile::PSummable { p }, &pt, TOL))?;
    match cert {
        ProfileCertificate::PSummable { components, total, passed, .. } => {
            prop_assert!(passed, "certificate not passed: {components:?} {total:?}");
            for (lhs, rhs) in components {
                prop_assert!(lhs <= rhs * (1.0 + 1e-12) + TOL, "component sum {lhs} > {rhs}");
            }
            prop_assert!(total.0 <= total.1 * (1.0 + 1e-12) + TOL, "total {total:?}");
        }
        other => return Err(TestCaseError::fail(format!("wrong certificate {other:?}"))),
    }
    Ok(())
}

fn matrix_case(m: &RealHyperbolic, seed: u64) -> Result<(MatrixOp, Splitting, PseudoTrajectory<CVector>), TestCaseError> {
    let op = m.op();
    let s = lib(matrix_splitting(&op))?;
    let x0 = op.random_unit(&mut rand_from(seed), (0, 0));
    let pt = lib(generate_pseudotrajectory(&op, &x0, DELTA, MATRIX_WINDOW, seed))?;
    Ok((op, s, pt))
}

fn shift_case(w: &ShiftCase, seed: u64) -> Result<(ShiftOperator, Splitting, PseudoTrajectory<BiVector>), TestCaseError> {
    let op = w.forward();
    let s = match shift_splitting(&op) {
        Ok(s) => s,
        Err(e) => return Err(TestCaseError::reject(e.to_string())),
    };
    let pt = lib(generate_pseudotrajectory(&op, &BiVector::basis(0), DELTA, SHIFT_WINDOW, seed))?;
    Ok((op, s, pt))
}

fn rand_from(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

// ---------- suites ----------

/// `y_{n+1} - T y_n - z_n` vanishes along the window.
pub fn recurrence_residuals(cases: u32) -> Result<(), String> {
    run(cases, (real_hyperbolic(4), any::<u64>()), |(m, seed)| {
        let (op, s, pt) = matrix_case(&m, seed)?;
        check_residuals(&op, &s, &pt)
    })?;
    run(cases, (banded_shift(), any::<u64>()), |(w, seed)| {
        let (op, s, pt) = shift_case(&w, seed)?;
        check_residuals(&op, &s, &pt)
    })
}

/// `sup ||y_n|| <= K sup ||z_n||` and the run is certified.
pub fn certified_bound(cases: u32) -> Result<(), String> {
    run(cases, (real_hyperbolic(4), any::<u64>()), |(m, seed)| {
        let (op, s, pt) = matrix_case(&m, seed)?;
        check_bound(&op, &s, &pt)
    })?;
    run(cases, (banded_shift(), any::<u64>()), |(w, seed)| {
        let (op, s, pt) = shift_case(&w, seed)?;
        check_bound(&op, &s, &pt)
    })
}

/// Scaling every defect by `s` scales every correction by `s`.
pub fn defect_linearity(cases: u32) -> Result<(), String> {
    run(cases, (real_hyperbolic(4), any::<u64>(), 0.05..20.0f64), |(m, seed, f)| {
        let (op, s, pt) = matrix_case(&m, seed)?;
        check_linearity(&op, &s, &pt, f)
    })?;
    run(cases, (banded_shift(), any::<u64>(), 0.05..20.0f64), |(w, seed, f)| {
        let (op, s, pt) = shift_case(&w, seed)?;
        check_linearity(&op, &s, &pt, f)
    })
}

/// The shadow of `A (+) B` is the pair of shadows of `A` and `B`.
pub fn direct_sum(cases: u32) -> Result<(), String> {
    run(cases, (real_hyperbolic(3), real_hyperbolic(3), any::<u64>(), any::<u64>()), |(a, b, sa, sb)| {
        let (op_a, s_a, pt_a) = matrix_case(&a, sa)?;
        let (op_b, s_b, pt_b) = matrix_case(&b, sb)?;
        let sum = lib(op_a.direct_sum(&op_b))?;
        let s = lib(matrix_splitting(&sum))?;
        let (da, db) = (op_a.dim(), op_b.dim());
        let join = |x: &CVector, y: &CVector| CVector::from_iterator(da + db, x.iter().chain(y.iter()).copied());
        let defects = pt_a.defects.iter().zip(&pt_b.defects).map(|(x, y)| join(x, y)).collect();
        let pt = lib(PseudoTrajectory::from_defects(&sum, &join(pt_a.point(0), pt_b.point(0)), pt_a.n_min, defects))?;
        let r = lib(shadow(&sum, &s, &pt, TOL))?;
        let ra = lib(shadow(&op_a, &s_a, &pt_a, TOL))?;
        let rb = lib(shadow(&op_b, &s_b, &pt_b, TOL))?;
        let scale = 1.0 + r.sup_correction();
        for i in 0..r.corrections.len() {
            let y = &r.corrections[i];
            let ya = (y.rows(0, da) - &ra.corrections[i]).norm();
            let yb = (y.rows(da, db) - &rb.corrections[i]).norm();
            prop_assert!(ya.max(yb) <= 1e-8 * scale, "block mismatch {ya} {yb} at {i}");
        }
        Ok(())
    })
}

/// A real matrix and real pseudotrajectory have a real shadow.
pub fn complexification(cases: u32) -> Result<(), String> {
    run(cases, (real_hyperbolic(4), any::<u64>()), |(m, seed)| {
        let (op, s, pt) = matrix_case(&m, seed)?;
        let r = lib(shadow(&op, &s, &pt, TOL))?;
        let worst = r.corrections.iter().chain(std::iter::once(&r.base_point)).map(|y| op.max_imag(y)).fold(0.0, f64::max);
        prop_assert!(worst <= 10.0 * TOL, "imaginary part {worst}");
        Ok(())
    })
}

/// `lambda T` with `|lambda| = 1` shadows the twisted pseudotrajectory with the same norms.
pub fn unimodular_twist(cases: u32) -> Result<(), String> {
    run(cases, (real_hyperbolic(4), any::<u64>(), 0.0..std::f64::consts::TAU), |(m, seed, theta)| {
        let lambda = Complex64::from_polar(1.0, theta);
        let (op, _, pt) = matrix_case(&m, seed)?;
        check_twist(&op, &lib(op.scaled(lambda))?, &pt, lambda)
    })?;
    run(cases, (banded_shift(), any::<u64>(), 0.0..std::f64::consts::TAU), |(w, seed, theta)| {
        let lambda = Complex64::from_polar(1.0, theta);
        let (op, _, pt) = shift_case(&w, seed)?;
        let tw = ShiftOperator::new(lib(twisted(&op.weights, lambda))?, Direction::Forward, op.space);
        check_twist(&op, &tw, &pt, lambda)
    })
}

/// `p`-summable defects give corrections within the per-component constant.
pub fn lp_certificate(cases: u32) -> Result<(), String> {
    let p = || prop_oneof![Just(1.0), Just(2.0), 1.2..4.0f64];
    run(cases, (real_hyperbolic(4), any::<u64>(), p()), |(m, seed, p)| {
        let op = m.op();
        let x0 = op.random_unit(&mut rand_from(seed), (0, 0));
        check_lp(&op, &x0, MATRIX_WINDOW, seed, p)
    })?;
    run(cases, (banded_shift(), any::<u64>(), p()), |(w, seed, p)| {
        let op = w.forward();
        if shift_splitting(&op).is_err() {
            return Err(TestCaseError::reject("not splittable"));
        }
        check_lp(&op, &BiVector::basis(0), SHIFT_WINDOW, seed, p)
    })
}

fn nonvacuous(name: &str, hits: &Cell<u32>) -> Result<(), String> {
    if hits.get() == 0 {
        return Err(format!("{name}: no case reached the hypothesis"));
    }
    Ok(())
}

fn registry_forward() -> Vec<WeightSequence> {
    super::registry()
        .into_iter()
        .filter(|e| e.direction == Direction::Forward && e.weights.is_bilateral() && e.weights.zero_weights.is_empty())
        .map(|e| e.weights)
        .collect()
}

fn equivalence_case(ws: &WeightSequence, cfg: &ClassifierConfig, hits: &Cell<u32>) -> Result<(), TestCaseError> {
    let expansive = lib(classify_expansive_forward(ws, cfg))?.truth();
    let forward = lib(classify_positively_expansive(ws, cfg, Direction::Forward))?.truth();
    let inverse = lib(classify_positively_expansive(&lib(ws.inverse_backward())?, cfg, Direction::Backward))?.truth();
    if let (Some(e), Some(f), Some(b)) = (expansive, forward, inverse) {
        hits.set(hits.get() + 1);
        prop_assert_eq!(e, f || b);
    }
    Ok(())
}

/// `F_w` is expansive iff `F_w` or `F_w^{-1}` is positively expansive.
pub fn expansive_equivalence(cases: u32) -> Result<(), String> {
    let cfg = ClassifierConfig::default();
    let hits = Cell::new(0);
    for ws in registry_forward().into_iter().filter(|w| w.is_periodic()) {
        equivalence_case(&ws, &cfg, &hits).map_err(|e| format!("{e} for {ws:?}"))?;
    }
    run(cases, prop_oneof![any_shift(), banded_shift()], |w| equivalence_case(&w.weights(), &cfg, &hits))?;
    nonvacuous("expansive_equivalence", &hits)
}

fn espue_case(op: &ShiftOperator, seed: u64, cfg: &ClassifierConfig, hits: &Cell<u32>) -> Result<(), TestCaseError> {
    let Ok(s) = shift_splitting(op) else { return Ok(()) };
    let pt = lib(generate_pseudotrajectory(op, &BiVector::basis(0), DELTA, SHIFT_WINDOW, seed))?;
    let r = lib(shadow(op, &s, &pt, TOL))?;
    if r.certified && lib(classify_expansive_forward(&op.weights, cfg))?.is_true() {
        hits.set(hits.get() + 1);
        let u = lib(classify_uniformly_expansive_forward(&op.weights, cfg))?;
        prop_assert!(u.verdict.is_true(), "expansive and shadowing but uniform verdict {:?}", u.verdict);
    }
    Ok(())
}

/// Shadowing plus expansivity forces uniform expansivity.
pub fn shadowing_expansive_is_uniform(cases: u32) -> Result<(), String> {
    let cfg = ClassifierConfig::default();
    let hits = Cell::new(0);
    for ws in registry_forward() {
        let op = ShiftOperator::forward(ws.clone(), SpaceSpec::l2());
        espue_case(&op, 11, &cfg, &hits).map_err(|e| format!("{e} for {ws:?}"))?;
    }
    run(cases, (banded_shift(), any::<u64>()), |(w, seed)| espue_case(&w.forward(), seed, &cfg, &hits))?;
    nonvacuous("shadowing_expansive_is_uniform", &hits)
}

fn irregular_case(ws: &WeightSequence, cfg: &ClassifierConfig, hits: &Cell<u32>) -> Result<(), TestCaseError> {
    let candidates: Vec<BiVector> = (-8..=8).map(BiVector::basis).collect();
    if lib(classify_uniformly_expansive_forward(ws, cfg))?.verdict.is_true() {
        hits.set(hits.get() + 1);
        let op = ShiftOperator::forward(ws.clone(), SpaceSpec::l2());
        let found = lib(irregular_vector_probe(&op, &candidates, cfg))?;
        prop_assert!(found.is_none(), "irregular vector {found:?}");
    }
    Ok(())
}

/// A uniformly expansive shift has no irregular vector among `e_j`, `|j| <= 8`.
pub fn uniform_has_no_irregular(cases: u32) -> Result<(), String> {
    let cfg = ClassifierConfig::default();
    let hits = Cell::new(0);
    for ws in registry_forward() {
        irregular_case(&ws, &cfg, &hits).map_err(|e| format!("{e} for {ws:?}"))?;
    }
    run(cases, prop_oneof![any_shift(), banded_shift()], |w| irregular_case(&w.weights(), &cfg, &hits))?;
    nonvacuous("uniform_has_no_irregular", &hits)
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: [Suite; 10] = [
    ("recurrence_residuals", recurrence_residuals),
    ("certified_bound", certified_bound),
    ("defect_linearity", defect_linearity),
    ("direct_sum", direct_sum),
    ("complexification", complexification),
    ("unimodular_twist", unimodular_twist),
    ("lp_certificate", lp_certificate),
    ("expansive_equivalence", expansive_equivalence),
    ("shadowing_expansive_is_uniform", shadowing_expansive_is_uniform),
    ("uniform_has_no_irregular", uniform_has_no_irregular),
];
