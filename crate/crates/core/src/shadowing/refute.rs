use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::{LinearOperator, Splittable};
use super::pseudo::{generate_pseudotrajectory, PseudoTrajectory};
use super::solver::{orbit_errors, shadow};
use super::splitting::{certify_rate, lp_constant, Splitting, N_CHECK};
use crate::classifier::{Verdict, VerdictValue, Witness};
use crate::error::{Error, Result};
use crate::matrix_lab::{is_hyperbolic_matrix, left_eigenvector, unimodular_eigenvalue, CVector, MatrixOp};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refutation {
    pub lambda: [f64; 2],
    pub window: [i64; 2],
    /// `min_c max_{n in window} |c + n|`: every bounded solution of
    /// `y_{n+1} = T y_n + lambda^{n+1} u` has `sup ||y_n||` at least this.
    pub lower_bound: f64,
    pub optimal_c0: f64,
    pub sup_defect: f64,
    pub eigen_residual: f64,
}

/// Along a unit left eigenvector `u` for a unimodular `lambda`, the defects
/// `z_n = lambda^{n+1} u` force `<u, y_n> = lambda^n (c_0 + n)` for any
/// solution, so the minimax over `c_0` bounds `sup ||y||` from below while
/// `sup ||z|| = 1`.
pub fn refute_shadowing(op: &MatrixOp, window: (i64, i64), band: f64) -> Result<Refutation> {
    if window.0 >= window.1 {
        return Err(Error::InvalidArgument(format!("empty window [{}, {}]", window.0, window.1)));
    }
    let lambda = unimodular_eigenvalue(op, band).ok_or(Error::NoUnimodularEigenvalue)?;
    let (_, eigen_residual) = left_eigenvector(op, lambda);
    let optimal_c0 = -0.5 * (window.0 + window.1) as f64;
    let lower_bound = (window.0..=window.1).map(|n| (optimal_c0 + n as f64).abs()).fold(0.0, f64::max);
    Ok(Refutation {
        lambda: [lambda.re, lambda.im],
        window: [window.0, window.1],
        lower_bound,
        optimal_c0,
        sup_defect: 1.0,
        eigen_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpCheck {
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionResult {
    pub c: f64,
    pub t: f64,
    pub eps: f64,
    /// `(1 - t) eps / C`.
    pub delta_allowed: f64,
    pub delta: f64,
    /// `||x_n - T^n x_0||`, `n = 0..=N`.
    pub errors: Vec<f64>,
    /// `C delta / (1 - t)`.
    pub bound: f64,
    pub errors_below_bound: bool,
    pub within_eps: bool,
    /// Pointwise `||x_n - T^n x_0|| <= C sum_k t^{n-1-k} ||z_k||`.
    pub envelope_holds: bool,
    /// Largest error on the last quarter of the window.
    pub tail_error: f64,
    pub lp: Vec<LpCheck>,
}

/// Forward-only shadowing by the true orbit of `x_0` for an operator with
/// `||T^n|| <= C t^n`.
pub fn positive_shadow_contraction<O: LinearOperator>(
    op: &O,
    pt: &PseudoTrajectory<O::Vector>,
    eps: f64,
) -> Result<ContractionResult> {
    if pt.n_min != 0 {
        return Err(Error::InvalidArgument("positive shadowing takes a window starting at 0".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let norms = op.power_norms(N_CHECK)?;
    let (c, t, _) = certify_rate(&norms)
        .ok_or_else(|| Error::NotSplittable(format!("||T^n|| does not drop below 1 within {N_CHECK} steps")))?;
    let errors = orbit_errors(op, pt, pt.point(0))?;
    let bound = c * pt.delta / (1.0 - t);
    let slack = 1e-12 * pt.delta.max(1e-300) + 1e-15;
    let errors_below_bound = errors.iter().all(|&e| e < bound || (pt.delta == 0.0 && e == 0.0));
    let mut envelope_holds = true;
    let mut env: f64 = 0.0;
    for (n, &e) in errors.iter().enumerate().skip(1) {
        env = t * env + pt.defect_norms[n - 1];
        envelope_holds &= e <= c * env + slack;
    }
    let quarter = errors.len() * 3 / 4;
    let tail_error = errors[quarter..].iter().fold(0.0, |m: f64, &e| m.max(e));
    let lp = [1.0, 2.0]
        .into_iter()
        .map(|p| {
            let lhs: f64 = errors.iter().map(|e| e.powf(p)).sum();
            let rhs = lp_constant(c, t, p) * pt.defect_norms.iter().map(|d| d.powf(p)).sum::<f64>();
            LpCheck { p, lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-12) + slack }
        })
        .collect();
    let delta_allowed = (1.0 - t) * eps / c;
    Ok(ContractionResult {
        c,
        t,
        eps,
        delta_allowed,
        delta: pt.delta,
        errors_below_bound,
        within_eps: pt.delta <= delta_allowed && errors.iter().all(|&e| e <= eps),
        errors,
        bound,
        envelope_holds,
        tail_error,
        lp,
    })
}

#[derive(Clone, Debug)]
pub struct LinearGrowth<V> {
    pub base_point: V,
    pub delta: f64,
    /// `sup ||x_n - T^n z||` achieved by the shadow.
    pub eps: f64,
    /// `(n, ||T^n z||)`.
    pub norms: Vec<(i64, f64)>,
    pub holds: bool,
}

/// Shadow `x_n = (n delta / 3) T^n y` for a `y` whose orbit stays in `(1, 3)`;
/// the base point `z` then has `|n| delta/3 - eps < ||T^n z|| < |n| delta + eps`.
pub fn linear_growth_orbit<O: Splittable>(
    op: &O,
    s: &Splitting,
    y: &O::Vector,
    delta: f64,
    n: i64,
    tol: f64,
) -> Result<LinearGrowth<O::Vector>> {
    if n < 1 || !(delta > 0.0) {
        return Err(Error::InvalidArgument("need n >= 1 and delta > 0".into()));
    }
    let mut orbit = vec![y.clone()];
    for _ in 0..n {
        orbit.push(op.apply(orbit.last().unwrap())?);
    }
    let mut back = Vec::new();
    let mut cur = y.clone();
    for _ in 0..n {
        cur = op.apply_inverse(&cur)?;
        back.push(cur.clone());
    }
    back.reverse();
    back.extend(orbit);
    for (i, v) in back.iter().enumerate() {
        let r = op.norm(v);
        if !(r > 1.0 && r < 3.0) {
            return Err(Error::OrbitOutOfBand { n: i as i64 - n, norm: r });
        }
    }
    let points: Vec<O::Vector> = back
        .iter()
        .enumerate()
        .map(|(i, v)| op.scale(v, Complex64::new((i as i64 - n) as f64 * delta / 3.0, 0.0)))
        .collect();
    let pt = PseudoTrajectory::from_points(op, -n, points)?;
    let result = shadow(op, s, &pt, tol)?;
    let eps = result.sup_error();
    let z = result.base_point;
    let mut norms = Vec::new();
    let mut v = z.clone();
    for k in 0..=n {
        norms.push((k, op.norm(&v)));
        v = op.apply(&v)?;
    }
    let mut v = z.clone();
    for k in 1..=n {
        v = op.apply_inverse(&v)?;
        norms.push((-k, op.norm(&v)));
    }
    norms.sort_by_key(|p| p.0);
    let holds = norms.iter().all(|&(k, r)| {
        let m = k.unsigned_abs() as f64 * delta;
        r >= m / 3.0 - eps - tol && r <= m + eps + tol
    });
    Ok(LinearGrowth { base_point: z, delta, eps, norms, holds })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionConfig {
    pub band: f64,
    /// Forward window for the solver certificate.
    pub certificate_window: i64,
    /// Forward window for the refutation.
    pub refutation_window: i64,
    pub delta: f64,
    pub seed: u64,
    pub tol: f64,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig { band: crate::matrix_lab::DEFAULT_BAND, certificate_window: 16, refutation_window: 100, delta: 0.01, seed: 0, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShadowCertificate {
    pub k: f64,
    pub delta: f64,
    pub sup_error: f64,
    pub window: [i64; 2],
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalShadowingDecision {
    pub verdict: Verdict,
    pub certificate: Option<ShadowCertificate>,
    pub refutation: Option<Refutation>,
}

impl NormalShadowingDecision {
    /// The attached certificate or refutation backs the verdict.
    pub fn backed(&self) -> bool {
        match self.verdict.value {
            VerdictValue::True => self.certificate.as_ref().is_some_and(|c| c.certified),
            VerdictValue::False => self
                .refutation
                .as_ref()
                .is_some_and(|r| r.lower_bound >= 0.5 * (r.window[1] - r.window[0]) as f64),
            _ => true,
        }
    }
}

/// Positive shadowing for a normal matrix is hyperbolicity; a True answer is
/// backed by a solver run, a False one by a refutation.
pub fn positive_shadowing_decision_normal(op: &MatrixOp, cfg: &DecisionConfig) -> Result<NormalShadowingDecision> {
    if !op.is_normal() {
        return Err(Error::NotNormal(op.commutator_ratio()));
    }
    let mut verdict = is_hyperbolic_matrix(op, cfg.band);
    let mut decision = NormalShadowingDecision { verdict: verdict.clone(), certificate: None, refutation: None };
    match verdict.value {
        VerdictValue::True => {
            let s = op.build_splitting()?;
            let mut x0 = CVector::zeros(op.dim());
            x0[0] = Complex64::new(1.0, 0.0);
            let pt = generate_pseudotrajectory(op, &x0, cfg.delta, (0, cfg.certificate_window), cfg.seed)?;
            let r = shadow(op, &s, &pt, cfg.tol)?;
            verdict.witness = Some(Witness::ShadowConstant { k: r.bound_k });
            decision.certificate = Some(ShadowCertificate {
                k: r.bound_k,
                delta: r.delta,
                sup_error: r.sup_error(),
                window: [0, cfg.certificate_window],
                certified: r.certified,
            });
        }
        VerdictValue::False => {
            let r = refute_shadowing(op, (0, cfg.refutation_window), cfg.band)?;
            verdict.witness = Some(Witness::Refutation { window: cfg.refutation_window, lower_bound: r.lower_bound });
            decision.refutation = Some(r);
        }
        _ => {}
    }
    decision.verdict = verdict;
    Ok(decision)
}
