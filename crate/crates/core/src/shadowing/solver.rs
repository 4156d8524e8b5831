use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::{LinearOperator, SparseCoords, Splittable};
use super::pseudo::{DefectRule, PseudoTrajectory};
use super::splitting::{lp_constant, Splitting};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ShadowResult<V> {
    pub n_min: i64,
    pub n_max: i64,
    /// `x = x_0 - y_0`.
    pub base_point: V,
    pub corrections: Vec<V>,
    pub stable_corrections: Vec<V>,
    pub unstable_corrections: Vec<V>,
    pub correction_norms: Vec<f64>,
    pub defect_norms: Vec<f64>,
    /// `||x_n - T^n x||`.
    pub errors: Vec<f64>,
    pub bound_k: f64,
    pub delta: f64,
    /// Slack allowed on top of `K delta`.
    pub tol: f64,
    /// Largest floating-point slack `ROUNDING_ULPS (|n| + 1) eps max(||x_n||, ||T^n x||)`
    /// added to `tol` at step `n`; only matters once the orbit is large.
    pub rounding: f64,
    /// `max ||y_{n+1} - T y_n - z_n||`.
    pub residual_max: f64,
    pub certified: bool,
}

impl<V> ShadowResult<V> {
    pub fn sup_error(&self) -> f64 {
        self.errors.iter().fold(0.0, |m, &e| m.max(e))
    }

    pub fn sup_correction(&self) -> f64 {
        self.correction_norms.iter().fold(0.0, |m, &e| m.max(e))
    }

    pub fn error(&self, n: i64) -> f64 {
        self.errors[(n - self.n_min) as usize]
    }

    pub fn correction(&self, n: i64) -> &V {
        &self.corrections[(n - self.n_min) as usize]
    }

    /// `(n, ||z_n||, ||y_n||, error)` rows; `||z_{n_max}||` is reported as 0.
    pub fn rows(&self) -> Vec<(i64, f64, f64, f64)> {
        (self.n_min..=self.n_max)
            .map(|n| {
                let i = (n - self.n_min) as usize;
                (n, self.defect_norms.get(i).copied().unwrap_or(0.0), self.correction_norms[i], self.errors[i])
            })
            .collect()
    }

    pub fn to_json<O: LinearOperator<Vector = V>>(&self, op: &O) -> ShadowJson {
        ShadowJson {
            window: [self.n_min, self.n_max],
            base_point: op.to_sparse(&self.base_point),
            corrections: self.corrections.iter().map(|y| op.to_sparse(y)).collect(),
            errors: self.errors.clone(),
            bound_k: self.bound_k,
            delta: self.delta,
            sup_error: self.sup_error(),
            tol: self.tol,
            rounding: self.rounding,
            residual_max: self.residual_max,
            certified: self.certified,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShadowJson {
    pub window: [i64; 2],
    pub base_point: SparseCoords,
    pub corrections: Vec<SparseCoords>,
    pub errors: Vec<f64>,
    pub bound_k: f64,
    pub delta: f64,
    pub sup_error: f64,
    pub tol: f64,
    #[serde(default)]
    pub rounding: f64,
    pub residual_max: f64,
    pub certified: bool,
}

/// Write `n, defect_norm, correction_norm, error` rows.
pub fn write_csv<V, W: std::io::Write>(result: &ShadowResult<V>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "defect_norm", "correction_norm", "error"])?;
    for (n, z, y, e) in result.rows() {
        w.write_record([n.to_string(), z.to_string(), y.to_string(), e.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

const ROUNDING_ULPS: f64 = 4.0;

/// `x_n - T^n x` norms over the window, iterating forward and backward from `n = 0`.
pub(crate) fn orbit_errors<O: LinearOperator>(op: &O, pt: &PseudoTrajectory<O::Vector>, x: &O::Vector) -> Result<Vec<f64>> {
    Ok(orbit_errors_scaled(op, pt, x)?.into_iter().map(|(e, _)| e).collect())
}

/// Errors paired with the rounding slack of each step.
fn orbit_errors_scaled<O: LinearOperator>(
    op: &O,
    pt: &PseudoTrajectory<O::Vector>,
    x: &O::Vector,
) -> Result<Vec<(f64, f64)>> {
    let mut out = vec![(0.0, 0.0); pt.len()];
    let mut entry = |n: i64, v: &O::Vector| {
        let scale = op.norm(pt.point(n)).max(op.norm(v));
        let slack = ROUNDING_ULPS * (n.unsigned_abs() as f64 + 1.0) * f64::EPSILON * scale;
        out[(n - pt.n_min) as usize] = (op.norm(&op.sub(pt.point(n), v)), slack);
    };
    let mut v = x.clone();
    for n in 0..=pt.n_max {
        entry(n, &v);
        if n < pt.n_max {
            v = op.apply(&v)?;
        }
    }
    let mut v = x.clone();
    for n in (pt.n_min..0).rev() {
        v = op.apply_inverse(&v)?;
        entry(n, &v);
    }
    Ok(out)
}

/// Bounded solution of `y_{n+1} = T y_n + z_n` on the window, equal to
/// `y^(1)_n = sum_{k>=0} T^k z^(1)_{n-k-1}` plus
/// `y^(2)_n = -sum_{k>=1} T^{-k} z^(2)_{n+k-1}` with defects outside the
/// window taken as zero. Both sums are run as recursions in their
/// contracting direction, so nothing is truncated. The base point is `x_0 - y_0`.
pub fn shadow<O: Splittable>(
    op: &O,
    s: &Splitting,
    pt: &PseudoTrajectory<O::Vector>,
    tol: f64,
) -> Result<ShadowResult<O::Vector>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let (n_min, n_max) = (pt.n_min, pt.n_max);
    let mut z1 = Vec::with_capacity(pt.defects.len());
    let mut z2 = Vec::with_capacity(pt.defects.len());
    for z in &pt.defects {
        let (a, b) = op.components(s, z)?;
        z1.push(a);
        z2.push(b);
    }
    let one = Complex64::new(1.0, 0.0);

    let mut y1 = vec![op.zero()];
    for z in &z1 {
        let next = op.axpy(&op.stable_apply(s, y1.last().unwrap())?, one, z);
        y1.push(next);
    }
    let mut y2 = vec![op.zero()];
    for z in z2.iter().rev() {
        let prev = op.unstable_inverse(s, &op.sub(y2.last().unwrap(), z))?;
        y2.push(prev);
    }
    y2.reverse();
    let corrections: Vec<O::Vector> = y1.iter().zip(&y2).map(|(a, b)| op.axpy(a, one, b)).collect();
    let correction_norms: Vec<f64> = corrections.iter().map(|y| op.norm(y)).collect();

    let mut residual_max: f64 = 0.0;
    for n in n_min..n_max {
        let i = (n - n_min) as usize;
        let r = op.sub(&op.sub(&corrections[i + 1], &op.apply(&corrections[i])?), &pt.defects[i]);
        residual_max = residual_max.max(op.norm(&r));
    }

    let base_point = op.sub(pt.point(0), &corrections[(-n_min) as usize]);
    let scaled = orbit_errors_scaled(op, pt, &base_point)?;
    let bound_k = s.sup_constant();
    let certified = scaled.iter().all(|&(e, slack)| e <= bound_k * pt.delta + tol + slack);
    let rounding = scaled.iter().fold(0.0, |m: f64, &(_, r)| m.max(r));
    let errors = scaled.into_iter().map(|(e, _)| e).collect();
    Ok(ShadowResult {
        n_min,
        n_max,
        base_point,
        corrections,
        stable_corrections: y1,
        unstable_corrections: y2,
        correction_norms,
        defect_norms: pt.defect_norms.clone(),
        errors,
        bound_k,
        delta: pt.delta,
        tol,
        rounding,
        residual_max,
        certified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum DefectProfile {
    /// `||z_n|| -> 0`.
    Decaying,
    /// `sum ||z_n||^p < inf`.
    PSummable { p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum ProfileCertificate {
    Decaying {
        /// `max_n (||y_n|| - E_n)` against the convolution envelope of the window defects.
        max_excess: f64,
        /// Largest correction on the outer tenth of the window.
        edge_correction: f64,
        /// The envelope of the full rule at the window ends; tends to 0 with the window.
        rule_envelope_edge: f64,
        passed: bool,
    },
    PSummable {
        p: f64,
        /// Per component: `(sum ||y^(i)||^p, L * sum ||z^(i)||^p)`.
        components: [(f64, f64); 2],
        /// `sum ||y||^p` and `2^p beta^p L sum ||z||^p`.
        total: (f64, f64),
        /// `sum_{|n| > N} rule(n)^p`, what the window leaves out.
        rule_tail: f64,
        passed: bool,
    },
}

impl ProfileCertificate {
    pub fn passed(&self) -> bool {
        match self {
            ProfileCertificate::Decaying { passed, .. } | ProfileCertificate::PSummable { passed, .. } => *passed,
        }
    }
}

/// `sum_{m > n0} (A (1+m)^{-s})^p`, bounded by the integral.
fn rule_tail_sum(rule: &DefectRule, p: f64, n0: i64) -> f64 {
    let e = rule.decay_exponent * p;
    rule.amplitude.powf(p) * (1.0 + n0 as f64).powf(1.0 - e) / (e - 1.0)
}

/// `beta C (sum_{k>=0} t^k r(n-k-1) + sum_{k>=1} t^k r(n+k-1))` for a full rule on all of Z.
fn rule_envelope(s: &Splitting, rule: &DefectRule, n: i64) -> f64 {
    let mut sum = 0.0;
    let mut tk = 1.0;
    let mut k = 0i64;
    while tk > 1e-18 && k < 100_000 {
        sum += tk * rule.at(n - k - 1);
        if k >= 1 {
            sum += tk * rule.at(n + k - 1);
        }
        tk *= s.t;
        k += 1;
    }
    s.beta * s.c * (sum + rule.amplitude * tk / (1.0 - s.t) * 2.0)
}

/// Shadowing of a pseudotrajectory whose defects follow `rule`, with a
/// certificate that the corrections inherit the profile.
pub fn shadow_profile<O: Splittable>(
    op: &O,
    s: &Splitting,
    rule: &DefectRule,
    profile: DefectProfile,
    pt: &PseudoTrajectory<O::Vector>,
    tol: f64,
) -> Result<(ShadowResult<O::Vector>, ProfileCertificate)> {
    match profile {
        DefectProfile::Decaying if !(rule.decay_exponent > 0.0) && rule.amplitude > 0.0 => {
            return Err(Error::ProfileViolated("a decaying profile needs a positive exponent".into()))
        }
        DefectProfile::PSummable { p } if !(p >= 1.0) => {
            return Err(Error::ProfileViolated(format!("p must be at least 1, got {p}")))
        }
        DefectProfile::PSummable { p } if !(rule.decay_exponent * p > 1.0) && rule.amplitude > 0.0 => {
            return Err(Error::ProfileViolated(format!(
                "(1+|n|)^-{} is not {p}-summable",
                rule.decay_exponent
            )))
        }
        _ => {}
    }
    for (i, &d) in pt.defect_norms.iter().enumerate() {
        let n = pt.n_min + i as i64;
        if d > rule.at(n) * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::ProfileViolated(format!("||z_{n}|| = {d} exceeds the rule value {}", rule.at(n))));
        }
    }
    let result = shadow(op, s, pt, tol)?;
    let (n_min, n_max) = (pt.n_min, pt.n_max);
    let cert = match profile {
        DefectProfile::Decaying => {
            let rho = |m: i64| if m >= n_min && m < n_max { pt.defect_norms[(m - n_min) as usize] } else { 0.0 };
            let mut max_excess = f64::NEG_INFINITY;
            for n in n_min..=n_max {
                let mut env = 0.0;
                let mut tk = 1.0;
                for k in 0..=(n_max - n_min) {
                    env += tk * rho(n - k - 1);
                    if k >= 1 {
                        env += tk * rho(n + k - 1);
                    }
                    tk *= s.t;
                }
                env *= s.beta * s.c;
                max_excess = max_excess.max(result.correction_norms[(n - n_min) as usize] - env);
            }
            let edge = ((n_max - n_min) / 10).max(1);
            let edge_correction = (n_min..=n_max)
                .filter(|&n| n < n_min + edge || n > n_max - edge)
                .map(|n| result.correction_norms[(n - n_min) as usize])
                .fold(0.0, f64::max);
            let rule_envelope_edge = rule_envelope(s, rule, n_min).max(rule_envelope(s, rule, n_max));
            ProfileCertificate::Decaying {
                max_excess,
                edge_correction,
                rule_envelope_edge,
                passed: max_excess <= 10.0 * tol,
            }
        }
        DefectProfile::PSummable { p } => {
            let l = lp_constant(s.c, s.t, p);
            let mut zp = [0.0; 2];
            for z in &pt.defects {
                let (a, b) = op.components(s, z)?;
                zp[0] += op.norm(&a).powf(p);
                zp[1] += op.norm(&b).powf(p);
            }
            let yp = [
                result.stable_corrections.iter().map(|y| op.norm(y).powf(p)).sum::<f64>(),
                result.unstable_corrections.iter().map(|y| op.norm(y).powf(p)).sum::<f64>(),
            ];
            let slack = pt.len() as f64 * (10.0 * tol).powf(p);
            let components = [(yp[0], l * zp[0]), (yp[1], l * zp[1])];
            let zsum: f64 = pt.defect_norms.iter().map(|d| d.powf(p)).sum();
            let ysum: f64 = result.correction_norms.iter().map(|y| y.powf(p)).sum();
            let total = (ysum, 2f64.powf(p) * s.beta.powf(p) * l * zsum);
            let rule_tail = if rule.amplitude == 0.0 { 0.0 } else { 2.0 * rule_tail_sum(rule, p, n_max.max(-n_min)) };
            let passed = components.iter().all(|(a, b)| *a <= b + slack) && total.0 <= total.1 + slack;
            ProfileCertificate::PSummable { p, components, total, rule_tail, passed }
        }
    };
    Ok((result, cert))
}

#[cfg(test)]
mod tests {
    use super::super::pseudo::{generate_pseudotrajectory, generate_with_rule};
    use super::*;
    use crate::sequence_space::{BiVector, ShiftOperator, SpaceSpec, WeightSequence};

    fn theorem_d() -> ShiftOperator {
        ShiftOperator::forward(WeightSequence::theorem_d(2.0).unwrap(), SpaceSpec::l2())
    }

    #[test]
    fn random_pseudotrajectory_is_certified() {
        let op = theorem_d();
        let s = op.build_splitting().unwrap();
        let pt = generate_pseudotrajectory(&op, &BiVector::basis(0), 0.01, (-50, 50), 7).unwrap();
        let r = shadow(&op, &s, &pt, 1e-10).unwrap();
        assert!(r.certified);
        assert!(r.sup_error() <= 0.04 + 1e-10);
        assert!(r.residual_max <= 1e-9);
    }

    #[test]
    fn true_orbit_needs_no_correction() {
        let op = theorem_d();
        let s = op.build_splitting().unwrap();
        let pt = generate_pseudotrajectory(&op, &BiVector::basis(0), 0.0, (-10, 10), 1).unwrap();
        let r = shadow(&op, &s, &pt, 1e-10).unwrap();
        assert!(r.correction_norms.iter().all(|&y| y == 0.0));
        assert!(r.errors.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn single_stable_kick() {
        let op = theorem_d();
        let s = op.build_splitting().unwrap();
        let delta = 0.01;
        let mut defects = vec![BiVector::zero(); 20];
        defects[10] = BiVector::basis(0).scale(Complex64::new(delta, 0.0));
        let pt = PseudoTrajectory::from_defects(&op, &BiVector::basis(0), -10, defects).unwrap();
        let r = shadow(&op, &s, &pt, 1e-12).unwrap();
        for n in -10..=0 {
            assert!(r.correction(n).is_zero());
        }
        for n in 1..=10 {
            let expect = op.power(pt.defect(0), n - 1).unwrap();
            assert!(r.correction(n).sub(&expect).norm(SpaceSpec::l2()) < 1e-15);
            assert!((r.error(n) - delta * 0.5f64.powi(n as i32 - 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn summable_profile_certificate() {
        let op = theorem_d();
        let s = op.build_splitting().unwrap();
        let rule = DefectRule { amplitude: 1.0, decay_exponent: 2.0 };
        let pt = generate_with_rule(&op, &BiVector::basis(0), &rule, (-40, 40), 5).unwrap();
        let (_, cert) = shadow_profile(&op, &s, &rule, DefectProfile::PSummable { p: 1.0 }, &pt, 1e-10).unwrap();
        assert!(cert.passed(), "{cert:?}");
        let (_, dec) = shadow_profile(&op, &s, &rule, DefectProfile::Decaying, &pt, 1e-10).unwrap();
        assert!(dec.passed(), "{dec:?}");
    }

    #[test]
    fn constant_defects_are_not_summable() {
        let op = theorem_d();
        let s = op.build_splitting().unwrap();
        let rule = DefectRule::constant(0.01);
        let pt = generate_pseudotrajectory(&op, &BiVector::basis(0), 0.01, (-10, 10), 2).unwrap();
        assert!(matches!(
            shadow_profile(&op, &s, &rule, DefectProfile::PSummable { p: 2.0 }, &pt, 1e-10),
            Err(Error::ProfileViolated(_))
        ));
        let zero = DefectRule::constant(0.0);
        let pt0 = generate_pseudotrajectory(&op, &BiVector::basis(0), 0.0, (-10, 10), 2).unwrap();
        let (_, cert) = shadow_profile(&op, &s, &zero, DefectProfile::PSummable { p: 2.0 }, &pt0, 1e-10).unwrap();
        assert!(cert.passed());
    }

    #[test]
    fn csv_has_expected_columns() {
        let op = theorem_d();
        let s = op.build_splitting().unwrap();
        let pt = generate_pseudotrajectory(&op, &BiVector::basis(0), 0.01, (-3, 3), 1).unwrap();
        let r = shadow(&op, &s, &pt, 1e-10).unwrap();
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,defect_norm,correction_norm,error\n-3,"));
        assert_eq!(text.lines().count(), 8);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let op = theorem_d();
        let s = op.build_splitting().unwrap();
        let pt = generate_pseudotrajectory(&op, &BiVector::basis(0), 0.01, (-3, 3), 1).unwrap();
        assert!(shadow(&op, &s, &pt, 0.0).is_err());
    }
}
