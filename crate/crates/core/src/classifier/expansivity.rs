use serde::Serialize;

use super::config::ClassifierConfig;
use super::search::{and3, ladder, or3};
use super::tails::{tail_summary, Cmp, TailSummary};
use super::verdict::{Branch, Side, Tail, Verdict, Witness};
use crate::error::{Error, Result};
use crate::sequence_space::{window_product, Annotation, Direction, Support, WeightSequence};

pub(crate) fn require_invertible_bilateral(w: &WeightSequence) -> Result<()> {
    if w.support != Support::Bilateral {
        return Err(Error::Unilateral);
    }
    if !w.invertible {
        return Err(Error::NotInvertible(format!("zero weight at {:?}", w.zero_weights)));
    }
    Ok(())
}

/// Log of the running product on one side, at exponent `n >= 1`.
pub fn side_log_product(w: &WeightSequence, side: Side, n: u64) -> f64 {
    let n_i = n as i64;
    match side {
        Side::Right => window_product(w, 1, n).ln(),
        Side::Left => window_product(w, -n_i, n).ln(),
        Side::LeftInverse => -window_product(w, -n_i, n).ln(),
    }
}

/// Basis vector whose orbit realizes the side product.
pub fn side_start(side: Side) -> i64 {
    match side {
        Side::Right => 1,
        Side::LeftInverse => 0,
        Side::Left => -1,
    }
}

/// First exponent within the horizon where the side product reaches `threshold_c`.
pub fn search_side(w: &WeightSequence, side: Side, cfg: &ClassifierConfig) -> Option<Witness> {
    let values: Vec<f64> = (1..=cfg.horizon).map(|n| side_log_product(w, side, n)).collect();
    let l = ladder(&values, cfg.threshold_c.ln());
    l.first_hit.map(|(n, v)| Witness::Product { side, k: side_start(side), n, log_abs: v, ladder: l.peaks })
}

fn tails_witness(t: &TailSummary) -> Witness {
    Witness::Tails { log_gm_left: t.log_gm_left, log_gm_right: t.log_gm_right }
}

/// Turns a three-valued closed form into a verdict, naming the undecided tail.
fn decide(value: Option<bool>, t: &TailSummary, cfg: &ClassifierConfig, witness: Option<Witness>) -> Verdict {
    match value {
        Some(v) => Verdict::exact(v, witness.or_else(|| Some(tails_witness(t)))),
        None => {
            let tol = cfg.gm_tolerance;
            if t.right_vs_one(tol) == Cmp::Ambiguous {
                Verdict::banded(Tail::Right, t.log_gm_right)
            } else if t.left_vs_one(tol) == Some(Cmp::Ambiguous) {
                Verdict::banded(Tail::Left, t.log_gm_left.unwrap_or(f64::NAN))
            } else {
                Verdict::banded(Tail::Ratio, t.log_gm_left.unwrap_or(f64::NAN) - t.log_gm_right)
            }
        }
    }
}

/// Expansivity of an invertible bilateral forward shift.
pub fn classify_expansive_forward(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<Verdict> {
    require_invertible_bilateral(w)?;
    let found = || search_side(w, Side::LeftInverse, cfg).or_else(|| search_side(w, Side::Right, cfg));
    if !w.is_periodic() {
        return Ok(found().map_or(Verdict::searched_out(cfg.horizon), |wit| Verdict::witnessed(wit, cfg.horizon)));
    }
    let t = tail_summary(w)?;
    let tol = cfg.gm_tolerance;
    let value = or3(t.right_vs_one(tol).above(), t.left_vs_one(tol).and_then(Cmp::below));
    let witness = if value == Some(true) { found() } else { None };
    Ok(decide(value, &t, cfg, witness))
}

fn first_zero(w: &WeightSequence, pick: impl Fn(i64) -> bool) -> Option<i64> {
    w.zero_weights.iter().copied().find(|&z| pick(z))
}

/// Positive expansivity of `F_w` (any support) or `B_w` (bilateral).
pub fn classify_positively_expansive(w: &WeightSequence, cfg: &ClassifierConfig, direction: Direction) -> Result<Verdict> {
    let tol = cfg.gm_tolerance;
    match direction {
        Direction::Forward => {
            if let Some(z) = first_zero(w, |_| true) {
                return Ok(Verdict::exact(false, Some(Witness::ZeroWeight { index: z })));
            }
            if !w.is_periodic() {
                return Ok(search_side(w, Side::Right, cfg)
                    .map_or(Verdict::searched_out(cfg.horizon), |wit| Verdict::witnessed(wit, cfg.horizon)));
            }
            let t = tail_summary(w)?;
            let value = t.right_vs_one(tol).above();
            let witness = if value == Some(true) { search_side(w, Side::Right, cfg) } else { None };
            Ok(decide(value, &t, cfg, witness))
        }
        Direction::Backward => {
            if w.support == Support::Unilateral {
                return Ok(Verdict::exact(
                    false,
                    Some(Witness::Note { text: "a unilateral backward shift has a nontrivial kernel".into() }),
                ));
            }
            // a zero at j >= 0 kills injectivity; one at j < 0 caps the left products
            if let Some(z) = first_zero(w, |_| true) {
                return Ok(Verdict::exact(false, Some(Witness::ZeroWeight { index: z })));
            }
            if !w.is_periodic() {
                return Ok(search_side(w, Side::Left, cfg)
                    .map_or(Verdict::searched_out(cfg.horizon), |wit| Verdict::witnessed(wit, cfg.horizon)));
            }
            let t = tail_summary(w)?;
            let value = t.left_vs_one(tol).and_then(Cmp::above);
            let witness = if value == Some(true) { search_side(w, Side::Left, cfg) } else { None };
            Ok(decide(value, &t, cfg, witness))
        }
    }
}

/// Uniform positive expansivity of `F_w` (any support) or `B_w`.
pub fn classify_uniformly_positively_expansive(
    w: &WeightSequence,
    cfg: &ClassifierConfig,
    direction: Direction,
) -> Result<Verdict> {
    if direction == Direction::Backward && w.support == Support::Unilateral {
        return Ok(Verdict::exact(false, Some(Witness::Note { text: "a unilateral backward shift has a nontrivial kernel".into() })));
    }
    if let Some(z) = first_zero(w, |_| true) {
        return Ok(Verdict::exact(false, Some(Witness::ZeroWeight { index: z })));
    }
    if !w.is_periodic() {
        return Ok(match w.annotation(|a| *a == Annotation::NotUniformlyPositivelyExpansive) {
            Some(_) => Verdict::annotated(false, None),
            None => Verdict::searched_out(cfg.horizon),
        });
    }
    let t = tail_summary(w)?;
    let tol = cfg.gm_tolerance;
    // the infimum runs over every window, so each tail must expand
    let right = t.right_vs_one(tol).above();
    let value = match t.left_vs_one(tol) {
        Some(l) => and3(l.above(), right),
        None => right,
    };
    Ok(decide(value, &t, cfg, None))
}

/// Branch tags of the uniform expansivity verdict.
#[derive(Clone, Debug, Serialize)]
pub struct UniformExpansivity {
    pub verdict: Verdict,
    pub branches: Vec<Branch>,
    pub primary: Branch,
}

/// Smallest exponent at which both halves of the mixed branch clear `c`,
/// checked over every window phase of the periodic tails.
fn third_branch_exponent(w: &WeightSequence, cfg: &ClassifierConfig) -> Option<u64> {
    let right_len = w.right_period.len() as i64;
    let left_len = w.left_period.as_ref().map_or(1, |l| l.len()) as i64;
    let k_right_hi = w.core_end().max(1) + right_len - 1;
    let k_left_lo = w.core_start().min(-1) - left_len + 1;
    let log_c = cfg.threshold_c.ln();
    (1..=cfg.horizon).find(|&n| {
        let n_i = n as i64;
        let right_ok = (1..=k_right_hi).all(|k| window_product(w, k, n).ln() >= log_c);
        let left_ok = (k_left_lo..=-1).all(|k| -window_product(w, k - n_i, n).ln() >= log_c);
        right_ok && left_ok
    })
}

/// Uniform expansivity of an invertible bilateral forward shift, with branch tags.
pub fn classify_uniformly_expansive_forward(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<UniformExpansivity> {
    require_invertible_bilateral(w)?;
    if !w.is_periodic() {
        let verdict = match w.annotation(|a| *a == Annotation::NotUniformlyExpansive) {
            Some(_) => Verdict::annotated(false, None),
            None => Verdict::searched_out(cfg.horizon),
        };
        return Ok(UniformExpansivity { verdict, branches: vec![], primary: Branch::None });
    }
    let t = tail_summary(w)?;
    let tol = cfg.gm_tolerance;
    let l = t.left_vs_one(tol).expect("bilateral");
    let r = t.right_vs_one(tol);
    let tests = [
        (Branch::First, and3(l.above(), r.above())),
        (Branch::Second, and3(l.below(), r.below())),
        (Branch::Third, and3(r.above(), l.below())),
    ];
    let branches: Vec<Branch> = tests.iter().filter(|(_, v)| *v == Some(true)).map(|(b, _)| *b).collect();
    let value = tests.iter().fold(Some(false), |acc, (_, v)| or3(acc, *v));
    let primary = branches.first().copied().unwrap_or(Branch::None);
    let verdict = match value {
        // decided by the tail means; the exponent is reported when the search finds it
        Some(true) if primary == Branch::Third => Verdict::exact(
            true,
            Some(Witness::Branches { branches: branches.clone(), primary, n: third_branch_exponent(w, cfg) }),
        ),
        Some(v) => Verdict::exact(v, Some(Witness::Branches { branches: branches.clone(), primary, n: None })),
        None => decide(None, &t, cfg, None),
    };
    Ok(UniformExpansivity { verdict, branches, primary })
}

/// `(r(F_w), r(F_w^{-1}))`; the second is infinite for non-invertible shifts.
pub fn shift_spectral_radii(w: &WeightSequence) -> Result<(f64, f64)> {
    if !w.is_periodic() {
        return match w.annotation(|a| matches!(a, Annotation::SpectralRadii { .. })) {
            Some(Annotation::SpectralRadii { r_fw, r_fw_inv }) => Ok((r_fw, r_fw_inv)),
            _ => Err(Error::NotPeriodic("no spectral radius annotation".into())),
        };
    }
    let t = tail_summary(w)?;
    let r = t.max_log_gm().exp();
    if w.invertible {
        Ok((r, (-t.min_log_gm()).exp()))
    } else {
        Ok((r, f64::INFINITY))
    }
}

/// Hyperbolicity from the spectral radii (annulus for invertible shifts, disc otherwise).
pub fn is_hyperbolic_shift(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<Verdict> {
    let (r_fw, r_fw_inv) = shift_spectral_radii(w)?;
    let radii = Witness::SpectralRadii { r_fw, r_fw_inv };
    if !w.is_periodic() {
        return Ok(Verdict::annotated(r_fw < 1.0 || r_fw_inv < 1.0, Some(radii)));
    }
    let t = tail_summary(w)?;
    let tol = cfg.gm_tolerance;
    let r = t.right_vs_one(tol);
    let value = match (w.invertible, t.left_vs_one(tol)) {
        (true, Some(l)) => or3(and3(l.below(), r.below()), and3(l.above(), r.above())),
        (false, Some(l)) => and3(l.below(), r.below()),
        (_, None) => r.below(),
    };
    Ok(decide(value, &t, cfg, Some(radii)))
}

#[derive(Clone, Debug, Serialize)]
pub struct HyponormalReport {
    /// `|w_n|` is nondecreasing over the integers.
    pub is_hyponormal: bool,
    pub has_unit_modulus_weight: bool,
    pub expansive: Verdict,
    pub uniformly_expansive: Verdict,
    /// Checked only when hyponormal without unit-modulus weights.
    pub implication_holds: Option<bool>,
}

fn constant_modulus(p: &[num_complex::Complex64]) -> Option<f64> {
    let m = p[0].norm();
    p.iter().all(|w| w.norm() == m).then_some(m)
}

/// Monotonicity of `|w_n|` over the whole index set.
pub fn is_hyponormal(w: &WeightSequence) -> bool {
    if !w.is_periodic() {
        return w.sup_abs() == w.inf_abs();
    }
    let Some(right) = constant_modulus(&w.right_period) else { return false };
    let mut chain: Vec<f64> = Vec::new();
    if let Some(left) = &w.left_period {
        match constant_modulus(left) {
            Some(l) => chain.push(l),
            None => return false,
        }
    }
    chain.extend(w.core.values.iter().map(|c| c.norm()));
    chain.push(right);
    chain.windows(2).all(|p| p[0] <= p[1])
}

pub fn hyponormal_expansive_check(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<HyponormalReport> {
    require_invertible_bilateral(w)?;
    let is_hyponormal = is_hyponormal(w);
    let has_unit_modulus_weight = w.moduli().iter().any(|&m| (m * m - 1.0).abs() <= 4.0 * f64::EPSILON);
    let expansive = classify_expansive_forward(w, cfg)?;
    let uniformly_expansive = classify_uniformly_expansive_forward(w, cfg)?.verdict;
    let implication_holds = (is_hyponormal && !has_unit_modulus_weight).then(|| expansive.is_true());
    Ok(HyponormalReport { is_hyponormal, has_unit_modulus_weight, expansive, uniformly_expansive, implication_holds })
}
