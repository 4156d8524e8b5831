use super::config::ClassifierConfig;
use super::expansivity::require_invertible_bilateral;
use super::tails::{tail_summary, Cmp};
use super::verdict::{CyclicPair, Decay, Verdict, Witness};
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::sequence_space::{window_product, WeightSequence};

fn check_nq(n: u64, q: u64) -> Result<()> {
    if n <= q {
        return Err(Error::InvalidArgument(format!("need n > q, got n = {n}, q = {q}")));
    }
    Ok(())
}

/// `max{ (w_1 ... w_{n+q})^{-1}, |w_{-n+q+1} ... w_0| }`.
pub fn hypercyclic_max_term(w: &WeightSequence, n: u64, q: u64) -> Result<Magnitude> {
    check_nq(n, q)?;
    let right = window_product(w, 1, n + q).recip().ok_or_else(|| Error::NotInvertible("zero weight".into()))?;
    let left = window_product(w, -(n as i64) + q as i64 + 1, n - q);
    Ok(if right > left { right } else { left })
}

/// `|w_{-n+q+1} ... w_0| / |w_1 ... w_{n+q}|`.
pub fn supercyclic_ratio(w: &WeightSequence, n: u64, q: u64) -> Result<Magnitude> {
    check_nq(n, q)?;
    let den = window_product(w, 1, n + q);
    if den.is_zero {
        return Err(Error::NotInvertible("zero weight".into()));
    }
    Ok(window_product(w, -(n as i64) + q as i64 + 1, n - q) / den)
}

fn search_pairs(cfg: &ClassifierConfig, f: impl Fn(u64, u64) -> Result<Magnitude>) -> Result<Option<Vec<CyclicPair>>> {
    let mut pairs = Vec::new();
    for q in 1..=cfg.q_max {
        let mut hit = None;
        for n in q + 1..=cfg.horizon {
            let v = f(n, q)?;
            if v.at_most(cfg.eta) {
                hit = Some(CyclicPair { q, n, log_value: v.ln() });
                break;
            }
        }
        match hit {
            Some(p) => pairs.push(p),
            None => return Ok(None),
        }
    }
    Ok(Some(pairs))
}

/// Hypercyclicity of the invertible bilateral backward shift `B_w`.
pub fn hypercyclicity_check(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<Verdict> {
    require_invertible_bilateral(w)?;
    if w.is_periodic() {
        let t = tail_summary(w)?;
        let tol = cfg.gm_tolerance;
        // the first term stays away from 0 unless the right tail expands,
        // the second unless the left tail contracts
        let right_stuck = t.right_vs_one(tol).above() == Some(false);
        let left_stuck = t.left_vs_one(tol).and_then(Cmp::below) == Some(false);
        if right_stuck || left_stuck {
            return Ok(Verdict::exact(false, Some(Witness::Tails { log_gm_left: t.log_gm_left, log_gm_right: t.log_gm_right })));
        }
    }
    Ok(match search_pairs(cfg, |n, q| hypercyclic_max_term(w, n, q))? {
        Some(pairs) => Verdict::witnessed(Witness::Cyclic { pairs }, cfg.horizon),
        None => Verdict::searched_out(cfg.horizon),
    })
}

/// Supercyclicity of the invertible bilateral backward shift `B_w`.
pub fn supercyclicity_check(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<Verdict> {
    require_invertible_bilateral(w)?;
    if w.is_periodic() {
        let t = tail_summary(w)?;
        // the ratio behaves like (gm_left / gm_right)^n
        if t.left_vs_right(cfg.gm_tolerance).and_then(Cmp::below) == Some(false) {
            return Ok(Verdict::exact(false, Some(Witness::Tails { log_gm_left: t.log_gm_left, log_gm_right: t.log_gm_right })));
        }
    }
    Ok(match search_pairs(cfg, |n, q| supercyclic_ratio(w, n, q))? {
        Some(pairs) => Verdict::witnessed(Witness::Cyclic { pairs }, cfg.horizon),
        None => Verdict::searched_out(cfg.horizon),
    })
}

/// Geometric rate and constant fitted to `log_norms[n]` on `burn..=horizon`:
/// the rate is the average slope, the constant the worst excess over it.
fn fit_decay(log_norm: impl Fn(u64) -> f64, burn: u64, horizon: u64) -> (f64, f64) {
    let (a, b) = (log_norm(burn), log_norm(horizon));
    let slope = (b - a) / (horizon - burn) as f64;
    let c = (burn..=horizon).map(|n| log_norm(n) - slope * n as f64).fold(f64::NEG_INFINITY, f64::max);
    (slope.exp(), c.exp())
}

/// Geometric decay of `F_w^{+-n} e_j` for the canonical vectors near 0.
pub fn frequent_hc_check(w: &WeightSequence, cfg: &ClassifierConfig) -> Result<Verdict> {
    require_invertible_bilateral(w)?;
    if w.is_periodic() {
        let t = tail_summary(w)?;
        let tol = cfg.gm_tolerance;
        let forward_stuck = t.right_vs_one(tol).below() == Some(false);
        let backward_stuck = t.left_vs_one(tol).and_then(Cmp::above) == Some(false);
        if forward_stuck || backward_stuck {
            return Ok(Verdict::exact(false, Some(Witness::Tails { log_gm_left: t.log_gm_left, log_gm_right: t.log_gm_right })));
        }
    }
    let mut vectors = Vec::new();
    for j in -cfg.fhc_bound..=cfg.fhc_bound {
        let (forward_rate, forward_constant) = fit_decay(|n| window_product(w, j, n).ln(), cfg.burn_in, cfg.horizon);
        let (backward_rate, backward_constant) =
            fit_decay(|n| -window_product(w, j - n as i64, n).ln(), cfg.burn_in, cfg.horizon);
        if !(forward_rate < 1.0 && backward_rate < 1.0) {
            return Ok(Verdict::searched_out(cfg.horizon));
        }
        vectors.push(Decay { j, forward_rate, forward_constant, backward_rate, backward_constant });
    }
    Ok(Verdict::witnessed(Witness::Decay { vectors }, cfg.horizon))
}
