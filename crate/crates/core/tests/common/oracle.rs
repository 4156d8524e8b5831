//! Horizon-based numeric oracle, written against the definitions directly.
//!
//! Products come from a plain prefix table of `ln |w_k|` built by calling
//! `weight(k)` one index at a time; nothing here goes through the library's
//! window products or tail summaries.

use linshadow::sequence_space::{Direction, Support, WeightSequence};

use super::Entry;

pub const HORIZON: i64 = 200;
/// A product this large within the horizon counts as a witness for an infinite supremum.
pub const BIG: f64 = 20.0 * std::f64::consts::LN_2;
const SPAN: i64 = 3 * HORIZON;
const ETA: f64 = 1.0 / 128.0;

pub struct Table {
    lo: i64,
    prefix: Vec<f64>,
    zeros: Vec<u32>,
    pub unilateral: bool,
    pub periodic: bool,
    pub has_zero: bool,
}

impl Table {
    pub fn new(w: &WeightSequence) -> Self {
        Self::with_span(w, SPAN)
    }

    /// Table covering `[-span, span]`.
    pub fn with_span(w: &WeightSequence, span: i64) -> Self {
        let unilateral = w.support == Support::Unilateral;
        let lo = if unilateral { 1 } else { -span };
        let mut prefix = vec![0.0];
        let mut zeros = vec![0];
        for k in lo..=span {
            let m = w.weight(k).norm();
            let (l, z) = if m == 0.0 { (0.0, 1) } else { (m.ln(), 0) };
            prefix.push(prefix.last().unwrap() + l);
            zeros.push(zeros.last().unwrap() + z);
        }
        Table { lo, prefix, zeros, unilateral, periodic: w.is_periodic(), has_zero: !w.zero_weights.is_empty() }
    }

    /// `ln |w_k ... w_{k+n-1}|`, `-inf` if a zero weight is inside.
    pub fn log_window(&self, k: i64, n: i64) -> f64 {
        let a = (k - self.lo) as usize;
        let b = (k + n - self.lo) as usize;
        if self.zeros[b] > self.zeros[a] {
            f64::NEG_INFINITY
        } else {
            self.prefix[b] - self.prefix[a]
        }
    }

    fn k_range(&self) -> std::ops::RangeInclusive<i64> {
        let lo = if self.unilateral { 1 } else { -HORIZON };
        lo..=HORIZON
    }
}

fn sup_reaches(f: impl Fn(i64) -> f64) -> bool {
    (1..=HORIZON).any(|n| f(n) >= BIG)
}

fn inf_reaches(t: &Table, ks: impl Fn() -> Vec<i64>, f: impl Fn(i64, i64) -> f64) -> bool {
    let ks = ks();
    t.periodic && (1..=HORIZON).any(|n| ks.iter().all(|&k| f(k, n) >= BIG))
}

fn witness(b: bool) -> Option<bool> {
    b.then_some(true)
}

/// Oracle answer for the classifier key, or `None` when no witness is reached.
pub fn oracle(e: &Entry, key: &str) -> Option<bool> {
    let t = Table::new(&e.weights);
    let bilateral_invertible = !t.unilateral && !t.has_zero;
    let right = |n: i64| t.log_window(1, n);
    let left_inv = |n: i64| -t.log_window(-n, n);
    let left = |n: i64| t.log_window(-n, n);
    let all_k = || t.k_range().collect::<Vec<_>>();
    match (e.direction, key) {
        (Direction::Forward, "expansive") if bilateral_invertible => witness(sup_reaches(right) || sup_reaches(left_inv)),
        (Direction::Forward, "pos_expansive") => {
            if t.has_zero {
                Some(false)
            } else {
                witness(sup_reaches(right))
            }
        }
        (Direction::Forward, "unif_pos_expansive") => {
            if t.has_zero {
                return Some(false);
            }
            witness(inf_reaches(&t, all_k, |k, n| t.log_window(k, n)))
        }
        (Direction::Forward, "uniformly_expansive") if bilateral_invertible => {
            let first = inf_reaches(&t, all_k, |k, n| t.log_window(k, n));
            let second = inf_reaches(&t, all_k, |k, n| -t.log_window(k - n, n));
            let third = {
                let pos = || (1..=HORIZON).collect::<Vec<_>>();
                let neg = || (-HORIZON..=-1).collect::<Vec<_>>();
                inf_reaches(&t, pos, |k, n| t.log_window(k, n)) && inf_reaches(&t, neg, |k, n| -t.log_window(k - n, n))
            };
            witness(first || second || third)
        }
        (Direction::Forward, "hyperbolic") if t.periodic => {
            let ks = all_k();
            let contracts = (1..=HORIZON).any(|n| ks.iter().all(|&k| t.log_window(k, n) < -1e-6 * n as f64));
            let dilates = bilateral_invertible
                && (1..=HORIZON).any(|n| ks.iter().all(|&k| -t.log_window(k, n) < -1e-6 * n as f64));
            witness(contracts || dilates)
        }
        (Direction::Backward, "pos_expansive") if !t.unilateral => {
            if t.has_zero {
                Some(false)
            } else {
                witness(sup_reaches(left))
            }
        }
        (Direction::Backward, "unif_pos_expansive") if !t.unilateral => {
            if t.has_zero {
                return Some(false);
            }
            witness(inf_reaches(&t, all_k, |k, n| t.log_window(k - n + 1, n)))
        }
        (Direction::Backward, "hypercyclic") if bilateral_invertible => witness((1..=3).all(|q| {
            (q + 1..=HORIZON).any(|n| {
                let a = -t.log_window(1, n + q);
                let b = t.log_window(-n + q + 1, n - q);
                a.max(b) <= ETA.ln()
            })
        })),
        (Direction::Backward, "supercyclic") if bilateral_invertible => witness((1..=3).all(|q| {
            (q + 1..=HORIZON).any(|n| t.log_window(-n + q + 1, n - q) - t.log_window(1, n + q) <= ETA.ln())
        })),
        _ => None,
    }
}

pub const KEYS: [&str; 7] =
    ["expansive", "pos_expansive", "unif_pos_expansive", "uniformly_expansive", "hyperbolic", "hypercyclic", "supercyclic"];
