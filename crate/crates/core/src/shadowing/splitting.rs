use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_lab::{hyperbolic_splitting, MatrixOp, SpectralSplit, DEFAULT_BAND};
use crate::sequence_space::{window_product, Direction, ShiftOperator, WeightSequence};

pub const N_CHECK: usize = 64;
/// Smallest `t` reported; keeps `t^r` representable when every power vanishes.
const T_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cut", rename_all = "snake_case")]
pub enum CutKind {
    /// `M = {x : x_n = 0 for n < index}`, `N = {x : x_n = 0 for n >= index}`.
    At { index: i64 },
    /// `M` is the whole space.
    AllStable,
    /// `N` is the whole space.
    AllUnstable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitKind {
    CoordinateCut { cut: CutKind },
    Spectral { stable_dim: usize, unstable_dim: usize, margin_stable: f64, margin_unstable: f64 },
}

/// A splitting `X = M + N` with `||(T|_M)^n|| <= C t^n` and
/// `||(T^{-1}|_N)^n|| <= C t^n` for every `n >= 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Splitting {
    pub kind: SplitKind,
    /// Bound on both projection norms.
    pub beta: f64,
    pub c: f64,
    pub t: f64,
    /// Exponent whose power norm fixed `t`.
    pub n0: usize,
    pub n_check: usize,
    /// `||(T|_M)^n||`, `n = 0..=n_check`.
    pub stable_norms: Vec<f64>,
    /// `||(T^{-1}|_N)^n||`, `n = 0..=n_check`.
    pub unstable_norms: Vec<f64>,
    #[serde(skip)]
    spectral: Option<Box<SpectralSplit>>,
}

impl Splitting {
    pub fn spectral(&self) -> Result<&SpectralSplit> {
        self.spectral
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("coordinate splitting given to a matrix".into()))
    }

    /// `2 beta C / (1 - t)`.
    pub fn sup_constant(&self) -> f64 {
        2.0 * self.beta * self.c / (1.0 - self.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ShadowMode {
    Sup,
    Lp { p: f64 },
}

/// Per-component constant `L` with `sum ||y^(i)||^p <= L sum ||z^(i)||^p`.
pub fn lp_constant(c: f64, t: f64, p: f64) -> f64 {
    if p == 1.0 {
        return c / (1.0 - t);
    }
    let q = p / (p - 1.0);
    c.powf(p) * (1.0 / (1.0 - t.powf(q / 2.0))).powf(p / q) / (1.0 - t.powf(p / 2.0))
}

pub fn shadow_constant(s: &Splitting, mode: ShadowMode) -> f64 {
    match mode {
        ShadowMode::Sup => s.sup_constant(),
        ShadowMode::Lp { p } => lp_constant(s.c, s.t, p),
    }
}

/// Rate certificate from power norms: with `b_0 = 1`, `t = b_{n0}^{1/n0}` and
/// `C = max_{r < n0} b_r / t^r` bound `b_n <= C t^n` for all `n`, since power
/// norms are sub-multiplicative. Picks the `n0` minimizing `C / (1 - t)`.
pub fn certify_rate(b: &[f64]) -> Option<(f64, f64, usize)> {
    let mut best: Option<(f64, f64, usize)> = None;
    for n0 in 1..b.len() {
        if !(b[n0] < 1.0) {
            continue;
        }
        let t = b[n0].powf(1.0 / n0 as f64).max(T_FLOOR);
        if t >= 1.0 {
            continue;
        }
        let c = (0..n0).map(|r| b[r] / t.powi(r as i32)).fold(1.0, f64::max);
        if best.is_none_or(|(bc, bt, _)| c / (1.0 - t) < bc / (1.0 - bt)) {
            best = Some((c, t, n0));
        }
    }
    best
}

fn period_lengths(w: &WeightSequence) -> (i64, i64) {
    (w.left_period.as_ref().map_or(0, |l| l.len() as i64), w.right_period.len() as i64)
}

/// `(min, max)` of `ln window_product(w, k, n)` over `k` in `[lo, hi]`;
/// an open end is reduced to the finitely many phases of the periodic tail.
pub fn log_window_extremes(w: &WeightSequence, n: u64, lo: Option<i64>, hi: Option<i64>) -> (f64, f64) {
    let (len_l, len_r) = period_lengths(w);
    let (cs, ce) = (w.core_start(), w.core_end());
    let ni = n as i64;
    let lo = match lo {
        Some(l) => l,
        None => hi.unwrap_or(cs - ni).min(cs - ni) - len_l + 1,
    };
    let hi = match hi {
        Some(h) => h,
        None => lo.max(ce) + len_r - 1,
    };
    let mut out = (f64::INFINITY, f64::NEG_INFINITY);
    for k in lo..=hi {
        let v = window_product(w, k, n).ln();
        out = (out.0.min(v), out.1.max(v));
    }
    out
}

fn require_forward_bilateral(op: &ShiftOperator) -> Result<&WeightSequence> {
    let w = &op.weights;
    if !w.is_bilateral() {
        return Err(Error::NotSplittable("unilateral shifts are not invertible".into()));
    }
    if !w.invertible {
        return Err(Error::NotSplittable(format!("zero weights at {:?}", w.zero_weights)));
    }
    if !w.is_periodic() {
        return Err(Error::NotSplittable("power bounds need periodic tails".into()));
    }
    if op.direction != Direction::Forward {
        return Err(Error::NotSplittable("coordinate splittings are built for forward shifts".into()));
    }
    Ok(w)
}

/// Power norms on both parts of a coordinate cut.
fn cut_norms(w: &WeightSequence, cut: CutKind, n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![1.0];
    let mut d = vec![1.0];
    for n in 1..=n_max as u64 {
        let ni = n as i64;
        // T^n e_k = window(k, n) e_{k+n}; T^{-n} e_k = e_{k-n} / window(k-n, n)
        let (sa, sd) = match cut {
            CutKind::At { index } => (
                log_window_extremes(w, n, Some(index), None).1.exp(),
                (-log_window_extremes(w, n, None, Some(index - 1 - ni)).0).exp(),
            ),
            CutKind::AllStable => (log_window_extremes(w, n, None, None).1.exp(), 0.0),
            CutKind::AllUnstable => (0.0, (-log_window_extremes(w, n, None, None).0).exp()),
        };
        a.push(sa);
        d.push(sd);
    }
    (a, d)
}

/// Coordinate cut with the smallest certified `K`, searched over
/// `AllStable`, `AllUnstable` and every cut in the core.
pub fn shift_splitting(op: &ShiftOperator) -> Result<Splitting> {
    let w = require_forward_bilateral(op)?;
    let mut candidates = vec![CutKind::AllStable, CutKind::AllUnstable];
    candidates.extend((w.core_start()..=w.core_end()).map(|index| CutKind::At { index }));
    let mut best: Option<Splitting> = None;
    for cut in candidates {
        let (a, d) = cut_norms(w, cut, N_CHECK);
        let b: Vec<f64> = a.iter().zip(&d).map(|(x, y)| x.max(*y)).collect();
        if let Some((c, t, n0)) = certify_rate(&b) {
            let s = Splitting {
                kind: SplitKind::CoordinateCut { cut },
                beta: 1.0,
                c,
                t,
                n0,
                n_check: N_CHECK,
                stable_norms: a,
                unstable_norms: d,
                spectral: None,
            };
            if best.as_ref().is_none_or(|bs| s.sup_constant() < bs.sup_constant()) {
                best = Some(s);
            }
        }
    }
    best.ok_or_else(|| {
        Error::NotSplittable(format!(
            "no coordinate cut in [{}, {}] contracts within {N_CHECK} steps",
            w.core_start(),
            w.core_end()
        ))
    })
}

pub fn matrix_splitting(op: &MatrixOp) -> Result<Splitting> {
    let sp = hyperbolic_splitting(op, DEFAULT_BAND).map_err(|e| match e {
        Error::NotHyperbolic(detail) => Error::NotSplittable(detail),
        other => other,
    })?;
    let a = sp.stable_power_norms(N_CHECK);
    let d = sp.unstable_inverse_power_norms(N_CHECK);
    let b: Vec<f64> = a.iter().zip(&d).map(|(x, y)| x.max(*y)).collect();
    let (c, t, n0) =
        certify_rate(&b).ok_or_else(|| Error::NotSplittable(format!("power norms do not drop below 1 within {N_CHECK} steps")))?;
    Ok(Splitting {
        kind: SplitKind::Spectral {
            stable_dim: sp.stable_dim(),
            unstable_dim: sp.unstable_dim(),
            margin_stable: sp.margin_stable,
            margin_unstable: sp.margin_unstable,
        },
        beta: sp.beta().max(1.0),
        c,
        t,
        n0,
        n_check: N_CHECK,
        stable_norms: a,
        unstable_norms: d,
        spectral: Some(Box::new(sp)),
    })
}

/// `||T^n||` for a shift with periodic tails.
pub(crate) fn shift_power_norms(op: &ShiftOperator, n_max: usize) -> Result<Vec<f64>> {
    let w = &op.weights;
    if !w.is_periodic() {
        return Err(Error::NotPeriodic("power norms need periodic tails".into()));
    }
    let lo = if w.is_bilateral() {
        None
    } else {
        // backward powers annihilate e_1, so their windows start one later
        Some(w.first_index() + i64::from(op.direction == Direction::Backward))
    };
    let mut out = vec![1.0];
    for n in 1..=n_max as u64 {
        out.push(log_window_extremes(w, n, lo, None).1.exp());
    }
    Ok(out)
}
