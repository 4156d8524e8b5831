use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{c, CVector, MatrixOp};
use super::schur::cluster_projection;
use super::spectra::{left_eigenvector, unimodular_eigenvalue, CLUSTER_RADIUS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Fd1Mode {
    /// Defects `1/(n+1)`: `p`-summable for `p > 1`, bounded, vanishing.
    Lp { p: f64 },
    /// Defects summable with sum `2 - 1/N`.
    L1,
    /// Constant defect `delta` on the forward half-line.
    Positive { delta: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence {
    /// `min_s max_{0<=n<=N} |<u, x_n> - s|`, a lower bound on the sup error of every base point.
    pub minimax: f64,
    /// Radius in `|<u, x>|` for which `radius_bound` applies at `n = N`.
    pub radius: Option<f64>,
    pub radius_bound: Option<f64>,
    /// `min_s sum_n |<u, x_n> - s|`, a lower bound on the summed error.
    pub sum_lower: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fd1Certificate {
    pub mode: Fd1Mode,
    pub lambda: [f64; 2],
    pub n_max: u64,
    #[serde(skip)]
    pub points: Vec<CVector>,
    #[serde(skip)]
    pub left_vector: CVector,
    /// Scalar profile `a_n` with `<u, x_n> = lambda^n a_n * pairing`.
    pub profile: Vec<f64>,
    /// `||x_{n+1} - A x_n||` for `n = 0..N-1`.
    pub defect_norms: Vec<f64>,
    /// `sum ||z||^p`, `sum ||z||`, or `max ||z||` depending on the mode.
    pub defect_measure: f64,
    /// The bound `defect_measure` must respect: `zeta(p)`, `2`, or `delta`.
    pub defect_limit: f64,
    /// `<u, v>` for the unit defect direction `v`.
    pub pairing: f64,
    pub eigen_residual: f64,
    pub max_defect_mismatch: f64,
    pub max_profile_mismatch: f64,
    pub divergence: Divergence,
    pub verified: bool,
}

/// `sum_{n>=1} n^{-p}` for `p > 1`.
pub fn zeta(p: f64) -> f64 {
    if p == 2.0 {
        return std::f64::consts::PI * std::f64::consts::PI / 6.0;
    }
    let m = 2000u32;
    let head: f64 = (1..m).map(|n| (n as f64).powf(-p)).sum();
    let mf = m as f64;
    head + mf.powf(1.0 - p) / (p - 1.0) + 0.5 * mf.powf(-p) + p / 12.0 * mf.powf(-p - 1.0)
}

pub fn harmonic(n: u64) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// `min_s sum_i |a_i - s|` over real `s`, attained at a median.
fn l1_median_spread(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v[v.len() / 2];
    v.iter().map(|a| (a - m).abs()).sum()
}

/// Built on a unimodular eigenvalue `lambda`: with `u` a unit left
/// eigenvector and `v` the normalized spectral projection of `u` onto the
/// generalized eigenspace, `x_0 = 0` and
/// `x_{n+1} = A x_n + lambda^{n+1} g_n v`.
/// Then `<u, x_n> = lambda^n a_n <u, v>` with `a_{n+1} = a_n + g_n`, so every
/// base point pays `|a_n <u, v> - s|` at time `n`.
pub fn fd1_counterexample(op: &MatrixOp, mode: Fd1Mode, n_max: u64, band: f64) -> Result<Fd1Certificate> {
    match mode {
        Fd1Mode::Lp { p } if !(p > 1.0 && p.is_finite()) => {
            return Err(Error::InvalidArgument(format!("lp mode needs 1 < p < inf, got {p}")))
        }
        Fd1Mode::Positive { delta } if !(delta > 0.0 && delta.is_finite()) => {
            return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")))
        }
        _ => {}
    }
    if n_max < 2 {
        return Err(Error::InvalidArgument("window must have N >= 2".into()));
    }
    let lambda = unimodular_eigenvalue(op, band).ok_or(Error::NoUnimodularEigenvalue)?;
    let (u, eigen_residual) = left_eigenvector(op, lambda);
    let radius = CLUSTER_RADIUS * 4.0;
    let (proj, _) = cluster_projection(op, |mu| (mu - lambda).norm() <= radius)?;
    let v = &proj * &u;
    let v_hat = &v / c(v.norm());
    let pairing = (u.adjoint() * &v_hat)[0].re;

    let n = n_max as usize;
    let (g, a): (Vec<f64>, Vec<f64>) = match mode {
        Fd1Mode::Lp { .. } => {
            let g: Vec<f64> = (0..n).map(|k| 1.0 / (k + 1) as f64).collect();
            let mut a = vec![0.0];
            for k in 0..n {
                a.push(a[k] + g[k]);
            }
            (g, a)
        }
        Fd1Mode::L1 => {
            let a: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { 1.0 / k as f64 }).collect();
            ((0..n).map(|k| a[k + 1] - a[k]).collect(), a)
        }
        Fd1Mode::Positive { delta } => {
            ((0..n).map(|_| delta).collect(), (0..=n).map(|k| k as f64 * delta).collect())
        }
    };

    let theta = lambda.arg();
    let phase = |k: usize| Complex64::from_polar(1.0, theta * k as f64);
    let mut points = vec![CVector::zeros(op.dim())];
    let mut defect_norms = Vec::with_capacity(n);
    let mut max_defect_mismatch: f64 = 0.0;
    let mut max_profile_mismatch: f64 = 0.0;
    for k in 0..n {
        let image = op.matrix() * &points[k];
        let next = &image + &v_hat * (phase(k + 1) * g[k]);
        let defect = (&next - &image).norm();
        let scale = if matches!(mode, Fd1Mode::Positive { .. }) { image.norm().max(1.0) } else { g[k].abs().max(1e-300) };
        max_defect_mismatch = max_defect_mismatch.max((defect - g[k].abs()).abs() / scale);
        defect_norms.push(defect);
        let coeff = (u.adjoint() * &next)[0];
        let expect = phase(k + 1) * (a[k + 1] * pairing);
        max_profile_mismatch = max_profile_mismatch.max((coeff - expect).norm() / a[k + 1].abs().max(1.0));
        points.push(next);
    }

    let (defect_measure, defect_limit, tol) = match mode {
        Fd1Mode::Lp { p } => (defect_norms.iter().map(|d| d.powf(p)).sum(), zeta(p), 1e-9),
        Fd1Mode::L1 => (defect_norms.iter().sum(), 2.0, 1e-9),
        Fd1Mode::Positive { delta } => (defect_norms.iter().fold(0.0, |m: f64, &d| m.max(d)), delta, 1e-12),
    };
    let summable = match mode {
        // boundedness is the per-step mismatch check
        Fd1Mode::Positive { .. } => true,
        _ => defect_measure < defect_limit,
    };

    let lo = a.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let hi = a.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let mut divergence = Divergence { minimax: 0.5 * (hi - lo) * pairing, radius: None, radius_bound: None, sum_lower: None };
    match mode {
        Fd1Mode::Lp { .. } => {
            let half = harmonic(n_max / 2);
            divergence.radius = Some(half * pairing);
            divergence.radius_bound = Some((a[n] - half) * pairing);
        }
        Fd1Mode::L1 => divergence.sum_lower = Some(l1_median_spread(&a) * pairing),
        Fd1Mode::Positive { .. } => {}
    }

    Ok(Fd1Certificate {
        mode,
        lambda: [lambda.re, lambda.im],
        n_max,
        points,
        left_vector: u,
        profile: a,
        defect_norms,
        defect_measure,
        defect_limit,
        pairing,
        eigen_residual,
        max_defect_mismatch,
        max_profile_mismatch,
        divergence,
        verified: summable && max_defect_mismatch <= tol && max_profile_mismatch <= 1e-9 && eigen_residual <= 1e-9,
    })
}
