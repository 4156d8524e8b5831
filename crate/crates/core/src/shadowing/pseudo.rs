use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::operator::{LinearOperator, SparseCoords};
use crate::error::{Error, Result};

/// Support band of generated shift defects.
pub const DEFAULT_BAND: (i64, i64) = (-3, 3);
/// Generated defect norms range over `[MIN_RATIO * delta, delta]`.
const MIN_RATIO: f64 = 0.25;

/// Finite window of a pseudotrajectory: `x_n` for `n` in `n_min..=n_max`
/// and `z_n = x_{n+1} - T x_n` for `n` in `n_min..n_max`.
#[derive(Clone, Debug)]
pub struct PseudoTrajectory<V> {
    pub n_min: i64,
    pub n_max: i64,
    pub points: Vec<V>,
    pub defects: Vec<V>,
    pub defect_norms: Vec<f64>,
    /// `max ||z_n||`.
    pub delta: f64,
}

fn check_window(n_min: i64, n_max: i64) -> Result<()> {
    if n_min > 0 || n_max < 0 || n_min >= n_max {
        return Err(Error::InvalidArgument(format!("window [{n_min}, {n_max}] must contain 0 and more than one point")));
    }
    Ok(())
}

impl<V: Clone> PseudoTrajectory<V> {
    pub fn point(&self, n: i64) -> &V {
        &self.points[(n - self.n_min) as usize]
    }

    pub fn defect(&self, n: i64) -> &V {
        &self.defects[(n - self.n_min) as usize]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max
    }
}

impl<V: Clone + std::fmt::Debug> PseudoTrajectory<V> {
    /// Defects read off consecutive points.
    pub fn from_points<O: LinearOperator<Vector = V>>(op: &O, n_min: i64, points: Vec<V>) -> Result<Self> {
        let n_max = n_min + points.len() as i64 - 1;
        check_window(n_min, n_max)?;
        let mut defects = Vec::with_capacity(points.len() - 1);
        for i in 0..points.len() - 1 {
            defects.push(op.sub(&points[i + 1], &op.apply(&points[i])?));
        }
        Ok(Self::assemble(op, n_min, points, defects))
    }

    /// Points generated from `x_0` and the defects on `n_min..n_max`: forward
    /// for `n >= 0`, through `T^{-1}` for `n < 0`.
    pub fn from_defects<O: LinearOperator<Vector = V>>(op: &O, x0: &V, n_min: i64, defects: Vec<V>) -> Result<Self> {
        let n_max = n_min + defects.len() as i64;
        check_window(n_min, n_max)?;
        if n_min < 0 && !op.is_invertible() {
            return Err(Error::NotInvertible("the backward leg needs an invertible operator".into()));
        }
        let at = |n: i64| &defects[(n - n_min) as usize];
        let mut forward = vec![x0.clone()];
        for n in 0..n_max {
            let next = op.axpy(&op.apply(&forward[n as usize])?, Complex64::new(1.0, 0.0), at(n));
            forward.push(next);
        }
        let mut backward = Vec::new();
        let mut cur = x0.clone();
        for n in (n_min..0).rev() {
            cur = op.apply_inverse(&op.sub(&cur, at(n)))?;
            backward.push(cur.clone());
        }
        backward.reverse();
        backward.extend(forward);
        Ok(Self::assemble(op, n_min, backward, defects))
    }

    fn assemble<O: LinearOperator<Vector = V>>(op: &O, n_min: i64, points: Vec<V>, defects: Vec<V>) -> Self {
        let defect_norms: Vec<f64> = defects.iter().map(|z| op.norm(z)).collect();
        let delta = defect_norms.iter().fold(0.0, |m: f64, &d| m.max(d));
        PseudoTrajectory { n_min, n_max: n_min + points.len() as i64 - 1, points, defects, defect_norms, delta }
    }

    /// Same `x_0`, every defect multiplied by `s`.
    pub fn rescaled<O: LinearOperator<Vector = V>>(&self, op: &O, s: f64) -> Result<Self> {
        let defects = self.defects.iter().map(|z| op.scale(z, Complex64::new(s, 0.0))).collect();
        Self::from_defects(op, self.point(0), self.n_min, defects)
    }

    /// `max ||(x_{n+1} - T x_n) - z_n||` against the stored defects.
    pub fn defect_drift<O: LinearOperator<Vector = V>>(&self, op: &O) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for n in self.n_min..self.n_max {
            let z = op.sub(self.point(n + 1), &op.apply(self.point(n))?);
            worst = worst.max(op.norm(&op.sub(&z, self.defect(n))));
        }
        Ok(worst)
    }

    pub fn to_json<O: LinearOperator<Vector = V>>(&self, op: &O) -> PseudoJson {
        PseudoJson {
            window: [self.n_min, self.n_max],
            delta: self.delta,
            points: self.points.iter().map(|p| op.to_sparse(p)).collect(),
            defects: self.defects.iter().map(|z| op.to_sparse(z)).collect(),
        }
    }

    /// Rebuilds from points; stored defects are recomputed and ignored.
    pub fn from_json<O: LinearOperator<Vector = V>>(op: &O, raw: &PseudoJson) -> Result<Self> {
        let points = raw.points.iter().map(|p| op.from_sparse(p)).collect::<Result<Vec<_>>>()?;
        if points.len() as i64 != raw.window[1] - raw.window[0] + 1 {
            return Err(Error::InvalidArgument("point count does not match the window".into()));
        }
        Self::from_points(op, raw.window[0], points)
    }
}

/// Serialized form: vectors as sparse `{index: [re, im]}` maps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoJson {
    pub window: [i64; 2],
    pub delta: f64,
    pub points: Vec<SparseCoords>,
    #[serde(default)]
    pub defects: Vec<SparseCoords>,
}

/// Defect norms `amplitude * (1 + |n|)^(-decay_exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectRule {
    pub amplitude: f64,
    pub decay_exponent: f64,
}

impl DefectRule {
    pub fn constant(delta: f64) -> Self {
        DefectRule { amplitude: delta, decay_exponent: 0.0 }
    }

    pub fn at(&self, n: i64) -> f64 {
        self.amplitude * (1.0 + n.unsigned_abs() as f64).powf(-self.decay_exponent)
    }
}

fn random_defects<O: LinearOperator>(
    op: &O,
    window: (i64, i64),
    seed: u64,
    band: (i64, i64),
    size: impl Fn(i64, &mut ChaCha8Rng) -> f64,
) -> Vec<O::Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (window.0..window.1)
        .map(|n| {
            let r = size(n, &mut rng);
            let dir = op.random_unit(&mut rng, band);
            op.scale(&dir, Complex64::new(r, 0.0))
        })
        .collect()
}

/// Random `delta`-pseudotrajectory through `x0`: defect directions are random
/// real unit vectors, norms drawn from `[delta/4, delta]` and rescaled so the
/// largest equals `delta`.
pub fn generate_pseudotrajectory<O: LinearOperator>(
    op: &O,
    x0: &O::Vector,
    delta: f64,
    window: (i64, i64),
    seed: u64,
) -> Result<PseudoTrajectory<O::Vector>> {
    generate_in_band(op, x0, delta, window, seed, DEFAULT_BAND)
}

pub fn generate_in_band<O: LinearOperator>(
    op: &O,
    x0: &O::Vector,
    delta: f64,
    window: (i64, i64),
    seed: u64,
    band: (i64, i64),
) -> Result<PseudoTrajectory<O::Vector>> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be nonnegative, got {delta}")));
    }
    check_window(window.0, window.1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let ratios: Vec<f64> = (window.0..window.1).map(|_| rng.random_range(MIN_RATIO..=1.0)).collect();
    let top = ratios.iter().fold(0.0, |m: f64, &r| m.max(r));
    let defects = random_defects(op, window, seed, band, |n, _| delta * ratios[(n - window.0) as usize] / top);
    PseudoTrajectory::from_defects(op, x0, window.0, defects)
}

/// Random directions with norms following `rule` exactly.
pub fn generate_with_rule<O: LinearOperator>(
    op: &O,
    x0: &O::Vector,
    rule: &DefectRule,
    window: (i64, i64),
    seed: u64,
) -> Result<PseudoTrajectory<O::Vector>> {
    if !(rule.amplitude >= 0.0 && rule.decay_exponent >= 0.0) {
        return Err(Error::InvalidArgument("defect rule needs nonnegative amplitude and exponent".into()));
    }
    check_window(window.0, window.1)?;
    let defects = random_defects(op, window, seed, DEFAULT_BAND, |n, _| rule.at(n));
    PseudoTrajectory::from_defects(op, x0, window.0, defects)
}
