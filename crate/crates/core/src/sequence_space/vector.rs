use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::space::SpaceSpec;

/// Finitely supported bilateral sequence of complex scalars.
///
/// Stored densely between the first and last nonzero coordinate. Iteration
/// and serialization only ever expose nonzero entries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BiVector {
    offset: i64,
    data: Vec<Complex64>,
}

impl BiVector {
    pub fn zero() -> Self {
        BiVector::default()
    }

    /// The canonical unit vector `e_k`.
    pub fn basis(k: i64) -> Self {
        BiVector { offset: k, data: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn from_entries<I: IntoIterator<Item = (i64, Complex64)>>(entries: I) -> Self {
        let map: BTreeMap<i64, Complex64> = entries.into_iter().fold(BTreeMap::new(), |mut m, (k, v)| {
            *m.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
            m
        });
        let (Some(&lo), Some(&hi)) = (map.keys().next(), map.keys().next_back()) else {
            return BiVector::zero();
        };
        let mut data = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (k, v) in map {
            data[(k - lo) as usize] = v;
        }
        let mut out = BiVector { offset: lo, data };
        out.trim();
        out
    }

    /// Real coefficients on consecutive indices starting at `start`.
    pub fn from_reals(start: i64, values: &[f64]) -> Self {
        let mut out = BiVector { offset: start, data: values.iter().map(|&v| Complex64::new(v, 0.0)).collect() };
        out.trim();
        out
    }

    pub(crate) fn from_dense(offset: i64, data: Vec<Complex64>) -> Self {
        let mut out = BiVector { offset, data };
        out.trim();
        out
    }

    fn trim(&mut self) {
        let zero = |c: &Complex64| c.re == 0.0 && c.im == 0.0;
        let lead = self.data.iter().take_while(|c| zero(c)).count();
        if lead == self.data.len() {
            self.data.clear();
            self.offset = 0;
            return;
        }
        let tail = self.data.iter().rev().take_while(|c| zero(c)).count();
        self.data.truncate(self.data.len() - tail);
        self.data.drain(..lead);
        self.offset += lead as i64;
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let i = k - self.offset;
        if i < 0 || i >= self.data.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.data[i as usize]
        }
    }

    /// Smallest and largest index carrying a nonzero entry.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.data.is_empty() {
            None
        } else {
            Some((self.offset, self.offset + self.data.len() as i64 - 1))
        }
    }

    /// Nonzero entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(move |(i, &c)| (self.offset + i as i64, c))
    }

    pub fn nnz(&self) -> usize {
        self.iter().count()
    }

    pub fn norm(&self, space: SpaceSpec) -> f64 {
        space.norm_of(self.data.iter().map(|c| c.norm()))
    }

    pub fn scale(&self, s: Complex64) -> BiVector {
        BiVector::from_dense(self.offset, self.data.iter().map(|&c| c * s).collect())
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: Complex64, other: &BiVector) -> BiVector {
        let (Some((a0, a1)), Some((b0, b1))) = (self.support(), other.support()) else {
            return if self.is_zero() { other.scale(s) } else { self.clone() };
        };
        let lo = a0.min(b0);
        let hi = a1.max(b1);
        let data = (lo..=hi).map(|k| self.get(k) + s * other.get(k)).collect();
        BiVector::from_dense(lo, data)
    }

    pub fn add(&self, other: &BiVector) -> BiVector {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &BiVector) -> BiVector {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Coordinates restricted to indices `>= cut` (first) and `< cut` (second).
    pub fn split_at(&self, cut: i64) -> (BiVector, BiVector) {
        let upper = BiVector::from_entries(self.iter().filter(|(k, _)| *k >= cut));
        let lower = BiVector::from_entries(self.iter().filter(|(k, _)| *k < cut));
        (upper, lower)
    }

    /// Shifts every index by `by` and multiplies entry `k` (old index) by `factor(k)`.
    pub(crate) fn reindex_scaled<F: Fn(i64) -> Complex64>(&self, by: i64, factor: F) -> BiVector {
        if self.is_zero() {
            return BiVector::zero();
        }
        let data = self.data.iter().enumerate().map(|(i, &c)| c * factor(self.offset + i as i64)).collect();
        BiVector::from_dense(self.offset + by, data)
    }

    pub(crate) fn drop_below(&self, min_index: i64) -> BiVector {
        BiVector::from_entries(self.iter().filter(|(k, _)| *k >= min_index))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|c| c.im.abs() <= tol)
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

impl Serialize for BiVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<i64, Complex64> = self.iter().collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<i64, Complex64>::deserialize(deserializer)?;
        Ok(BiVector::from_entries(map))
    }
}

/// `||x||` in the given space.
pub fn vector_norm(x: &BiVector, space: SpaceSpec) -> f64 {
    x.norm(space)
}
