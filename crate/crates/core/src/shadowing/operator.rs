use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::splitting::{shift_power_norms, CutKind, SplitKind, Splitting};
use crate::error::{Error, Result};
use crate::matrix_lab::{spectral_norm, CMatrix, CVector, MatrixOp};
use crate::sequence_space::{BiVector, ShiftOperator};

/// Sparse JSON form of a vector: index to `[re, im]`.
pub type SparseCoords = BTreeMap<i64, [f64; 2]>;

/// What the solvers need from an operator.
pub trait LinearOperator {
    type Vector: Clone + std::fmt::Debug;

    fn apply(&self, x: &Self::Vector) -> Result<Self::Vector>;
    fn apply_inverse(&self, x: &Self::Vector) -> Result<Self::Vector>;
    fn is_invertible(&self) -> bool;
    fn norm(&self, x: &Self::Vector) -> f64;
    fn zero(&self) -> Self::Vector;
    /// `x + s y`.
    fn axpy(&self, x: &Self::Vector, s: Complex64, y: &Self::Vector) -> Self::Vector;
    /// A random real vector of norm one supported on `band` (ignored by matrices).
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R, band: (i64, i64)) -> Self::Vector;
    fn max_imag(&self, x: &Self::Vector) -> f64;
    fn to_sparse(&self, x: &Self::Vector) -> SparseCoords;
    fn from_sparse(&self, coords: &SparseCoords) -> Result<Self::Vector>;
    /// `||T^n||` for `n = 0..=n_max`.
    fn power_norms(&self, n_max: usize) -> Result<Vec<f64>>;

    fn scale(&self, x: &Self::Vector, s: Complex64) -> Self::Vector {
        self.axpy(&self.zero(), s, x)
    }

    fn sub(&self, x: &Self::Vector, y: &Self::Vector) -> Self::Vector {
        self.axpy(x, Complex64::new(-1.0, 0.0), y)
    }
}

/// Operators that admit a stable/unstable splitting.
pub trait Splittable: LinearOperator {
    fn build_splitting(&self) -> Result<Splitting>;
    /// `(x^(1), x^(2))` with `x^(1)` in the stable and `x^(2)` in the unstable part.
    fn components(&self, s: &Splitting, x: &Self::Vector) -> Result<(Self::Vector, Self::Vector)>;
    /// `T` restricted to the stable part.
    fn stable_apply(&self, s: &Splitting, x: &Self::Vector) -> Result<Self::Vector>;
    /// `T^{-1}` restricted to the unstable part.
    fn unstable_inverse(&self, s: &Splitting, x: &Self::Vector) -> Result<Self::Vector>;
}

impl LinearOperator for ShiftOperator {
    type Vector = BiVector;

    fn apply(&self, x: &BiVector) -> Result<BiVector> {
        ShiftOperator::apply(self, x)
    }

    fn apply_inverse(&self, x: &BiVector) -> Result<BiVector> {
        ShiftOperator::apply_inverse(self, x)
    }

    fn is_invertible(&self) -> bool {
        ShiftOperator::is_invertible(self)
    }

    fn norm(&self, x: &BiVector) -> f64 {
        ShiftOperator::norm(self, x)
    }

    fn zero(&self) -> BiVector {
        BiVector::zero()
    }

    fn axpy(&self, x: &BiVector, s: Complex64, y: &BiVector) -> BiVector {
        x.axpy(s, y)
    }

    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R, band: (i64, i64)) -> BiVector {
        let lo = band.0.max(self.weights.first_index());
        let hi = band.1.max(lo);
        let values: Vec<f64> = (lo..=hi).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let v = BiVector::from_reals(lo, &values);
        let r = self.norm(&v);
        if r == 0.0 {
            BiVector::basis(lo)
        } else {
            v.scale(Complex64::new(1.0 / r, 0.0))
        }
    }

    fn max_imag(&self, x: &BiVector) -> f64 {
        x.max_imag()
    }

    fn to_sparse(&self, x: &BiVector) -> SparseCoords {
        x.iter().map(|(k, z)| (k, [z.re, z.im])).collect()
    }

    fn from_sparse(&self, coords: &SparseCoords) -> Result<BiVector> {
        if let Some((&k, _)) = coords.iter().next() {
            if k < self.weights.first_index() {
                return Err(Error::InvalidArgument(format!("index {k} lies outside the unilateral index set")));
            }
        }
        Ok(BiVector::from_entries(coords.iter().map(|(&k, &[re, im])| (k, Complex64::new(re, im)))))
    }

    fn power_norms(&self, n_max: usize) -> Result<Vec<f64>> {
        shift_power_norms(self, n_max)
    }
}

impl Splittable for ShiftOperator {
    fn build_splitting(&self) -> Result<Splitting> {
        super::splitting::shift_splitting(self)
    }

    fn components(&self, s: &Splitting, x: &BiVector) -> Result<(BiVector, BiVector)> {
        match &s.kind {
            SplitKind::CoordinateCut { cut: CutKind::At { index } } => Ok(x.split_at(*index)),
            SplitKind::CoordinateCut { cut: CutKind::AllStable } => Ok((x.clone(), BiVector::zero())),
            SplitKind::CoordinateCut { cut: CutKind::AllUnstable } => Ok((BiVector::zero(), x.clone())),
            SplitKind::Spectral { .. } => Err(Error::InvalidArgument("spectral splitting given to a shift".into())),
        }
    }

    fn stable_apply(&self, _s: &Splitting, x: &BiVector) -> Result<BiVector> {
        ShiftOperator::apply(self, x)
    }

    fn unstable_inverse(&self, _s: &Splitting, x: &BiVector) -> Result<BiVector> {
        if x.is_zero() {
            return Ok(BiVector::zero());
        }
        ShiftOperator::apply_inverse(self, x)
    }
}

impl LinearOperator for MatrixOp {
    type Vector = CVector;

    fn apply(&self, x: &CVector) -> Result<CVector> {
        MatrixOp::apply(self, x)
    }

    fn apply_inverse(&self, x: &CVector) -> Result<CVector> {
        MatrixOp::apply_inverse(self, x)
    }

    fn is_invertible(&self) -> bool {
        MatrixOp::is_invertible(self)
    }

    fn norm(&self, x: &CVector) -> f64 {
        x.norm()
    }

    fn zero(&self) -> CVector {
        CVector::zeros(self.dim())
    }

    fn axpy(&self, x: &CVector, s: Complex64, y: &CVector) -> CVector {
        x + y * s
    }

    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R, _band: (i64, i64)) -> CVector {
        let v = CVector::from_fn(self.dim(), |_, _| Complex64::new(rng.random_range(-1.0..=1.0), 0.0));
        let r = v.norm();
        if r == 0.0 {
            let mut e = CVector::zeros(self.dim());
            e[0] = Complex64::new(1.0, 0.0);
            e
        } else {
            v / Complex64::new(r, 0.0)
        }
    }

    fn max_imag(&self, x: &CVector) -> f64 {
        x.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    fn to_sparse(&self, x: &CVector) -> SparseCoords {
        x.iter()
            .enumerate()
            .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
            .map(|(i, z)| (i as i64, [z.re, z.im]))
            .collect()
    }

    fn from_sparse(&self, coords: &SparseCoords) -> Result<CVector> {
        let mut v = CVector::zeros(self.dim());
        for (&i, &[re, im]) in coords {
            if i < 0 || i as usize >= self.dim() {
                return Err(Error::InvalidArgument(format!("coordinate {i} outside 0..{}", self.dim())));
            }
            v[i as usize] = Complex64::new(re, im);
        }
        Ok(v)
    }

    fn power_norms(&self, n_max: usize) -> Result<Vec<f64>> {
        let mut out = vec![1.0];
        let mut p: CMatrix = self.matrix().clone();
        for _ in 1..=n_max {
            out.push(spectral_norm(&p));
            p = &p * self.matrix();
        }
        Ok(out)
    }
}

impl Splittable for MatrixOp {
    fn build_splitting(&self) -> Result<Splitting> {
        super::splitting::matrix_splitting(self)
    }

    fn components(&self, s: &Splitting, x: &CVector) -> Result<(CVector, CVector)> {
        self.check_len(x)?;
        Ok(s.spectral()?.components(x))
    }

    fn stable_apply(&self, s: &Splitting, x: &CVector) -> Result<CVector> {
        let sp = s.spectral()?;
        let coords = sp.stable_basis.adjoint() * x;
        Ok(&sp.stable_basis * (&sp.b_s * coords))
    }

    fn unstable_inverse(&self, s: &Splitting, x: &CVector) -> Result<CVector> {
        Ok(s.spectral()?.unstable_inverse(x))
    }
}
