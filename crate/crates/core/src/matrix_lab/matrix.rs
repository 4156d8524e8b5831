use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 64;
pub const DEFAULT_ETA_NORMAL: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().fold(0.0, |a, &b| a.max(b))
}

pub fn euclid(v: &CVector) -> f64 {
    v.norm()
}

/// A dense complex `k x k` matrix with its spectral data computed once.
#[derive(Clone, Debug)]
pub struct MatrixOp {
    a: CMatrix,
    eigenvalues: Vec<Complex64>,
    singular_values: Vec<f64>,
    commutator_ratio: f64,
    eta_normal: f64,
    normal: bool,
    schur_q: CMatrix,
    schur_t: CMatrix,
}

impl MatrixOp {
    pub fn new(a: CMatrix) -> Result<Self> {
        Self::with_eta(a, DEFAULT_ETA_NORMAL)
    }

    pub fn with_eta(a: CMatrix, eta_normal: f64) -> Result<Self> {
        let k = a.nrows();
        if k == 0 || k != a.ncols() {
            return Err(Error::InvalidArgument(format!("matrix must be square and nonempty, got {}x{}", a.nrows(), a.ncols())));
        }
        if k > MAX_DIM {
            return Err(Error::InvalidArgument(format!("dimension {k} exceeds {MAX_DIM}")));
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        if !(eta_normal >= 0.0) {
            return Err(Error::InvalidArgument("eta_normal must be nonnegative".into()));
        }
        let schur = nalgebra::linalg::Schur::new(a.clone());
        let (q, mut t) = schur.unpack();
        for j in 0..k {
            for i in j + 1..k {
                t[(i, j)] = c(0.0);
            }
        }
        let eigenvalues = (0..k).map(|i| t[(i, i)]).collect();
        let mut singular_values: Vec<f64> = a.clone().singular_values().iter().copied().collect();
        singular_values.sort_by(|x, y| y.total_cmp(x));
        let norm = singular_values[0];
        let adj = a.adjoint();
        let comm = spectral_norm(&(&a * &adj - &adj * &a));
        let commutator_ratio = if norm == 0.0 { 0.0 } else { comm / (norm * norm) };
        Ok(MatrixOp {
            a,
            eigenvalues,
            singular_values,
            commutator_ratio,
            eta_normal,
            normal: commutator_ratio <= eta_normal,
            schur_q: q,
            schur_t: t,
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArgument("rows must all have the matrix dimension".into()));
        }
        Self::new(CMatrix::from_fn(k, k, |i, j| c(rows[i][j])))
    }

    pub fn diagonal(values: &[Complex64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&CVector::from_row_slice(values)))
    }

    pub fn real_diagonal(values: &[f64]) -> Result<Self> {
        Self::diagonal(&values.iter().map(|&v| c(v)).collect::<Vec<_>>())
    }

    /// Lower-triangular Jordan cell: `lambda` on the diagonal, ones below it.
    pub fn jordan(lambda: Complex64, k: usize) -> Result<Self> {
        Self::new(CMatrix::from_fn(k, k, |i, j| {
            if i == j {
                lambda
            } else if i == j + 1 {
                c(1.0)
            } else {
                c(0.0)
            }
        }))
    }

    /// Real rotation by `theta` radians.
    pub fn rotation(theta: f64) -> Result<Self> {
        let (s, co) = theta.sin_cos();
        Self::from_real_rows(&[vec![co, -s], vec![s, co]])
    }

    pub fn identity(k: usize) -> Result<Self> {
        Self::new(CMatrix::identity(k, k))
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    /// `||A A* - A* A|| / ||A||^2`.
    pub fn commutator_ratio(&self) -> f64 {
        self.commutator_ratio
    }

    pub fn eta_normal(&self) -> f64 {
        self.eta_normal
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn min_singular_value(&self) -> f64 {
        *self.singular_values.last().unwrap()
    }

    /// Schur factors `(Q, T)` with `A = Q T Q*`.
    pub fn schur(&self) -> (&CMatrix, &CMatrix) {
        (&self.schur_q, &self.schur_t)
    }

    pub fn is_invertible(&self) -> bool {
        self.min_singular_value() > 1e-13 * self.operator_norm().max(1.0)
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().all(|z| z.im == 0.0)
    }

    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        self.check_len(x)?;
        Ok(&self.a * x)
    }

    pub fn apply_inverse(&self, x: &CVector) -> Result<CVector> {
        self.check_len(x)?;
        if !self.is_invertible() {
            return Err(Error::NotInvertible(format!("smallest singular value {:.3e}", self.min_singular_value())));
        }
        self.a
            .clone()
            .lu()
            .solve(x)
            .ok_or_else(|| Error::NotInvertible("LU solve failed".into()))
    }

    pub(crate) fn check_len(&self, x: &CVector) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() })
        }
    }

    /// `A^n` by repeated squaring.
    pub fn power(&self, n: u64) -> CMatrix {
        let k = self.dim();
        let mut out = CMatrix::identity(k, k);
        let mut base = self.a.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &MatrixOp) -> Result<MatrixOp> {
        let (m, n) = (self.dim(), other.dim());
        let mut a = CMatrix::zeros(m + n, m + n);
        a.view_mut((0, 0), (m, m)).copy_from(&self.a);
        a.view_mut((m, m), (n, n)).copy_from(&other.a);
        MatrixOp::with_eta(a, self.eta_normal)
    }

    /// `lambda * A`.
    pub fn scaled(&self, lambda: Complex64) -> Result<MatrixOp> {
        MatrixOp::with_eta(self.a.map(|z| z * lambda), self.eta_normal)
    }
}

/// One matrix entry in JSON: `[re, im]` or a bare real number.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Serialize for MatrixOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.a[(i, j)].re, self.a[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Entry>> = Vec::deserialize(d)?;
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(serde::de::Error::custom("matrix rows must all have length equal to the number of rows"));
        }
        let a = CMatrix::from_fn(k, k, |i, j| match rows[i][j] {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => c(re),
        });
        MatrixOp::new(a).map_err(serde::de::Error::custom)
    }
}
