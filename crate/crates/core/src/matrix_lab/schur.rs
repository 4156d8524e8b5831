use num_complex::Complex64;

use super::matrix::{c, spectral_norm, CMatrix, CVector, MatrixOp};
use crate::error::{Error, Result};

/// Swap the adjacent diagonal entries `j` and `j + 1` of the triangular `t`
/// by a Givens rotation, keeping `A = Q T Q*`.
fn swap_adjacent(q: &mut CMatrix, t: &mut CMatrix, j: usize) {
    let a = t[(j, j)];
    let b = t[(j, j + 1)];
    let d = t[(j + 1, j + 1)];
    // eigenvector of [[a, b], [0, d]] for d
    let (x1, x2) = (b, d - a);
    let r = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
    if r == 0.0 {
        return;
    }
    let (g1, g2) = (x1 / r, x2 / r);
    let n = t.nrows();
    // rows: T <- G* T
    for col in 0..n {
        let (u, v) = (t[(j, col)], t[(j + 1, col)]);
        t[(j, col)] = g1.conj() * u + g2.conj() * v;
        t[(j + 1, col)] = -g2 * u + g1 * v;
    }
    // columns: T <- T G, Q <- Q G
    for m in [&mut *t, &mut *q] {
        for row in 0..n {
            let (u, v) = (m[(row, j)], m[(row, j + 1)]);
            m[(row, j)] = u * g1 + v * g2;
            m[(row, j + 1)] = -u * g2.conj() + v * g1.conj();
        }
    }
    t[(j + 1, j)] = c(0.0);
}

/// Reorder a complex Schur form so the eigenvalues selected by `first`
/// occupy the leading diagonal block. Returns the size of that block.
pub fn reorder_schur(q: &mut CMatrix, t: &mut CMatrix, first: impl Fn(Complex64) -> bool) -> usize {
    let n = t.nrows();
    let mut pos = 0;
    for j in 0..n {
        if first(t[(j, j)]) {
            let mut k = j;
            while k > pos {
                swap_adjacent(q, t, k - 1);
                k -= 1;
            }
            pos += 1;
        }
    }
    pos
}

/// Solve `T11 X - X T22 = -T12` for upper-triangular blocks with disjoint spectra.
pub fn solve_sylvester(t11: &CMatrix, t22: &CMatrix, t12: &CMatrix) -> Result<CMatrix> {
    let (s, u) = (t11.nrows(), t22.nrows());
    let mut x = CMatrix::zeros(s, u);
    for j in 0..u {
        let mut rhs: CVector = -t12.column(j).into_owned();
        for i in 0..j {
            rhs += x.column(i) * t22[(i, j)];
        }
        let shifted = t11 - CMatrix::identity(s, s) * t22[(j, j)];
        let col = shifted
            .solve_upper_triangular(&rhs)
            .ok_or_else(|| Error::NotSplittable("spectral blocks share an eigenvalue".into()))?;
        x.set_column(j, &col);
    }
    Ok(x)
}

/// Riesz projection onto the invariant subspace of the eigenvalues picked by
/// `first`, along the complementary one. Also returns the block size.
pub fn cluster_projection(op: &MatrixOp, first: impl Fn(Complex64) -> bool) -> Result<(CMatrix, usize)> {
    let (q0, t0) = op.schur();
    let (mut q, mut t) = (q0.clone(), t0.clone());
    let s = reorder_schur(&mut q, &mut t, first);
    let n = op.dim();
    let mut p = CMatrix::zeros(n, n);
    if s == n {
        p = CMatrix::identity(n, n);
    } else if s > 0 {
        let x = solve_sylvester(
            &t.view((0, 0), (s, s)).into_owned(),
            &t.view((s, s), (n - s, n - s)).into_owned(),
            &t.view((0, s), (s, n - s)).into_owned(),
        )?;
        let mut inner = CMatrix::zeros(n, n);
        inner.view_mut((0, 0), (s, s)).fill_with_identity();
        inner.view_mut((0, s), (s, n - s)).copy_from(&(-x));
        p = &q * inner * q.adjoint();
    }
    Ok((p, s))
}

/// Invariant subspaces of a hyperbolic matrix and the restricted blocks.
#[derive(Clone, Debug)]
pub struct SpectralSplit {
    /// Orthonormal columns spanning the stable subspace.
    pub stable_basis: CMatrix,
    /// Orthonormal columns spanning the unstable subspace.
    pub unstable_basis: CMatrix,
    pub p_s: CMatrix,
    pub p_u: CMatrix,
    /// `A` restricted to the stable subspace, in `stable_basis` coordinates.
    pub b_s: CMatrix,
    /// `A` restricted to the unstable subspace, in `unstable_basis` coordinates.
    pub b_u: CMatrix,
    pub b_u_inv: CMatrix,
    /// `1 - max |lambda|` over stable eigenvalues.
    pub margin_stable: f64,
    /// `min |lambda| - 1` over unstable eigenvalues.
    pub margin_unstable: f64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SplitResiduals {
    pub sum_identity: f64,
    pub product_zero: f64,
    pub stable_invariance: f64,
    pub unstable_invariance: f64,
    pub reconstruction: f64,
}

impl SplitResiduals {
    pub fn max(&self) -> f64 {
        [self.sum_identity, self.product_zero, self.stable_invariance, self.unstable_invariance, self.reconstruction]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

impl SpectralSplit {
    pub fn stable_dim(&self) -> usize {
        self.stable_basis.ncols()
    }

    pub fn unstable_dim(&self) -> usize {
        self.unstable_basis.ncols()
    }

    pub fn beta(&self) -> f64 {
        spectral_norm(&self.p_s).max(spectral_norm(&self.p_u))
    }

    pub fn components(&self, x: &CVector) -> (CVector, CVector) {
        (&self.p_s * x, &self.p_u * x)
    }

    /// `(A|_{X_u})^{-1} x` for `x` in the unstable subspace.
    pub fn unstable_inverse(&self, x: &CVector) -> CVector {
        if self.unstable_dim() == 0 {
            return CVector::zeros(x.len());
        }
        let coords = self.unstable_basis.adjoint() * x;
        &self.unstable_basis * (&self.b_u_inv * coords)
    }

    /// `||B_s^n||` for `n = 0..=n_max`; zero beyond `n = 0` when the subspace is trivial.
    pub fn stable_power_norms(&self, n_max: usize) -> Vec<f64> {
        power_norms(&self.b_s, n_max)
    }

    /// `||B_u^{-n}||` for `n = 0..=n_max`.
    pub fn unstable_inverse_power_norms(&self, n_max: usize) -> Vec<f64> {
        power_norms(&self.b_u_inv, n_max)
    }

    pub fn residuals(&self, a: &CMatrix) -> SplitResiduals {
        let n = a.nrows();
        let id = CMatrix::identity(n, n);
        let vs = &self.stable_basis;
        let vu = &self.unstable_basis;
        let recon = vs * &self.b_s * vs.adjoint() * &self.p_s + vu * &self.b_u * vu.adjoint() * &self.p_u;
        SplitResiduals {
            sum_identity: spectral_norm(&(&self.p_s + &self.p_u - &id)),
            product_zero: spectral_norm(&(&self.p_s * &self.p_u)),
            stable_invariance: spectral_norm(&(a * vs - vs * &self.b_s)),
            unstable_invariance: spectral_norm(&(a * vu - vu * &self.b_u)),
            reconstruction: spectral_norm(&(recon - a)),
        }
    }
}

fn power_norms(b: &CMatrix, n_max: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    if b.is_empty() {
        out.resize(n_max + 1, 0.0);
        return out;
    }
    let mut p = b.clone();
    for _ in 1..=n_max {
        out.push(spectral_norm(&p));
        p = &p * b;
    }
    out
}

/// Stable/unstable splitting from the reordered Schur form; eigenvalues are
/// assumed off the unit circle (checked by the caller).
pub(crate) fn split_by_modulus(op: &MatrixOp) -> Result<SpectralSplit> {
    let (q0, t0) = op.schur();
    let (mut q, mut t) = (q0.clone(), t0.clone());
    let n = op.dim();
    let s = reorder_schur(&mut q, &mut t, |l| l.norm() < 1.0);
    let t11 = t.view((0, 0), (s, s)).into_owned();
    let t22 = t.view((s, s), (n - s, n - s)).into_owned();
    let t12 = t.view((0, s), (s, n - s)).into_owned();
    let x = if s > 0 && s < n { solve_sylvester(&t11, &t22, &t12)? } else { CMatrix::zeros(s, n - s) };

    let mut inner_s = CMatrix::zeros(n, n);
    inner_s.view_mut((0, 0), (s, s)).fill_with_identity();
    inner_s.view_mut((0, s), (s, n - s)).copy_from(&(-&x));
    let p_s = &q * inner_s * q.adjoint();
    let p_u = CMatrix::identity(n, n) - &p_s;

    let stable_basis = q.columns(0, s).into_owned();
    let unstable_basis = if s < n {
        let mut stacked = CMatrix::zeros(n, n - s);
        stacked.view_mut((0, 0), (s, n - s)).copy_from(&x);
        stacked.view_mut((s, 0), (n - s, n - s)).fill_with_identity();
        (&q * stacked).qr().q()
    } else {
        CMatrix::zeros(n, 0)
    };
    let b_u = unstable_basis.adjoint() * op.matrix() * &unstable_basis;
    let b_u_inv = if b_u.is_empty() {
        b_u.clone()
    } else {
        b_u.clone().try_inverse().ok_or_else(|| Error::NotSplittable("unstable block is singular".into()))?
    };
    let diag: Vec<f64> = (0..n).map(|i| t[(i, i)].norm()).collect();
    let margin_stable = diag[..s].iter().fold(f64::INFINITY, |m, &r| m.min(1.0 - r));
    let margin_unstable = diag[s..].iter().fold(f64::INFINITY, |m, &r| m.min(r - 1.0));
    Ok(SpectralSplit { stable_basis, unstable_basis, p_s, p_u, b_s: t11, b_u, b_u_inv, margin_stable, margin_unstable })
}
