use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;
use serde::Serialize;

use super::matrix::{spectral_norm, CVector, MatrixOp};
use super::schur::{split_by_modulus, SpectralSplit};
use crate::classifier::{ForwardOrbit, Verdict, VerdictValue, Witness};
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;

pub const DEFAULT_BAND: f64 = 1e-9;
/// Distance to 1 below which a computed modulus counts as exactly unimodular.
pub const UNIT_TOL: f64 = 1e-13;
/// Eigenvalues closer than this are averaged into one cluster, which
/// absorbs the splitting of defective eigenvalues.
pub const CLUSTER_RADIUS: f64 = 1e-4;

/// Cluster means of the computed spectrum, each with its multiplicity.
pub fn eigen_clusters(values: &[Complex64]) -> Vec<(Complex64, usize)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= CLUSTER_RADIUS * values[i].norm().max(1.0) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((r, values[i], 1)),
        }
    }
    groups.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect()
}

fn eigen_witness(l: Complex64) -> Witness {
    Witness::Eigenvalue { re: l.re, im: l.im, modulus: l.norm() }
}

/// Three-way test of "no value within `band` of 1": False when some value is
/// unimodular to `UNIT_TOL`, Undetermined when one lies in the band.
fn off_unit(moduli: impl Iterator<Item = (f64, Complex64)>, band: f64) -> Verdict {
    let mut closest: Option<(f64, Complex64)> = None;
    for (r, l) in moduli {
        let d = (r - 1.0).abs();
        if closest.is_none_or(|(best, _)| d < best) {
            closest = Some((d, l));
        }
    }
    match closest {
        Some((d, l)) if d <= UNIT_TOL => Verdict::exact(false, Some(eigen_witness(l))),
        Some((d, l)) if d <= band => Verdict {
            value: VerdictValue::Undetermined,
            provenance: crate::classifier::Provenance::Exact,
            witness: Some(eigen_witness(l)),
            horizon: None,
        },
        _ => Verdict::exact(true, None),
    }
}

/// Hyperbolicity: no eigenvalue on the unit circle.
pub fn is_hyperbolic_matrix(op: &MatrixOp, band: f64) -> Verdict {
    off_unit(eigen_clusters(op.eigenvalues()).into_iter().map(|(l, _)| (l.norm(), l)), band)
}

/// Stable/unstable splitting; fails unless the matrix is decidedly hyperbolic.
pub fn hyperbolic_splitting(op: &MatrixOp, band: f64) -> Result<SpectralSplit> {
    let v = is_hyperbolic_matrix(op, band);
    if v.value != VerdictValue::True {
        let detail = match v.witness {
            Some(Witness::Eigenvalue { re, im, modulus }) => format!("eigenvalue {re}+{im}i has modulus {modulus}"),
            _ => "spectrum meets the unit circle".into(),
        };
        return Err(Error::NotHyperbolic(detail));
    }
    split_by_modulus(op)
}

/// A cluster mean whose modulus is within `band` of 1, projected onto the circle.
pub fn unimodular_eigenvalue(op: &MatrixOp, band: f64) -> Option<Complex64> {
    eigen_clusters(op.eigenvalues())
        .into_iter()
        .filter(|(l, _)| (l.norm() - 1.0).abs() <= band)
        .min_by(|a, b| (a.0.norm() - 1.0).abs().total_cmp(&(b.0.norm() - 1.0).abs()))
        .map(|(l, _)| l / l.norm())
}

/// Unit `u` with `u* A = lambda u*`, from the smallest singular vector of `(A - lambda)*`.
pub fn left_eigenvector(op: &MatrixOp, lambda: Complex64) -> (CVector, f64) {
    let k = op.dim();
    let m = (op.matrix() - super::matrix::CMatrix::identity(k, k) * lambda).adjoint();
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let (i, _) = svd.singular_values.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &s)| if s < b.1 { (i, s) } else { b });
    let u: CVector = v_t.row(i).adjoint();
    let residual = (op.matrix().adjoint() * &u - &u * lambda.conj()).norm();
    (u, residual)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalExpansivity {
    pub expansive: Verdict,
    pub positively_expansive: Verdict,
    pub uniformly_positively_expansive: Verdict,
    pub uniformly_expansive: Verdict,
}

fn above_one(values: impl Iterator<Item = (f64, Complex64)>, band: f64) -> Verdict {
    let mut worst: Option<(f64, Complex64)> = None;
    for (r, l) in values {
        if worst.is_none_or(|(w, _)| r < w) {
            worst = Some((r, l));
        }
    }
    match worst {
        None => Verdict::exact(true, None),
        Some((r, l)) if r > 1.0 + band => Verdict::exact(true, Some(eigen_witness(l))),
        Some((r, l)) if r < 1.0 - band || (r - 1.0).abs() <= UNIT_TOL => Verdict::exact(false, Some(eigen_witness(l))),
        Some((_, l)) => Verdict {
            value: VerdictValue::Undetermined,
            provenance: crate::classifier::Provenance::Exact,
            witness: Some(eigen_witness(l)),
            horizon: None,
        },
    }
}

/// The four expansivity notions for a normal matrix.
///
/// `expansive` and `positively_expansive` are read off the Hermitian
/// eigenvalues of `A* A`; the uniform notions off the Schur eigenvalues of
/// `A`. For a normal matrix both describe the same moduli.
pub fn normal_expansive(op: &MatrixOp, band: f64) -> Result<NormalExpansivity> {
    if !op.is_normal() {
        return Err(Error::NotNormal(op.commutator_ratio()));
    }
    let gram = op.matrix().adjoint() * op.matrix();
    let s: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
    let gram_moduli = || s.iter().map(|&v| (v.max(0.0).sqrt(), Complex64::new(v.max(0.0).sqrt(), 0.0)));
    let expansive = if op.is_invertible() {
        off_unit(gram_moduli(), band)
    } else {
        Verdict {
            value: VerdictValue::Undetermined,
            provenance: crate::classifier::Provenance::Exact,
            witness: Some(Witness::Note { text: "expansivity is defined for invertible operators".into() }),
            horizon: None,
        }
    };
    let positively_expansive = above_one(gram_moduli(), band);
    let eig = || op.eigenvalues().iter().map(|&l| (l.norm(), l));
    Ok(NormalExpansivity {
        expansive,
        positively_expansive,
        uniformly_positively_expansive: above_one(eig(), band),
        uniformly_expansive: off_unit(eig(), band),
    })
}

/// Smallest `n <= horizon` with `s_min(A^n) > threshold`.
pub fn expansion_exponent(op: &MatrixOp, threshold: f64, horizon: u64) -> Option<u64> {
    let mut p = op.matrix().clone();
    for n in 1..=horizon {
        let s = p.clone().singular_values();
        let smin = s.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if smin > threshold {
            return Some(n);
        }
        if !(spectral_norm(&p) < 1e150) {
            return None;
        }
        p = &p * op.matrix();
    }
    None
}

impl ForwardOrbit for MatrixOp {
    type Vector = CVector;

    fn forward_orbit_norms(&self, x: &CVector, n_max: u64) -> Result<Vec<Magnitude>> {
        self.check_len(x)?;
        let mut out = Vec::with_capacity(n_max as usize + 1);
        let mut log_scale = 0.0;
        let mut y = x.clone();
        for n in 0..=n_max {
            let r = y.norm();
            if r == 0.0 {
                out.push(Magnitude::ZERO);
            } else {
                out.push(Magnitude::from_log(log_scale + r.ln()));
                y /= Complex64::new(r, 0.0);
                log_scale += r.ln();
            }
            if n < n_max {
                y = self.matrix() * y;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::matrix::c;
    use super::*;

    #[test]
    fn hyperbolicity_examples() {
        assert_eq!(is_hyperbolic_matrix(&MatrixOp::real_diagonal(&[2.0, 0.5]).unwrap(), DEFAULT_BAND).value, VerdictValue::True);
        assert_eq!(is_hyperbolic_matrix(&MatrixOp::rotation(1.0).unwrap(), DEFAULT_BAND).value, VerdictValue::False);
        let near = MatrixOp::real_diagonal(&[1.0 + 1e-12, 2.0]).unwrap();
        assert_eq!(is_hyperbolic_matrix(&near, DEFAULT_BAND).value, VerdictValue::Undetermined);
        // defective eigenvalue 1 splits under rounding but the cluster mean stays on the circle
        assert_eq!(is_hyperbolic_matrix(&MatrixOp::jordan(c(1.0), 3).unwrap(), DEFAULT_BAND).value, VerdictValue::False);
    }

    #[test]
    fn splitting_requires_hyperbolic() {
        assert!(matches!(hyperbolic_splitting(&MatrixOp::rotation(0.3).unwrap(), DEFAULT_BAND), Err(Error::NotHyperbolic(_))));
        let sp = hyperbolic_splitting(&MatrixOp::real_diagonal(&[2.0]).unwrap(), DEFAULT_BAND).unwrap();
        assert_eq!((sp.stable_dim(), sp.unstable_dim()), (0, 1));
    }

    #[test]
    fn normal_expansivity_examples() {
        let a = normal_expansive(&MatrixOp::real_diagonal(&[1.0, 2.0]).unwrap(), DEFAULT_BAND).unwrap();
        assert!(a.expansive.is_false());
        let b = normal_expansive(&MatrixOp::diagonal(&[c(2.0), Complex64::new(0.0, 3.0)]).unwrap(), DEFAULT_BAND).unwrap();
        assert!(b.positively_expansive.is_true());
        assert!(b.uniformly_positively_expansive.is_true());
        let d = normal_expansive(&MatrixOp::real_diagonal(&[0.5, 2.0]).unwrap(), DEFAULT_BAND).unwrap();
        assert!(d.expansive.is_true());
        assert!(d.positively_expansive.is_false());
        assert!(d.uniformly_expansive.is_true());
        let j = MatrixOp::jordan(c(2.0), 2).unwrap();
        assert!(matches!(normal_expansive(&j, DEFAULT_BAND), Err(Error::NotNormal(_))));
    }

    #[test]
    fn left_eigenvector_of_jordan_cell() {
        let j = MatrixOp::jordan(c(1.0), 3).unwrap();
        let l = unimodular_eigenvalue(&j, DEFAULT_BAND).unwrap();
        assert!((l - c(1.0)).norm() < 1e-12);
        let (u, res) = left_eigenvector(&j, l);
        assert!(res < 1e-12);
        assert!((u[0].norm() - 1.0).abs() < 1e-12);
        assert!(unimodular_eigenvalue(&MatrixOp::real_diagonal(&[2.0, 0.5]).unwrap(), DEFAULT_BAND).is_none());
    }

    #[test]
    fn expansion_exponent_for_dilation() {
        let op = MatrixOp::diagonal(&[c(1.5), Complex64::new(0.0, 1.2)]).unwrap();
        // 1.2^n > 2 first at n = 4
        assert_eq!(expansion_exponent(&op, 2.0, 50), Some(4));
        assert_eq!(expansion_exponent(&MatrixOp::real_diagonal(&[0.5, 3.0]).unwrap(), 2.0, 50), None);
    }

    #[test]
    fn matrix_orbit_norms_in_log_domain() {
        let op = MatrixOp::real_diagonal(&[10.0]).unwrap();
        let norms = op.forward_orbit_norms(&CVector::from_vec(vec![c(1.0)]), 400).unwrap();
        assert!((norms[400].ln() - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
