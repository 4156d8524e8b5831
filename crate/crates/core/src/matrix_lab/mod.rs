mod counterexample;
mod matrix;
mod schur;
mod spectra;

pub use counterexample::{fd1_counterexample, harmonic, zeta, Divergence, Fd1Certificate, Fd1Mode};
pub use matrix::{euclid, spectral_norm, CMatrix, CVector, MatrixOp, DEFAULT_ETA_NORMAL, MAX_DIM};
pub use schur::{cluster_projection, reorder_schur, solve_sylvester, SpectralSplit, SplitResiduals};
pub use spectra::{
    eigen_clusters, expansion_exponent, hyperbolic_splitting, is_hyperbolic_matrix, left_eigenvector, normal_expansive,
    unimodular_eigenvalue, NormalExpansivity, CLUSTER_RADIUS, DEFAULT_BAND, UNIT_TOL,
};
