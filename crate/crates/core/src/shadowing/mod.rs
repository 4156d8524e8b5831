mod operator;
mod pseudo;
mod refute;
mod solver;
mod splitting;

pub use operator::{LinearOperator, SparseCoords, Splittable};
pub use pseudo::{
    generate_in_band, generate_pseudotrajectory, generate_with_rule, DefectRule, PseudoJson, PseudoTrajectory, DEFAULT_BAND,
};
pub use refute::{
    linear_growth_orbit, positive_shadow_contraction, positive_shadowing_decision_normal, refute_shadowing, ContractionResult,
    DecisionConfig, LinearGrowth, LpCheck, NormalShadowingDecision, Refutation, ShadowCertificate,
};
pub use solver::{shadow, shadow_profile, write_csv, DefectProfile, ProfileCertificate, ShadowJson, ShadowResult};
pub use splitting::{
    certify_rate, log_window_extremes, lp_constant, matrix_splitting, shadow_constant, shift_splitting, CutKind, ShadowMode,
    SplitKind, Splitting, N_CHECK,
};
