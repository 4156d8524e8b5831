//! Closed-form and witnessed classification of weighted shifts.

mod config;
mod cyclicity;
mod expansivity;
mod probes;
mod search;
mod tails;
mod verdict;

pub use config::ClassifierConfig;
pub use cyclicity::{frequent_hc_check, hypercyclic_max_term, hypercyclicity_check, supercyclic_ratio, supercyclicity_check};
pub use expansivity::{
    classify_expansive_forward, classify_positively_expansive, classify_uniformly_expansive_forward,
    classify_uniformly_positively_expansive, hyponormal_expansive_check, is_hyperbolic_shift, is_hyponormal,
    search_side, shift_spectral_radii, side_log_product, side_start, HyponormalReport, UniformExpansivity,
};
pub use probes::{irregular_vector_probe, ne0_growth_probe, ForwardOrbit, IrregularWitness, Ne0Growth};
pub use tails::{tail_summary, Cmp, TailSummary};
pub use verdict::{Branch, CyclicPair, Decay, Provenance, Side, Tail, Verdict, VerdictValue, Witness};
