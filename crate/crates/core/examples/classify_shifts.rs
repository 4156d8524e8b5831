//! Classifier verdicts for a few weighted shifts.

use linshadow::classifier::{
    classify_expansive_forward, classify_positively_expansive, classify_uniformly_expansive_forward, frequent_hc_check,
    hypercyclicity_check, is_hyperbolic_shift, ClassifierConfig,
};
use linshadow::sequence_space::{Direction, WeightSequence};

fn main() -> linshadow::Result<()> {
    let cfg = ClassifierConfig::default();

    let td = WeightSequence::theorem_d(2.0)?;
    println!("w_n = 2 (n < 0), 1/2 (n >= 0), forward shift");
    println!("  hyperbolic          {:?}", is_hyperbolic_shift(&td, &cfg)?.value);
    println!("  expansive           {:?}", classify_expansive_forward(&td, &cfg)?.value);
    println!("  frequently hc       {:?}", frequent_hc_check(&td, &cfg)?.value);

    let pair = WeightSequence::uniform_expansive_pair(0.5, 2.0)?;
    let u = classify_uniformly_expansive_forward(&pair, &cfg)?;
    println!("w_n = 1/2 (n < 0), 2 (n >= 0), forward shift");
    println!("  uniformly expansive {:?} via {:?}", u.verdict.value, u.primary);
    println!("  hyperbolic          {:?}", is_hyperbolic_shift(&pair, &cfg)?.value);

    let blocks = WeightSequence::doubling_blocks(2.0)?;
    println!("doubling blocks, backward shift");
    println!("  pos. expansive      {:?}", classify_positively_expansive(&blocks, &cfg, Direction::Backward)?.value);
    println!("  hypercyclic         {:?}", hypercyclicity_check(&blocks, &cfg)?.value);
    Ok(())
}
