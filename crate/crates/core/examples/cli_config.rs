//! Build an operator config, write it out, and run the CLI commands on it in-process.

use linshadow::cli::{self, OperatorConfig};
use linshadow::sequence_space::{Direction, SpaceSpec, WeightSequence};

fn main() -> linshadow::Result<()> {
    let dir = std::env::temp_dir().join("linshadow-example");
    std::fs::create_dir_all(&dir)?;
    let config = OperatorConfig::shift("pair", &WeightSequence::uniform_expansive_pair(0.5, 2.0)?, SpaceSpec::l2(), Direction::Forward)?;
    let path = dir.join("pair.json");
    std::fs::write(&path, serde_json::to_string_pretty(&config)?)?;

    let p = path.to_str().unwrap();
    let out = dir.join("shadow");
    println!("classify exit {}", cli::run(["linshadow", "classify", "--config", p]));
    println!("shadow exit {}", cli::run(["linshadow", "shadow", "--config", p, "--seed", "1", "--out", out.to_str().unwrap()]));
    Ok(())
}
