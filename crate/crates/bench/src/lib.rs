//! Shared fixtures for the simulator benchmarks.

use csr_core::bandit::{Algorithm, Hyperparams};
use csr_core::experiment::{ExperimentConfig, ResolvedConfig};

/// A d = 20 m square run with the reference PHY settings.
pub fn square20_config(txops: usize, seeds: u64) -> ResolvedConfig {
    let toml = format!(
        "[run]\ntxops = {txops}\nseeds = {seeds}\n\
         [scenario]\nkind = \"square\"\nd = 20.0\npost_move_offset = 3.0\n"
    );
    ExperimentConfig::from_toml_str(&toml)
        .expect("valid bench config")
        .resolve()
        .expect("resolvable bench config")
}

pub fn ucb_theta() -> Hyperparams {
    Hyperparams::tuned(Algorithm::Ucb)
}
