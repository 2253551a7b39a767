//! Shared fixtures for the benchmarks.

use sparse_movmf::dataset::simulate_mixture;
use sparse_movmf::em::{init_with_retries, FitOptions};
use sparse_movmf::{Dataset, MixtureParams, Separation, SimulationConfig};

/// Simulated data with `k` components and a quarter of each mean zeroed,
/// plus a random starting point for EM.
pub fn fixture(k: usize, d: usize, n: usize) -> (Dataset, MixtureParams) {
    let mut cfg = SimulationConfig::new(k, d, n, Separation::BaseKappa(20.0));
    cfg.sparsity = 0.25;
    cfg.seed = 1;
    let (x, _) = simulate_mixture(&cfg).expect("valid configuration");
    let init = init_with_retries(&x, k, &FitOptions::default()).expect("initialisation");
    (x, init)
}
