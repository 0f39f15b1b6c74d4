//! Scan configuration: seeds, caps, and budgets. Loaded from a TOML
//! key/value file; every knob has a default tuned for desk-scale runs.

use crate::error::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    /// Base seed for every sampled choice (multiplier and deletion
    /// sampling); derived per-site so runs are reproducible.
    pub seed: u64,
    /// Use all units mod v as multipliers up to this v, sample above it.
    pub multiplier_full_below: u64,
    pub multiplier_sample: u64,
    /// Enumerate all deletion subsets up to this delta, sample beyond.
    pub deletion_exhaustive_delta: u64,
    pub deletion_sample: u64,
    /// Largest degree drop applied to matrix families in the non-cyclic scan.
    pub matrix_delta_cap: u64,
    /// Run the existence oracle on unresolved values when k is at most this.
    pub oracle_fill_max_k: u64,
    pub oracle_budget: u64,
    /// Keep base rulers with modulus at most this multiple of G(k).
    pub base_v_cap_factor: u64,
    /// Worker threads (0 = library default). The CONFIGURA_THREADS
    /// environment variable overrides this.
    pub threads: usize,
    /// Scan ceiling; defaults to G(k) - 1.
    pub v_max: Option<u64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            seed: 0xC0FF_EE11,
            multiplier_full_below: 5000,
            multiplier_sample: 512,
            deletion_exhaustive_delta: 2,
            deletion_sample: 512,
            matrix_delta_cap: 2,
            oracle_fill_max_k: 9,
            oracle_budget: 1 << 26,
            base_v_cap_factor: 2,
            threads: 0,
            v_max: None,
        }
    }
}

impl ScanConfig {
    pub fn from_toml_str(text: &str) -> Result<ScanConfig> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<ScanConfig> {
        ScanConfig::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Thread count after the CONFIGURA_THREADS override.
    pub fn effective_threads(&self) -> usize {
        std::env::var("CONFIGURA_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(self.threads)
    }

    /// Size the global worker pool to the effective thread count (0 keeps
    /// the library default). No effect if a pool was already built.
    pub fn init_thread_pool(&self) {
        let threads = self.effective_threads();
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
}
