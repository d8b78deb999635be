//! Numerical knobs: SVD threshold, RNG seed, degree cutoffs.

use serde::{Deserialize, Serialize};

/// Tolerance for accepting an approximate point as lying on the variety:
/// `|f(y)| < ON_VARIETY_TOL * (1 + ||f||)` per generator.
pub const ON_VARIETY_TOL: f64 = 1e-6;

/// Residual tolerance used by span/annihilation checks in tests and invariants.
pub const SPAN_TOL: f64 = 1e-8;

/// Minimum distance between a sample and a point it must avoid.
pub const AVOID_DIST: f64 = 1e-3;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericalConfig {
    /// Relative SVD threshold: singular values below `delta * sigma_max` count as zero.
    pub delta: f64,
    /// Seed for all pseudo-random draws.
    pub seed: u64,
    /// Hard cap on dual-space truncation orders (staircase and membership loops).
    pub max_degree: usize,
    /// Cap on the outer degree `d` of the embedded-component loop.
    pub max_d: usize,
    /// Cap on the dual-constraint order `e` in ideal truncation.
    pub max_e: usize,
    /// Cap on interpolation sample points before rank stabilization must occur.
    pub max_samples: usize,
}

impl Default for NumericalConfig {
    fn default() -> Self {
        NumericalConfig {
            delta: 1e-8,
            seed: 0,
            max_degree: 12,
            max_d: 10,
            max_e: 10,
            max_samples: 32,
        }
    }
}

impl NumericalConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = self.clone();
        c.seed = seed;
        c
    }

    /// Derive an independent child seed (splitmix64 step keyed by `salt`).
    pub fn child_seed(&self, salt: u64) -> u64 {
        split_seed(self.seed, salt)
    }
}

pub fn split_seed(seed: u64, salt: u64) -> u64 {
    let mut v = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    v = (v ^ (v >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    v = (v ^ (v >> 27)).wrapping_mul(0x94d049bb133111eb);
    v ^ (v >> 31)
}
