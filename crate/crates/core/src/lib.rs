//! Computational free probability toolkit: non-crossing partition
//! combinatorics, free-cumulant calculus with exact polynomial coefficients,
//! closed-form mixed moments of free Marchenko-Pastur families, and
//! finite-size random-matrix simulation that checks the symbolic predictions
//! against Monte Carlo trace estimates of sample covariance words.

pub mod calculus;
pub mod error;
pub mod oracle;
pub mod partition;
pub mod poly;
pub mod sim;

pub use error::{Error, Result};
pub use partition::{
    catalan, enumerate_nc, enumerate_nc2, is_noncrossing, kreweras, leq, mobius, GroundSet,
    PairPartition, SetPartition,
};
pub use poly::{Frac, RationalFn, YPoly};

/// Size caps guarding the combinatorial enumerations.
///
/// Defaults keep every operation at desk scale (`|NC(12)| = 208012`,
/// `|NC2(20)| = 16796`, symbolic sums over `NC(8)`); override per call site
/// or via the `FREEEMBED_MAX_K` environment variable in the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest ground set for full non-crossing enumeration.
    pub nc: usize,
    /// Largest (even) ground set for pair-partition enumeration.
    pub nc2: usize,
    /// Largest order for symbolic moment/cumulant sums.
    pub symbolic: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            nc: 12,
            nc2: 20,
            symbolic: 8,
        }
    }
}

impl Caps {
    /// Default caps, with `FREEEMBED_MAX_K=K` (when set and valid) raising or
    /// lowering them to `nc = K`, `nc2 = 2K`, `symbolic = K`.
    pub fn from_env() -> Self {
        match std::env::var("FREEEMBED_MAX_K")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            Some(k) if k > 0 => Self {
                nc: k,
                nc2: 2 * k,
                symbolic: k,
            },
            _ => Self::default(),
        }
    }
}
