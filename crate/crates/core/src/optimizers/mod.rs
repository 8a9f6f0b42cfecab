//! Optimizer loops, hyperparameters and parameter selectors.
//!
//! All variance-reduced loops run `k = 0..=K` (that is `K + 1` updates). At
//! `k mod q == 0` the anchor estimate `∇̂_coord f_{S1}(x^k)` is refreshed
//! over a batch drawn without replacement; the other iterations draw an
//! inner batch with replacement. The returned iterate `x^ζ` has `ζ` drawn
//! uniformly from `{0, ..., K}` before the loop starts, so only `x^ζ` and
//! the last iterate are kept.
//!
//! Randomness comes from one `ChaCha8Rng` seeded with `seed`. `ζ` is drawn
//! first; after that each iteration draws its batch indices and then, for
//! the random estimator, its sphere directions. The convex variants also
//! draw the next snapshot offset at each anchor step. A full anchor batch
//! (`|S1| = n`) consumes no randomness.

mod loops;
mod params;
mod prox;
pub mod sampling;
mod trace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use loops::{
    run_algorithm, run_prox_zo_spider_coord, run_zo_gd, run_zo_sgd, run_zo_spider_coord, run_zo_spider_coord_c,
    run_zo_svrg_coord, run_zo_svrg_coord_rand, run_zo_svrg_coord_rand_c,
};
pub use params::{baseline_params, select_params, Corollary};
pub use prox::{generalized_gradient, prox_map, ProxKind, Regularizer};
pub use trace::{RunTrace, TraceRow};

use crate::error::{Error, Result};
use crate::estimators::SmoothingParams;
use crate::parallel::Execution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    /// Stepsize `η`.
    pub eta: f64,
    /// Epoch length.
    pub q: usize,
    /// Iteration budget `K`; the loop runs `k = 0..=K`.
    pub k: usize,
    /// Outer batch size `|S1|`.
    pub s1: usize,
    /// Inner batch size `|S2|`.
    pub s2: usize,
    pub smoothing: SmoothingParams,
    pub seed: u64,
}

impl HyperParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidHyperParams(msg));
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return fail(format!("eta must be positive, got {}", self.eta));
        }
        if self.q == 0 || self.k == 0 || self.s1 == 0 || self.s2 == 0 {
            return fail("q, K, |S1| and |S2| must be positive".into());
        }
        if self.s1 > n {
            return fail(format!("|S1| = {} exceeds n = {n}", self.s1));
        }
        if self.q > self.k {
            return fail(format!("q = {} exceeds K = {}", self.q, self.k));
        }
        SmoothingParams::new(self.smoothing.beta, self.smoothing.delta)?;
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

impl fmt::Display for HyperParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "eta   = {:e}", self.eta)?;
        writeln!(f, "q     = {}", self.q)?;
        writeln!(f, "K     = {}", self.k)?;
        writeln!(f, "s1    = {}", self.s1)?;
        writeln!(f, "s2    = {}", self.s2)?;
        writeln!(f, "beta  = {:e}", self.smoothing.beta)?;
        write!(f, "delta = {:e}", self.smoothing.delta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub x0: Vec<f64>,
    /// Stop once this many queries have been spent (checked before each
    /// iteration, so the final count exceeds it by at most one iteration).
    pub query_budget: Option<u64>,
    /// Report every `report_every`-th iterate; the last one is always reported.
    pub report_every: usize,
    pub record_iterates: bool,
    /// Fill `wall_ms`. Off by default so traces are reproducible byte for byte.
    pub record_wall_time: bool,
    /// Strategy for the per-coordinate loops inside estimators.
    pub exec: Execution,
}

impl RunOptions {
    pub fn new(x0: Vec<f64>) -> Self {
        RunOptions {
            x0,
            query_budget: None,
            report_every: 1,
            record_iterates: false,
            record_wall_time: false,
            exec: Execution::Sequential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    ZoSvrgCoordRand,
    ZoSvrgCoord,
    ZoSpiderCoord,
    ProxZoSpiderCoord,
    ZoSvrgCoordRandC,
    ZoSpiderCoordC,
    ZoGd,
    ZoSgd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::ZoSvrgCoordRand,
        Algorithm::ZoSvrgCoord,
        Algorithm::ZoSpiderCoord,
        Algorithm::ProxZoSpiderCoord,
        Algorithm::ZoSvrgCoordRandC,
        Algorithm::ZoSpiderCoordC,
        Algorithm::ZoGd,
        Algorithm::ZoSgd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ZoSvrgCoordRand => "zo-svrg-coord-rand",
            Algorithm::ZoSvrgCoord => "zo-svrg-coord",
            Algorithm::ZoSpiderCoord => "zo-spider-coord",
            Algorithm::ProxZoSpiderCoord => "prox-zo-spider-coord",
            Algorithm::ZoSvrgCoordRandC => "zo-svrg-coord-rand-c",
            Algorithm::ZoSpiderCoordC => "zo-spider-coord-c",
            Algorithm::ZoGd => "zo-gd",
            Algorithm::ZoSgd => "zo-sgd",
        }
    }

    /// Baselines use `O(1/d)` stepsizes and no anchor estimate.
    pub fn is_baseline(self) -> bool {
        matches!(self, Algorithm::ZoGd | Algorithm::ZoSgd)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "algorithm",
                name: s.to_string(),
            })
    }
}

impl TryFrom<String> for Algorithm {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.name().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp() -> HyperParams {
        HyperParams {
            eta: 0.1,
            q: 3,
            k: 9,
            s1: 6,
            s2: 2,
            smoothing: SmoothingParams { beta: 0.01, delta: 0.001 },
            seed: 1,
        }
    }

    #[test]
    fn validation() {
        assert!(hp().validate(6).is_ok());
        assert!(hp().validate(5).is_err());
        assert!(HyperParams { q: 10, ..hp() }.validate(6).is_err());
        assert!(HyperParams { eta: 0.0, ..hp() }.validate(6).is_err());
        assert!(HyperParams { s2: 0, ..hp() }.validate(6).is_err());
    }

    #[test]
    fn algorithm_names_roundtrip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("ZO_SGD".parse::<Algorithm>().unwrap(), Algorithm::ZoSgd);
        assert!("adam".parse::<Algorithm>().is_err());
    }
}
