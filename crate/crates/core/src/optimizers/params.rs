use std::fmt;
use std::str::FromStr;

use super::HyperParams;
use crate::error::Error;
use crate::estimators::SmoothingParams;

/// Parameter rules from the convergence analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary {
    /// Mini-batch ZO-SVRG-Coord-Rand.
    Cor1,
    /// Single-sample ZO-SVRG-Coord-Rand.
    Cor2,
    /// Mini-batch ZO-SPIDER-Coord.
    Cor3,
    /// Single-sample ZO-SPIDER-Coord.
    Cor4,
    /// ZO-SVRG-Coord.
    Theorem2,
}

impl FromStr for Corollary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "cor1" => Ok(Corollary::Cor1),
            "cor2" => Ok(Corollary::Cor2),
            "cor3" => Ok(Corollary::Cor3),
            "cor4" => Ok(Corollary::Cor4),
            "theorem2" | "thm2" => Ok(Corollary::Theorem2),
            _ => Err(Error::Unknown {
                kind: "corollary",
                name: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for Corollary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corollary::Cor1 => "cor1",
            Corollary::Cor2 => "cor2",
            Corollary::Cor3 => "cor3",
            Corollary::Cor4 => "cor4",
            Corollary::Theorem2 => "theorem2",
        })
    }
}

/// Smallest `q ≥ 1` with `q^power · scale ≥ target`, in exact integer
/// arithmetic (so `⌈1000^{1/3}⌉` is 10, not 11).
fn ceil_root(target: u128, power: u32, scale: u128) -> u64 {
    let ok = |q: u128| -> bool {
        q.checked_pow(power)
            .and_then(|p| p.checked_mul(scale))
            .is_none_or(|v| v >= target)
    };
    let (mut lo, mut hi) = (1u128, 1u128);
    while !ok(hi) {
        lo = hi;
        hi *= 2;
    }
    if ok(lo) {
        return lo as u64;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi as u64
}

/// Hyperparameters prescribed by `rule` for `n` components in dimension `d`,
/// iteration budget `k` and smoothness `l`. The seed is left at zero.
///
/// Rules that never use the two-point estimator (cor3, cor4, theorem2) set
/// `β = δ`; the value is unused.
pub fn select_params(rule: Corollary, n: usize, d: usize, k: usize, l: f64) -> HyperParams {
    assert!(n > 0 && d > 0 && k > 0 && l > 0.0, "n, d, K, L must be positive");
    let (df, kf) = (d as f64, k as f64);
    let s1_min = n.min(k);
    let (eta, q, s1, s2, beta, delta) = match rule {
        Corollary::Cor1 => {
            let q = ceil_root(s1_min as u128, 3, 1) as usize;
            let beta = 1.0 / (l * df * kf.sqrt());
            let delta = 1.0 / (l * (df * kf).sqrt());
            (1.0 / (20.0 * l), q, s1_min, d * q * q, beta, delta)
        }
        Corollary::Cor2 => {
            // |S1| = min{n, ⌈(K/d)^{3/5}⌉}: smallest s with s^5 d^3 ≥ K^3
            let s1 = n.min(ceil_root((k as u128).pow(3), 5, (d as u128).pow(3)) as usize);
            let q = s1 * d;
            let s1c = (s1 as f64).cbrt();
            let beta = s1c / (l * (df * kf).sqrt());
            let eta = 1.0 / (20.0 * df.cbrt() * (q as f64).powf(2.0 / 3.0) * l);
            let delta = s1c / (l * kf.sqrt());
            (eta, q, s1, 1, beta, delta)
        }
        Corollary::Cor3 => {
            let q = ceil_root(s1_min as u128, 2, 1) as usize;
            let delta = 1.0 / ((kf * df).sqrt() * l);
            (1.0 / (4.0 * l), q, s1_min, q, delta, delta)
        }
        Corollary::Cor4 => {
            let q = n.min(ceil_root((k as u128).pow(2), 3, 1) as usize);
            let qf = q as f64;
            let delta = 1.0 / ((qf * kf * df).sqrt() * l);
            (1.0 / (4.0 * l * qf.sqrt()), q, q, 1, delta, delta)
        }
        Corollary::Theorem2 => {
            let q = ceil_root(s1_min as u128, 3, 1) as usize;
            let delta = 1.0 / (l * (df * kf).sqrt());
            (1.0 / (15.0 * l), q, s1_min, q * q, delta, delta)
        }
    };
    HyperParams {
        eta,
        q,
        k,
        s1,
        s2,
        smoothing: SmoothingParams { beta, delta },
        seed: 0,
    }
}

/// ZO-GD / ZO-SGD defaults: `η = c/d` with `c = 0.8`.
pub fn baseline_params(d: usize, k: usize, s2: usize, smoothing: SmoothingParams, seed: u64) -> HyperParams {
    HyperParams {
        eta: 0.8 / d as f64,
        q: 1,
        k,
        s1: 1,
        s2,
        smoothing,
        seed,
    }
}
