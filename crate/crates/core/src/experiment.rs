//! Config-driven benchmark runs.
//!
//! An experiment runs every `(algorithm, seed)` pair on one problem, writes
//! one trace CSV per run (`<algorithm>_seed<seed>.csv`) and a `summary.csv`
//! comparing algorithms at equal query budget. Example config:
//!
//! ```toml
//! algorithms = ["zo-spider-coord", "zo-sgd"]
//! seeds = [1, 2, 3]
//! query_budget = 2000000
//! output_dir = "results"
//!
//! [problem]
//! kind = "synthetic"     # or "libsvm" with `path = "german.txt"`
//! n = 200
//! d = 20
//! alpha = 0.1
//!
//! [params]               # shared by every algorithm
//! corollary = "cor3"
//! k = 2000
//!
//! [overrides.zo-sgd]     # per-algorithm fields win over [params]
//! s2 = 10
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::data_io::{load_libsvm, make_synthetic_logreg_data, normalize_max_abs, write_trace, Dataset};
use crate::error::{Error, Result};
use crate::estimators::SmoothingParams;
use crate::objectives::{make_nonconvex_logreg, NonconvexLogReg, Objective};
use crate::optimizers::{run_algorithm, select_params, Algorithm, Corollary, HyperParams, Regularizer, RunOptions, RunTrace};
use crate::parallel::Execution;

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "ZOVR_OUTPUT_DIR";

/// Stepsize constant of the baselines: `η = c/d`.
pub const DEFAULT_BASELINE_C: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub params: ParamSpec,
    /// Per-algorithm parameter overrides, keyed by algorithm name.
    #[serde(default)]
    pub overrides: BTreeMap<String, ParamSpec>,
    pub seeds: Vec<u64>,
    pub query_budget: Option<u64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_report_every")]
    pub report_every: usize,
    /// Target for queries-to-target: `f(x⁰) − fraction·(f(x⁰) − f_best)`.
    #[serde(default = "default_target_fraction")]
    pub target_fraction: f64,
    /// Run `(algorithm, seed)` pairs concurrently.
    #[serde(default = "default_true")]
    pub parallel: bool,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("zovr-output")
}

fn default_report_every() -> usize {
    1
}

fn default_target_fraction() -> f64 {
    0.5
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    /// LIBSVM file (kind = "libsvm").
    pub path: Option<PathBuf>,
    /// Scale every feature to `[−1, 1]` (LIBSVM only).
    #[serde(default = "default_true")]
    pub normalize: bool,
    /// Synthetic problem size.
    pub n: Option<usize>,
    pub d: Option<usize>,
    #[serde(default = "default_separability")]
    pub separability: f64,
    #[serde(default)]
    pub data_seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Adds `λ‖x‖₁`; applied by the proximal algorithm, reported for all.
    pub l1_lambda: Option<f64>,
    /// Overrides the computed smoothness upper bound.
    pub smoothness: Option<f64>,
    /// Starting point; zeros by default.
    pub x0: Option<Vec<f64>>,
}

fn default_separability() -> f64 {
    2.0
}

fn default_alpha() -> f64 {
    0.1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Synthetic,
    Libsvm,
}

/// Hyperparameters as written in a config. Explicit fields override the
/// corollary rule; baselines ignore the rule and default to `η = c/d`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub corollary: Option<Corollary>,
    pub k: Option<usize>,
    pub eta: Option<f64>,
    pub q: Option<usize>,
    pub s1: Option<usize>,
    pub s2: Option<usize>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    /// Baseline stepsize constant `c` in `η = c/d`.
    pub baseline_c: Option<f64>,
}

impl<'de> Deserialize<'de> for Corollary {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl ParamSpec {
    /// Fields of `other` take precedence.
    pub fn merged(&self, other: &ParamSpec) -> ParamSpec {
        ParamSpec {
            corollary: other.corollary.or(self.corollary),
            k: other.k.or(self.k),
            eta: other.eta.or(self.eta),
            q: other.q.or(self.q),
            s1: other.s1.or(self.s1),
            s2: other.s2.or(self.s2),
            beta: other.beta.or(self.beta),
            delta: other.delta.or(self.delta),
            baseline_c: other.baseline_c.or(self.baseline_c),
        }
    }

    /// Concrete hyperparameters for `alg` on a problem of size `(n, d)` with
    /// smoothness `l`. The seed is left at zero.
    pub fn resolve(&self, alg: Algorithm, n: usize, d: usize, l: f64) -> Result<HyperParams> {
        let missing = |field: &str| Error::Config(format!("{alg}: missing parameter `{field}`"));
        let k = self.k.ok_or_else(|| missing("k"))?;
        let rule = self.corollary.map(|c| select_params(c, n, d, k, l));
        let beta = self.beta.or(rule.map(|r| r.smoothing.beta)).ok_or_else(|| missing("beta"))?;
        let delta = self.delta.or(rule.map(|r| r.smoothing.delta));
        let hp = if alg.is_baseline() {
            let c = self.baseline_c.unwrap_or(DEFAULT_BASELINE_C);
            HyperParams {
                eta: self.eta.unwrap_or(c / d as f64),
                q: self.q.unwrap_or(1),
                k,
                s1: self.s1.unwrap_or(n),
                s2: self.s2.unwrap_or(1),
                smoothing: SmoothingParams::new(beta, delta.unwrap_or(beta))?,
                seed: 0,
            }
        } else {
            HyperParams {
                eta: self.eta.or(rule.map(|r| r.eta)).ok_or_else(|| missing("eta"))?,
                q: self.q.or(rule.map(|r| r.q)).ok_or_else(|| missing("q"))?,
                k,
                s1: self.s1.or(rule.map(|r| r.s1)).ok_or_else(|| missing("s1"))?,
                s2: self.s2.or(rule.map(|r| r.s2)).ok_or_else(|| missing("s2"))?,
                smoothing: SmoothingParams::new(beta, delta.ok_or_else(|| missing("delta"))?)?,
                seed: 0,
            }
        };
        hp.validate(n)?;
        Ok(hp)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.query_budget == Some(0) {
            return Err(Error::Config("query_budget must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.target_fraction) {
            return Err(Error::Config("target_fraction must lie in [0, 1]".into()));
        }
        for name in self.overrides.keys() {
            name.parse::<Algorithm>()?;
        }
        Ok(())
    }

    /// `output_dir`, unless the environment override is set.
    pub fn effective_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }

    pub fn params_for(&self, alg: Algorithm) -> ParamSpec {
        match self.overrides.iter().find(|(k, _)| k.parse::<Algorithm>().ok() == Some(alg)) {
            Some((_, o)) => self.params.merged(o),
            None => self.params,
        }
    }
}

/// The benchmark objective described by a problem spec.
pub fn build_problem(spec: &ProblemSpec) -> Result<NonconvexLogReg> {
    let mut data = match spec.kind {
        ProblemKind::Synthetic => {
            let n = spec.n.ok_or_else(|| Error::Config("synthetic problem needs `n`".into()))?;
            let d = spec.d.ok_or_else(|| Error::Config("synthetic problem needs `d`".into()))?;
            if n == 0 || d == 0 {
                return Err(Error::Config("n and d must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(spec.data_seed);
            let records = make_synthetic_logreg_data(&mut rng, n, d, spec.separability);
            Dataset { records, dim: d }
        }
        ProblemKind::Libsvm => {
            let path = spec
                .path
                .as_ref()
                .ok_or_else(|| Error::Config("libsvm problem needs `path`".into()))?;
            let mut data = load_libsvm(path)?;
            if spec.normalize {
                normalize_max_abs(&mut data);
            }
            data
        }
    };
    if let Some(d) = spec.d.filter(|_| spec.kind == ProblemKind::Libsvm) {
        data.dim = data.dim.max(d);
    }
    let obj = make_nonconvex_logreg(&data.records, data.dim, spec.alpha)?;
    Ok(match spec.smoothness {
        Some(l) => obj.with_smoothness(l),
        None => obj,
    })
}

/// Per-algorithm comparison at equal query budget; values are medians over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub budget: f64,
    pub median_f: f64,
    pub median_grad_norm_sq: f64,
    /// `inf` when the median run never reached the target.
    pub median_queries_to_target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub traces: Vec<(Algorithm, u64, RunTrace)>,
    pub summary: Vec<SummaryRow>,
    pub target: f64,
    pub output_dir: PathBuf,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len();
    match m {
        0 => f64::NAN,
        _ if m % 2 == 1 => v[m / 2],
        _ => 0.5 * (v[m / 2 - 1] + v[m / 2]),
    }
}

/// Summary of finished runs. The comparison budget is `query_budget` when
/// set and otherwise the smallest total spent by any run.
pub fn summarize(
    algorithms: &[Algorithm],
    traces: &[(Algorithm, u64, RunTrace)],
    query_budget: Option<u64>,
    target_fraction: f64,
) -> (Vec<SummaryRow>, f64) {
    let budget = query_budget
        .map(|b| b as f64)
        .unwrap_or_else(|| traces.iter().map(|(_, _, t)| t.total_queries as f64).fold(f64::INFINITY, f64::min));
    let f0 = traces
        .iter()
        .filter_map(|(_, _, t)| t.rows.first().map(|r| r.f))
        .fold(f64::NEG_INFINITY, f64::max);
    let f_best = traces
        .iter()
        .flat_map(|(_, _, t)| t.rows.iter().map(|r| r.f))
        .fold(f64::INFINITY, f64::min);
    let target = f0 - target_fraction * (f0 - f_best);
    let rows = algorithms
        .iter()
        .map(|&alg| {
            let runs: Vec<&RunTrace> = traces.iter().filter(|(a, _, _)| *a == alg).map(|(_, _, t)| t).collect();
            let collect = |f: &dyn Fn(&RunTrace) -> Option<f64>| -> Vec<f64> {
                runs.iter().map(|t| f(t).unwrap_or(f64::NAN)).collect()
            };
            SummaryRow {
                algorithm: alg,
                runs: runs.len(),
                budget,
                median_f: median(&collect(&|t| t.f_at_queries(budget))),
                median_grad_norm_sq: median(&collect(&|t| t.grad_norm_sq_at_queries(budget))),
                median_queries_to_target: median(
                    &runs
                        .iter()
                        .map(|t| t.queries_to_reach(target).unwrap_or(f64::INFINITY))
                        .collect::<Vec<_>>(),
                ),
            }
        })
        .collect();
    (rows, target)
}

pub fn write_summary(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["algorithm", "runs", "budget", "median_f", "median_grad_norm_sq", "median_queries_to_target"])?;
    for r in rows {
        w.write_record([
            r.algorithm.name().to_string(),
            r.runs.to_string(),
            format!("{:.16e}", r.budget),
            format!("{:.16e}", r.median_f),
            format!("{:.16e}", r.median_grad_norm_sq),
            format!("{:.16e}", r.median_queries_to_target),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Runs the experiment and writes its outputs.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let obj = build_problem(&cfg.problem)?;
    let (n, d) = (obj.num_components(), obj.dim());
    let l = obj.metadata().smoothness_l.unwrap_or(1.0);
    let h = match cfg.problem.l1_lambda {
        Some(lambda) => Regularizer::l1(lambda)?,
        None => Regularizer::Zero,
    };
    let x0 = match &cfg.problem.x0 {
        Some(x) if x.len() != d => return Err(Error::DimensionMismatch { expected: d, got: x.len() }),
        Some(x) => x.clone(),
        None => vec![0.0; d],
    };

    let mut jobs = Vec::new();
    for &alg in &cfg.algorithms {
        let hp = cfg.params_for(alg).resolve(alg, n, d, l)?;
        for &seed in &cfg.seeds {
            jobs.push((alg, hp.with_seed(seed)));
        }
    }
    let mut opts = RunOptions::new(x0);
    opts.query_budget = cfg.query_budget;
    opts.report_every = cfg.report_every.max(1);

    let exec = if cfg.parallel { Execution::Parallel } else { Execution::Sequential };
    let results = exec.map_slice(&jobs, |(alg, hp)| run_algorithm(*alg, &obj, &h, hp, &opts));
    let mut traces = Vec::with_capacity(jobs.len());
    for ((alg, hp), res) in jobs.iter().zip(results) {
        let trace = res?;
        if let Some(msg) = &trace.aborted {
            log::warn!("{alg} seed {}: {msg}", hp.seed);
        }
        traces.push((*alg, hp.seed, trace));
    }

    let dir = cfg.effective_output_dir();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for (alg, seed, trace) in &traces {
        write_trace(trace, &dir.join(format!("{}_seed{seed}.csv", alg.name())))?;
    }
    let (summary, target) = summarize(&cfg.algorithms, &traces, cfg.query_budget, cfg.target_fraction);
    write_summary(&summary, &dir.join("summary.csv"))?;
    Ok(ExperimentOutput {
        traces,
        summary,
        target,
        output_dir: dir,
    })
}

/// Human-readable summary table.
pub fn print_summary<W: Write>(out: &mut W, output: &ExperimentOutput) -> std::io::Result<()> {
    writeln!(out, "target f = {:.6e}", output.target)?;
    writeln!(
        out,
        "{:<22} {:>5} {:>12} {:>14} {:>14} {:>14}",
        "algorithm", "runs", "budget", "median f", "median |g|^2", "q-to-target"
    )?;
    for r in &output.summary {
        writeln!(
            out,
            "{:<22} {:>5} {:>12.0} {:>14.6e} {:>14.6e} {:>14.6e}",
            r.algorithm.name(),
            r.runs,
            r.budget,
            r.median_f,
            r.median_grad_norm_sq,
            r.median_queries_to_target
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
        algorithms = ["zo-spider-coord", "zo-sgd"]
        seeds = [1, 2]
        [problem]
        kind = "synthetic"
        n = 20
        d = 4
        [params]
        corollary = "cor3"
        k = 40
        [overrides.zo-sgd]
        s2 = 3
    "#;

    #[test]
    fn parses_and_resolves() {
        let cfg = ExperimentConfig::from_toml_str(BASIC).unwrap();
        let sgd = cfg.params_for(Algorithm::ZoSgd).resolve(Algorithm::ZoSgd, 20, 4, 1.0).unwrap();
        assert_eq!(sgd.s2, 3);
        assert!((sgd.eta - 0.2).abs() < 1e-15);
        let sp = cfg
            .params_for(Algorithm::ZoSpiderCoord)
            .resolve(Algorithm::ZoSpiderCoord, 20, 4, 1.0)
            .unwrap();
        assert_eq!((sp.s1, sp.q, sp.s2), (20, 5, 5));
        assert_eq!(sp.eta, 0.25);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml_str(&BASIC.replace("seeds = [1, 2]", "seeds = []")).is_err());
        assert!(ExperimentConfig::from_toml_str(&BASIC.replace("\"zo-sgd\"]", "\"adam\"]")).is_err());
        assert!(ExperimentConfig::from_toml_str(&format!("{BASIC}\nbogus = 1")).is_err());
        let cfg = ExperimentConfig::from_toml_str(&BASIC.replace("corollary = \"cor3\"", "")).unwrap();
        assert!(cfg.params.resolve(Algorithm::ZoSpiderCoord, 20, 4, 1.0).is_err());
    }

    #[test]
    fn median_is_order_free() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(median(&[f64::INFINITY, 1.0, 2.0]), 2.0);
    }
}
