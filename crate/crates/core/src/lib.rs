//! Zeroth-order stochastic variance-reduced optimization for finite-sum
//! objectives `f(x) = (1/n) Σ f_i(x)`.
//!
//! Optimizers only ever see component function values. Every value they
//! request passes through a [`QueryMeter`](objectives::QueryMeter), so the
//! function-query cost of a run is counted exactly, one unit per `f_i`
//! evaluation.
//!
//! The crate provides:
//!
//! * [`objectives`]: the black-box objective abstraction plus benchmark
//!   problems (nonconvex logistic regression, finite-sum quadratics).
//! * [`estimators`]: coordinate-wise central-difference and two-point random
//!   gradient estimators and the variance-reduced combinations built on them.
//! * [`optimizers`]: ZO-SVRG-Coord-Rand, ZO-SVRG-Coord, ZO-SPIDER-Coord, the
//!   proximal and convex variants, the ZO-GD / ZO-SGD baselines, and
//!   parameter selectors.
//! * [`bounds`]: closed-form variance bounds and their Monte-Carlo checks.
//! * [`data_io`]: LIBSVM parsing, synthetic datasets and trace CSV files.
//! * [`experiment`]: config-driven benchmark runner used by the `zovr` CLI.
//!
//! Data-parallel loops (batch evaluations, Monte-Carlo shards, multi-seed
//! runs) go through [`parallel::Execution`]. With the default `parallel`
//! feature they run on rayon; without it everything runs sequentially. The
//! reduction order is fixed in both modes, so results are bit-identical.

pub mod bounds;
pub mod data_io;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod objectives;
pub mod optimizers;
pub mod parallel;
pub mod verification;

pub use error::{Error, Result};
