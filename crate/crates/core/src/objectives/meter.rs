use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};

use super::{Objective, ObjectiveMetadata};

/// Loop phase a query is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Outer,
    Inner,
    Unlabeled,
}

impl Phase {
    fn from_u8(v: u8) -> Phase {
        match v {
            0 => Phase::Outer,
            1 => Phase::Inner,
            _ => Phase::Unlabeled,
        }
    }
}

/// Counts component-function evaluations. Thread-safe; counters only grow.
#[derive(Debug)]
pub struct QueryMeter {
    total: AtomicU64,
    by_phase: [AtomicU64; 3],
    phase: AtomicU8,
}

impl Default for QueryMeter {
    fn default() -> Self {
        QueryMeter {
            total: AtomicU64::new(0),
            by_phase: [AtomicU64::new(0), AtomicU64::new(0), AtomicU64::new(0)],
            phase: AtomicU8::new(Phase::Unlabeled as u8),
        }
    }
}

impl QueryMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.total.load(Ordering::Relaxed)
    }

    /// Subsequent queries are attributed to `phase`.
    pub fn set_phase(&self, phase: Phase) {
        self.phase.store(phase as u8, Ordering::Relaxed);
    }

    pub fn phase(&self) -> Phase {
        Phase::from_u8(self.phase.load(Ordering::Relaxed))
    }

    pub fn phase_total(&self, phase: Phase) -> u64 {
        self.by_phase[phase as usize].load(Ordering::Relaxed)
    }

    pub fn per_phase(&self) -> BTreeMap<Phase, u64> {
        [Phase::Outer, Phase::Inner, Phase::Unlabeled]
            .into_iter()
            .map(|p| (p, self.phase_total(p)))
            .filter(|&(_, c)| c > 0)
            .collect()
    }

    fn record(&self) {
        self.total.fetch_add(1, Ordering::Relaxed);
        let p = self.phase.load(Ordering::Relaxed) as usize;
        self.by_phase[p].fetch_add(1, Ordering::Relaxed);
    }
}

/// Query-counting view of an objective.
///
/// Values pass through unchanged. No caching: every call is one query. The
/// gradient oracle of the wrapped objective is not reachable through this
/// view.
pub struct Metered<'a> {
    inner: &'a dyn Objective,
    meter: QueryMeter,
}

pub fn metered(obj: &dyn Objective) -> Metered<'_> {
    Metered {
        inner: obj,
        meter: QueryMeter::new(),
    }
}

impl Metered<'_> {
    pub fn meter(&self) -> &QueryMeter {
        &self.meter
    }

    pub fn queries(&self) -> u64 {
        self.meter.total()
    }
}

impl Objective for Metered<'_> {
    fn num_components(&self) -> usize {
        self.inner.num_components()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval_component(&self, i: usize, x: &[f64]) -> f64 {
        self.meter.record();
        self.inner.eval_component(i, x)
    }

    fn metadata(&self) -> ObjectiveMetadata {
        self.inner.metadata()
    }
}
