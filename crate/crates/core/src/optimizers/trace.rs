/// One reported iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// Iterate index: the row describes `x^k`.
    pub k: u64,
    /// Function queries spent to produce `x^k`.
    pub queries: u64,
    /// Objective value at `x^k` (including the regularizer for composite runs).
    pub f: f64,
    /// `‖∇f(x^k)‖²`, or `‖G(x^k, ∇f(x^k), η)‖²` for composite runs.
    pub grad_norm_sq: f64,
    /// Milliseconds since the start of the run; zero unless timing is enabled.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunTrace {
    pub algorithm: String,
    pub rows: Vec<TraceRow>,
    /// `ζ`, the index of the returned iterate.
    pub output_index: usize,
    pub output_x: Vec<f64>,
    pub final_x: Vec<f64>,
    pub total_queries: u64,
    pub outer_queries: u64,
    pub inner_queries: u64,
    /// Set when the run stopped on a non-finite value.
    pub aborted: Option<String>,
    /// Some smoothing radius was raised to the floating-point floor.
    pub smoothing_clamped: bool,
    /// Every iterate `x^0, x^1, ...` when requested in the run options.
    pub iterates: Vec<Vec<f64>>,
    pub optimum_value: Option<f64>,
}

impl RunTrace {
    pub fn from_rows(rows: Vec<TraceRow>) -> Self {
        RunTrace {
            total_queries: rows.last().map_or(0, |r| r.queries),
            rows,
            ..RunTrace::default()
        }
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// `f(x^k) − f*` per row, when the optimum is known.
    pub fn f_gaps(&self) -> Option<Vec<f64>> {
        let fs = self.optimum_value?;
        Some(self.rows.iter().map(|r| r.f - fs).collect())
    }

    /// Objective value at `queries`, linearly interpolated between rows.
    /// Past the last row the last value is returned.
    pub fn f_at_queries(&self, queries: f64) -> Option<f64> {
        interpolate(&self.rows, queries, |r| r.f)
    }

    pub fn grad_norm_sq_at_queries(&self, queries: f64) -> Option<f64> {
        interpolate(&self.rows, queries, |r| r.grad_norm_sq)
    }

    /// First query count at which `f` drops to `target` or below
    /// (linearly interpolated between the bracketing rows).
    pub fn queries_to_reach(&self, target: f64) -> Option<f64> {
        let first = self.rows.first()?;
        if first.f <= target {
            return Some(first.queries as f64);
        }
        self.rows.windows(2).find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            (b.f <= target).then(|| {
                let t = if a.f == b.f { 1.0 } else { (a.f - target) / (a.f - b.f) };
                a.queries as f64 + t * (b.queries as f64 - a.queries as f64)
            })
        })
    }
}

fn interpolate(rows: &[TraceRow], q: f64, value: impl Fn(&TraceRow) -> f64) -> Option<f64> {
    let first = rows.first()?;
    if q <= first.queries as f64 {
        return Some(value(first));
    }
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if q <= b.queries as f64 {
            let t = (q - a.queries as f64) / (b.queries as f64 - a.queries as f64);
            return Some(value(a) + t * (value(b) - value(a)));
        }
    }
    rows.last().map(value)
}
