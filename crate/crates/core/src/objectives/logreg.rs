use super::{GradientOracle, Objective, ObjectiveMetadata};
use crate::data_io::DatasetRecord;
use crate::error::{Error, Result};

/// Binary logistic regression with the bounded nonconvex regularizer
///
/// `f_i(w) = ln(1 + exp(−y_i wᵀx_i)) + α Σ_j w_j² / (1 + w_j²)`.
#[derive(Debug, Clone)]
pub struct NonconvexLogReg {
    n: usize,
    d: usize,
    /// Row-major `n × d` dense features.
    features: Vec<f64>,
    labels: Vec<f64>,
    alpha: f64,
    smoothness: f64,
}

/// `(1/4) max_i ‖x_i‖² + 2α`.
///
/// The cross-entropy Hessian is `σ'(·) x xᵀ` with `σ' ≤ 1/4`; the regularizer
/// `w²/(1+w²)` has second derivative `(2 − 6w²)/(1+w²)³ ∈ [−1/4, 2]`.
pub fn logreg_smoothness_bound(rows: &[&[f64]], alpha: f64) -> f64 {
    let max_sq = rows
        .iter()
        .map(|r| r.iter().map(|v| v * v).sum::<f64>())
        .fold(0.0, f64::max);
    0.25 * max_sq + 2.0 * alpha
}

/// Builds the objective from sparse records with 1-based feature indices
/// bounded by `dim`.
pub fn make_nonconvex_logreg(data: &[DatasetRecord], dim: usize, alpha: f64) -> Result<NonconvexLogReg> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut rows = Vec::with_capacity(data.len());
    let mut labels = Vec::with_capacity(data.len());
    for rec in data {
        let mut row = vec![0.0; dim];
        for &(idx, v) in &rec.features {
            if idx == 0 || idx > dim {
                return Err(Error::DimensionMismatch { expected: dim, got: idx });
            }
            row[idx - 1] = v;
        }
        rows.push(row);
        labels.push(f64::from(rec.label));
    }
    NonconvexLogReg::from_dense(rows, labels, alpha)
}

impl NonconvexLogReg {
    pub fn from_dense(rows: Vec<Vec<f64>>, labels: Vec<f64>, alpha: f64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if labels.len() != rows.len() {
            return Err(Error::LengthMismatch {
                what: "rows vs labels",
                left: rows.len(),
                right: labels.len(),
            });
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be a nonnegative real, got {alpha}")));
        }
        if let Some(bad) = labels.iter().find(|&&y| y != 1.0 && y != -1.0) {
            return Err(Error::InvalidLabel(bad.to_string()));
        }
        let d = rows[0].len();
        let mut features = Vec::with_capacity(rows.len() * d);
        for r in &rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: r.len() });
            }
            features.extend_from_slice(r);
        }
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let smoothness = logreg_smoothness_bound(&refs, alpha);
        Ok(NonconvexLogReg {
            n: rows.len(),
            d,
            features,
            labels,
            alpha,
            smoothness,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    /// `α Σ w_j²/(1+w_j²)`, always in `[0, α d)`.
    pub fn regularizer(&self, w: &[f64]) -> f64 {
        self.alpha * w.iter().map(|v| v * v / (1.0 + v * v)).sum::<f64>()
    }

    /// Overrides the smoothness constant reported in the metadata.
    pub fn with_smoothness(mut self, l: f64) -> Self {
        self.smoothness = l;
        self
    }
}

/// `ln(1 + e^{−m})` without overflow.
fn softplus_neg(m: f64) -> f64 {
    if m > 0.0 {
        (-m).exp().ln_1p()
    } else {
        -m + m.exp().ln_1p()
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl Objective for NonconvexLogReg {
    fn num_components(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.d
    }

    fn eval_component(&self, i: usize, w: &[f64]) -> f64 {
        let margin = self.labels[i] * super::dot(self.row(i), w);
        softplus_neg(margin) + self.regularizer(w)
    }

    fn metadata(&self) -> ObjectiveMetadata {
        ObjectiveMetadata {
            smoothness_l: Some(self.smoothness),
            ..ObjectiveMetadata::default()
        }
    }

    fn gradient_oracle(&self) -> Option<&dyn GradientOracle> {
        Some(self)
    }
}

impl GradientOracle for NonconvexLogReg {
    fn component_gradient(&self, i: usize, w: &[f64], out: &mut [f64]) {
        let y = self.labels[i];
        let x = self.row(i);
        let scale = -y * sigmoid(-y * super::dot(x, w));
        for ((o, xj), wj) in out.iter_mut().zip(x).zip(w) {
            let denom = 1.0 + wj * wj;
            *o = scale * xj + self.alpha * 2.0 * wj / (denom * denom);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(label: i8, features: Vec<(usize, f64)>) -> DatasetRecord {
        DatasetRecord { label, features }
    }

    #[test]
    fn zero_weights_give_ln2() {
        let data = vec![rec(1, vec![(1, 0.5), (3, -1.2)]), rec(-1, vec![(2, 2.0)])];
        let obj = make_nonconvex_logreg(&data, 3, 0.1).unwrap();
        for i in 0..2 {
            assert_eq!(obj.eval_component(i, &[0.0; 3]), std::f64::consts::LN_2);
        }
    }

    #[test]
    fn single_record_matches_scalar_formula() {
        let data = vec![rec(1, vec![(1, 1.0)])];
        let obj = make_nonconvex_logreg(&data, 2, 0.1).unwrap();
        for w in [[0.0f64, 0.0], [0.7, -1.3], [-4.0, 2.5]] {
            // ln(1+exp(-w1)) + 0.1 (w1²/(1+w1²) + w2²/(1+w2²))
            let expected = (1.0 + (-w[0]).exp()).ln()
                + 0.1 * (w[0] * w[0] / (1.0 + w[0] * w[0]) + w[1] * w[1] / (1.0 + w[1] * w[1]));
            assert!((obj.eval_component(0, &w) - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn smoothness_bound_formula() {
        let obj = NonconvexLogReg::from_dense(vec![vec![1.0, 1.0], vec![0.0, 3.0]], vec![1.0, -1.0], 0.1).unwrap();
        assert!((obj.metadata().smoothness_l.unwrap() - (0.25 * 9.0 + 0.2)).abs() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(make_nonconvex_logreg(&[], 2, 0.1), Err(Error::EmptyDataset)));
        let bad = vec![rec(1, vec![(5, 1.0)])];
        assert!(matches!(make_nonconvex_logreg(&bad, 2, 0.1), Err(Error::DimensionMismatch { .. })));
        let bad_label = vec![rec(2, vec![(1, 1.0)])];
        assert!(matches!(make_nonconvex_logreg(&bad_label, 2, 0.1), Err(Error::InvalidLabel(_))));
        let ragged = NonconvexLogReg::from_dense(vec![vec![1.0], vec![1.0, 2.0]], vec![1.0, 1.0], 0.0);
        assert!(matches!(ragged, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn extreme_margins_stay_finite() {
        let obj = NonconvexLogReg::from_dense(vec![vec![1.0]], vec![1.0], 0.0).unwrap();
        assert!((obj.eval_component(0, &[-800.0]) - 800.0).abs() < 1e-9);
        assert!(obj.eval_component(0, &[800.0]) >= 0.0);
    }

    proptest! {
        #[test]
        fn regularizer_is_bounded(w in proptest::collection::vec(-1e6f64..1e6, 1..8), alpha in 0.0f64..5.0) {
            let d = w.len();
            let obj = NonconvexLogReg::from_dense(vec![vec![0.0; d]], vec![1.0], alpha).unwrap();
            let r = obj.regularizer(&w);
            prop_assert!(r >= 0.0);
            prop_assert!(r <= alpha * d as f64);
        }
    }
}
