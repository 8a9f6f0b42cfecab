use super::{GradientOracle, Objective, ObjectiveMetadata};

/// Every component returns the same constant.
#[derive(Debug, Clone)]
pub struct ConstantObjective {
    n: usize,
    d: usize,
    value: f64,
}

impl ConstantObjective {
    pub fn new(n: usize, d: usize, value: f64) -> Self {
        ConstantObjective { n, d, value }
    }
}

impl Objective for ConstantObjective {
    fn num_components(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.d
    }

    fn eval_component(&self, _i: usize, _x: &[f64]) -> f64 {
        self.value
    }

    fn metadata(&self) -> ObjectiveMetadata {
        ObjectiveMetadata {
            smoothness_l: Some(0.0),
            variance_sigma2: Some(0.0),
            pl_gamma: None,
            optimum_value: Some(self.value),
        }
    }

    fn gradient_oracle(&self) -> Option<&dyn GradientOracle> {
        Some(self)
    }
}

impl GradientOracle for ConstantObjective {
    fn component_gradient(&self, _i: usize, _x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }
}

/// Single linear component `f(x) = aᵀx`.
#[derive(Debug, Clone)]
pub struct LinearObjective {
    a: Vec<f64>,
}

impl LinearObjective {
    pub fn new(a: Vec<f64>) -> Self {
        LinearObjective { a }
    }
}

impl Objective for LinearObjective {
    fn num_components(&self) -> usize {
        1
    }

    fn dim(&self) -> usize {
        self.a.len()
    }

    fn eval_component(&self, _i: usize, x: &[f64]) -> f64 {
        super::dot(&self.a, x)
    }

    fn metadata(&self) -> ObjectiveMetadata {
        ObjectiveMetadata {
            smoothness_l: Some(0.0),
            ..ObjectiveMetadata::default()
        }
    }

    fn gradient_oracle(&self) -> Option<&dyn GradientOracle> {
        Some(self)
    }
}

impl GradientOracle for LinearObjective {
    fn component_gradient(&self, _i: usize, _x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.a);
    }
}
