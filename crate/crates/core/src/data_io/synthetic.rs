use rand::Rng;
use rand_distr::StandardNormal;

use super::DatasetRecord;

/// Synthetic binary classification data.
///
/// Features are standard Gaussians clipped to `[−1, 1]`. Labels follow a
/// planted linear rule `sign(w*ᵀx)` and are flipped with probability
/// `1/(1 + exp(separability·|w*ᵀx|))`: no flips at `separability = ∞`, fair
/// coin labels at `separability = 0`.
pub fn make_synthetic_logreg_data<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    d: usize,
    separability: f64,
) -> Vec<DatasetRecord> {
    let planted: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..d)
                .map(|_| rng.sample::<f64, _>(StandardNormal).clamp(-1.0, 1.0))
                .collect();
            let margin: f64 = x.iter().zip(&planted).map(|(a, b)| a * b).sum();
            let clean: i8 = if margin >= 0.0 { 1 } else { -1 };
            let flip_p = if separability.is_infinite() {
                0.0
            } else {
                1.0 / (1.0 + (separability * margin.abs()).exp())
            };
            let label = if rng.random::<f64>() < flip_p { -clean } else { clean };
            let features = x
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(j, v)| (j + 1, *v))
                .collect();
            DatasetRecord { label, features }
        })
        .collect()
}
