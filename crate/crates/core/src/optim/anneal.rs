//! Simulated-annealing alternative to the downhill simplex.

use rand::Rng;

/// Geometric-cooling annealer with Gaussian-ish proposals (sum of uniforms).
pub fn anneal(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    iterations: u32,
    rng: &mut impl Rng,
    mut on_iteration: impl FnMut(u32, f64),
) -> (Vec<f64>, f64) {
    let mut current = x0.to_vec();
    let mut current_value = f(&current);
    let mut best = current.clone();
    let mut best_value = current_value;
    let t0 = 0.25_f64;
    let t1 = 1e-3_f64;
    for iter in 0..iterations {
        let progress = f64::from(iter) / f64::from(iterations.max(1));
        let temp = t0 * (t1 / t0).powf(progress);
        let sigma = step * (temp / t0).sqrt();
        let proposal: Vec<f64> = current
            .iter()
            .map(|&c| {
                let jitter: f64 = (0..4).map(|_| rng.gen::<f64>() - 0.5).sum::<f64>() * sigma;
                c + jitter
            })
            .collect();
        let value = f(&proposal);
        let accept = value < current_value || {
            let delta = value - current_value;
            delta.is_finite() && rng.gen::<f64>() < (-delta / temp).exp()
        };
        if accept {
            current = proposal;
            current_value = value;
            if value < best_value {
                best = current.clone();
                best_value = value;
            }
        }
        on_iteration(iter, best_value);
    }
    (best, best_value)
}
