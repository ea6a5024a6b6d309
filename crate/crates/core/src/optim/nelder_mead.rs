//! Downhill-simplex minimizer over R^d with deterministic tie handling.

/// Standard Nelder–Mead with reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2. Returns the best point and value after `iterations` steps or
/// once the simplex spread collapses below `spread_tol`.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    iterations: u32,
    spread_tol: f64,
    mut on_iteration: impl FnMut(u32, f64),
) -> (Vec<f64>, f64) {
    let d = x0.len();
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    points.push(x0.to_vec());
    for i in 0..d {
        let mut p = x0.to_vec();
        p[i] += step * if x0[i] >= 0.0 { 1.0 } else { -1.0 };
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| f(p)).collect();

    for iter in 0..iterations {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        points = order.iter().map(|&i| points[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        on_iteration(iter, values[0]);

        let spread = values[d] - values[0];
        if spread.is_finite() && spread.abs() < spread_tol {
            break;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|j| points[..d].iter().map(|p| p[j]).sum::<f64>() / d as f64)
            .collect();
        let worst = points[d].clone();
        let reflect: Vec<f64> = (0..d).map(|j| 2.0 * centroid[j] - worst[j]).collect();
        let fr = f(&reflect);

        if fr < values[0] {
            let expand: Vec<f64> = (0..d).map(|j| 3.0 * centroid[j] - 2.0 * worst[j]).collect();
            let fe = f(&expand);
            if fe < fr {
                points[d] = expand;
                values[d] = fe;
            } else {
                points[d] = reflect;
                values[d] = fr;
            }
        } else if fr < values[d - 1] {
            points[d] = reflect;
            values[d] = fr;
        } else {
            let contract: Vec<f64> = if fr < values[d] {
                (0..d).map(|j| 1.5 * centroid[j] - 0.5 * worst[j]).collect()
            } else {
                (0..d).map(|j| 0.5 * centroid[j] + 0.5 * worst[j]).collect()
            };
            let fc = f(&contract);
            if fc < values[d].min(fr) {
                points[d] = contract;
                values[d] = fc;
            } else {
                for i in 1..=d {
                    for j in 0..d {
                        points[i][j] = 0.5 * (points[i][j] + points[0][j]);
                    }
                    values[i] = f(&points[i]);
                }
            }
        }
    }

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
        .unwrap_or(0);
    (points[best].clone(), values[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let mut f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.0).powi(2) + 2.0;
        let (x, v) = nelder_mead(&mut f, &[0.0, 0.0], 0.5, 200, 1e-12, |_, _| {});
        assert!((x[0] - 3.0).abs() < 1e-4);
        assert!((x[1] + 1.0).abs() < 1e-4);
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn handles_infinite_regions() {
        let mut f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::INFINITY
            } else {
                (x[0] - 1.0).powi(2)
            }
        };
        let (x, _) = nelder_mead(&mut f, &[2.0, 0.0], 0.5, 200, 1e-12, |_, _| {});
        assert!((x[0] - 1.0).abs() < 1e-3);
    }
}
