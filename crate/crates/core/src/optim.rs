//! Derivative-free Nelder-Mead minimization, used by the oracles.

/// Result of a minimization.
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes `f` from `start` with an initial axis-aligned simplex of edge
/// `step`. Stops when every vertex lies within `xtol` of the best one (in
/// max norm) or after `max_iter` iterations.
pub fn nelder_mead<F>(mut f: F, start: &[f64], step: f64, xtol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += step;
        let v = f(&p);
        simplex.push((p, v));
    }

    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[1..]
            .iter()
            .flat_map(|(p, _)| p.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= xtol {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|i| simplex[..dim].iter().map(|(p, _)| p[i]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let (worst, worst_val) = simplex[dim].clone();
        let second_worst = simplex[dim - 1].1;
        let best = simplex[0].1;

        let reflected = along(-1.0, &worst);
        let r_val = f(&reflected);
        if r_val < best {
            let expanded = along(-2.0, &worst);
            let e_val = f(&expanded);
            simplex[dim] = if e_val < r_val {
                (expanded, e_val)
            } else {
                (reflected, r_val)
            };
            continue;
        }
        if r_val < second_worst {
            simplex[dim] = (reflected, r_val);
            continue;
        }
        let (contracted, c_val) = if r_val < worst_val {
            let p = along(-0.5, &worst);
            let v = f(&p);
            (p, v)
        } else {
            let p = along(0.5, &worst);
            let v = f(&p);
            (p, v)
        };
        if c_val < worst_val.min(r_val) {
            simplex[dim] = (contracted, c_val);
            continue;
        }
        // Shrink toward the best vertex.
        let anchor = simplex[0].0.clone();
        for (p, v) in simplex.iter_mut().skip(1) {
            for (x, a) in p.iter_mut().zip(&anchor) {
                *x = a + 0.5 * (*x - a);
            }
            *v = f(p);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
    }
}
