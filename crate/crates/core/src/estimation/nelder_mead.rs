//! Nelder–Mead simplex minimizer.

/// Reflection, expansion, contraction and shrink coefficients.
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iters: usize,
    /// Spread of objective values across the simplex, relative to `max(1, |f_best|)`.
    pub f_tol: f64,
    /// Largest coordinate distance from any vertex to the best vertex.
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_iters: 5000, f_tol: 1e-10, x_tol: 1e-8 }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best objective value after each iteration.
    pub best_trace: Vec<f64>,
}

/// Initial simplex edge along coordinate `i`.
pub fn initial_step(x: f64) -> f64 {
    0.05 * x.abs().max(0.1)
}

/// Minimizes `objective` from `x0`. Non-finite objective values are treated
/// as `+inf`, so infeasible regions repel the simplex.
pub fn nelder_mead<F>(mut objective: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], count: &mut usize| {
        *count += 1;
        let v = objective(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += initial_step(x0[i]);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evaluations)).collect();
    let mut best_trace = Vec::new();

    if n == 0 {
        return NelderMeadResult {
            x: Vec::new(),
            f: values[0],
            converged: true,
            iterations: 0,
            evaluations,
            best_trace,
        };
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        // stable sort keeps earlier vertices first among ties
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);

        let f_spread = values[worst] - values[best];
        let x_spread = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let scale = values[best].abs().max(1.0);
        if f_spread.is_finite() && f_spread <= opts.f_tol * scale && x_spread <= opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, w)| c + coef * (c - w)).collect()
        };

        let reflected = toward(REFLECT, &simplex[worst]);
        let f_reflected = eval(&reflected, &mut evaluations);

        if f_reflected < values[best] {
            let expanded = toward(EXPAND, &simplex[worst]);
            let f_expanded = eval(&expanded, &mut evaluations);
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if f_reflected < values[second] {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            // outside contraction toward the reflected point, inside toward the worst
            let coef = if f_reflected < values[worst] { CONTRACT } else { -CONTRACT };
            let contracted = toward(coef, &simplex[worst]);
            let f_contracted = eval(&contracted, &mut evaluations);
            let threshold = values[worst].min(f_reflected);
            if f_contracted < threshold {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                let anchor = simplex[best].clone();
                for &idx in &order[1..] {
                    let shrunk: Vec<f64> =
                        anchor.iter().zip(&simplex[idx]).map(|(b, x)| b + SHRINK * (x - b)).collect();
                    values[idx] = eval(&shrunk, &mut evaluations);
                    simplex[idx] = shrunk;
                }
            }
        }
        let current_best = values.iter().copied().fold(f64::INFINITY, f64::min);
        best_trace.push(current_best);
    }

    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let best = order[0];
    NelderMeadResult {
        x: simplex[best].clone(),
        f: values[best],
        converged,
        iterations,
        evaluations,
        best_trace,
    }
}
