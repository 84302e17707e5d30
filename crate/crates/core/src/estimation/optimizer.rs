//! Derivative-free Nelder-Mead simplex minimizer.

/// Simplex settings. Termination requires the spread of objective values to
/// fall below `ftol` and the simplex diameter below `xtol`; a simplex whose
/// values have stopped improving for `stall_window` iterations while within
/// `ftol` is also accepted, which covers objectives that flatten out towards
/// infinity in some coordinate.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub ftol: f64,
    pub xtol: f64,
    pub max_iterations: usize,
    pub initial_step: f64,
    pub stall_window: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            ftol: 1e-10,
            xtol: 1e-9,
            max_iterations: 20_000,
            initial_step: 0.25,
            stall_window: 400,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    pub fn minimize<F>(&self, mut objective: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let mut eval = |x: &[f64]| {
            let v = objective(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        if dim == 0 {
            let f = eval(x0);
            return Minimum {
                x: Vec::new(),
                f,
                iterations: 0,
                converged: true,
            };
        }

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += self.initial_step;
            let f = eval(&x);
            simplex.push((x, f));
        }

        let mut iterations = 0;
        let mut converged = false;
        let mut last_best = f64::INFINITY;
        let mut since_improvement = 0;
        while iterations < self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            let spread = if worst.is_finite() {
                (worst - best).abs()
            } else {
                f64::INFINITY
            };
            let diameter = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if best < last_best - self.ftol {
                last_best = best;
                since_improvement = 0;
            } else {
                since_improvement += 1;
            }
            if spread <= self.ftol
                && (diameter <= self.xtol || since_improvement >= self.stall_window)
            {
                converged = true;
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..dim)
                .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = along(REFLECT);
            let f_reflected = eval(&reflected);
            if f_reflected < simplex[0].1 {
                let expanded = along(EXPAND);
                let f_expanded = eval(&expanded);
                simplex[dim] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
                continue;
            }
            if f_reflected < simplex[dim - 1].1 {
                simplex[dim] = (reflected, f_reflected);
                continue;
            }
            let (contracted, f_contracted) = if f_reflected < simplex[dim].1 {
                let c = along(CONTRACT * REFLECT);
                let f = eval(&c);
                (c, f)
            } else {
                let c = along(-CONTRACT);
                let f = eval(&c);
                (c, f)
            };
            if f_contracted < simplex[dim].1.min(f_reflected) {
                simplex[dim] = (contracted, f_contracted);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                for (v, a) in vertex.0.iter_mut().zip(&anchor) {
                    *v = a + SHRINK * (*v - a);
                }
                vertex.1 = eval(&vertex.0);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, f) = simplex.swap_remove(0);
        Minimum {
            x,
            f,
            iterations,
            converged,
        }
    }
}
