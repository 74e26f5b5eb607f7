//! Deterministic Nelder–Mead minimization with an optional projection.

/// Standard reflection / expansion / contraction / shrink coefficients.
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop once the simplex diameter falls below this value.
    pub diameter_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iter: 200,
            diameter_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

impl NelderMead {
    /// Minimizes `f` from `x0` with initial simplex edges `step` along each axis.
    pub fn minimize<F>(&self, f: F, x0: &[f64], step: f64) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        self.minimize_projected(f, x0, step, |_: &mut [f64]| {})
    }

    /// As [`minimize`](Self::minimize), but every trial point is passed through
    /// `project` first (used to stay inside a feasible domain).
    ///
    /// The returned value never exceeds `f(project(x0))`.
    pub fn minimize_projected<F, P>(&self, mut f: F, x0: &[f64], step: f64, mut project: P) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
        P: FnMut(&mut [f64]),
    {
        let n = x0.len();
        let mut eval = |mut x: Vec<f64>| {
            project(&mut x);
            let v = f(&x);
            (x, if v.is_nan() { f64::INFINITY } else { v })
        };
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push(eval(x0.to_vec()));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step;
            simplex.push(eval(x));
        }

        let mut iterations = 0;
        while iterations < self.max_iter {
            // Stable sort keeps ties in insertion order, so runs are reproducible.
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if diameter(&simplex) < self.diameter_tol {
                break;
            }
            iterations += 1;

            let worst = simplex[n].clone();
            let centroid: Vec<f64> = (0..n)
                .map(|k| simplex[..n].iter().map(|p| p.0[k]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
            };

            let reflected = eval(along(REFLECT));
            if reflected.1 < simplex[0].1 {
                let expanded = eval(along(EXPAND));
                simplex[n] = if expanded.1 < reflected.1 { expanded } else { reflected };
                continue;
            }
            if reflected.1 < simplex[n - 1].1 {
                simplex[n] = reflected;
                continue;
            }
            let contracted = if reflected.1 < worst.1 {
                eval(along(CONTRACT))
            } else {
                eval(along(-CONTRACT))
            };
            if contracted.1 < worst.1.min(reflected.1) {
                simplex[n] = contracted;
                continue;
            }
            let best = simplex[0].0.clone();
            for p in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = best.iter().zip(&p.0).map(|(b, v)| b + SHRINK * (v - b)).collect();
                *p = eval(x);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum { x, value, iterations }
    }
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..simplex.len() {
        for j in i + 1..simplex.len() {
            let s: f64 = simplex[i].0.iter().zip(&simplex[j].0).map(|(a, b)| (a - b) * (a - b)).sum();
            d = d.max(s.sqrt());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let nm = NelderMead::default();
        let m = nm.minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2), &[0.0, 0.0], 0.1);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock_with_budget() {
        let nm = NelderMead {
            max_iter: 2000,
            diameter_tol: 1e-12,
        };
        let m = nm.minimize(|x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2), &[-1.2, 1.0], 0.2);
        assert!(m.value < 1e-10, "{m:?}");
    }

    #[test]
    fn projection_is_respected_and_start_never_worsened() {
        let nm = NelderMead::default();
        let start = [0.3];
        let f = |x: &[f64]| (x[0] + 2.0).powi(2);
        let m = nm.minimize_projected(f, &start, 0.1, |x: &mut [f64]| x[0] = x[0].max(0.0));
        assert!(m.x[0] >= 0.0 && m.x[0] < 1e-8);
        assert!(m.value <= f(&start));
    }
}
