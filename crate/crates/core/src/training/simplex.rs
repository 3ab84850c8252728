//! Downhill simplex (Nelder-Mead) minimization.

use crate::scalar::Scalar;

const TINY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptions<T> {
    pub max_iterations: usize,
    /// Stop once `2|f_worst - f_best| / (|f_worst| + |f_best|)` drops below this.
    pub ftol: T,
    pub reflection: T,
    pub expansion: T,
    pub contraction: T,
    pub shrink: T,
}

impl<T: Scalar> Default for SimplexOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            ftol: T::lit(1e-8),
            reflection: T::one(),
            expansion: T::lit(2.0),
            contraction: T::lit(0.5),
            shrink: T::lit(0.5),
        }
    }
}

impl<T: Scalar> SimplexOptions<T> {
    pub fn with_limits(max_iterations: usize, ftol: T) -> Self {
        Self {
            max_iterations,
            ftol,
            ..Self::default()
        }
    }
}

/// State handed to an observer after every simplex update.
#[derive(Debug)]
pub struct IterationView<'a, T> {
    /// 0 for the initial simplex, then 1, 2, ...
    pub iteration: usize,
    pub best: &'a [T],
    pub best_cost: T,
    /// Whether the best vertex differs from the previous iteration's.
    pub best_changed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome<T> {
    pub best: Vec<T>,
    pub best_cost: T,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best cost after each iteration, starting with the initial simplex.
    pub trace: Vec<T>,
}

/// Minimizes `cost` starting from `start`.
pub fn nelder_mead<T, F>(cost: F, start: &[T], options: &SimplexOptions<T>) -> SimplexOutcome<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    nelder_mead_observed(cost, start, options, |_| {})
}

/// [`nelder_mead`] with a callback after each iteration.
pub fn nelder_mead_observed<T, F, O>(
    mut cost: F,
    start: &[T],
    options: &SimplexOptions<T>,
    mut observer: O,
) -> SimplexOutcome<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
    O: FnMut(&IterationView<'_, T>),
{
    let n = start.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[T]| {
        evaluations += 1;
        let f = cost(x);
        if f.is_finite() {
            f
        } else {
            T::infinity()
        }
    };

    let mut vertices: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    vertices.push(start.to_vec());
    for k in 0..n {
        let mut v = start.to_vec();
        let step = (T::lit(0.1) * v[k].abs()).max(T::lit(0.1));
        v[k] = v[k] + step;
        vertices.push(v);
    }
    let mut values: Vec<T> = vertices.iter().map(|v| eval(v)).collect();
    let mut order: Vec<usize> = (0..=n).collect();

    let mut trace = Vec::new();
    let mut iteration = 0;
    let mut last_best: Option<usize> = None;
    let mut converged = false;
    let tiny = T::lit(TINY);
    let two = T::lit(2.0);

    loop {
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let lo = order[0];
        let hi = order[n];
        let next_hi = order[n.saturating_sub(1)];

        trace.push(values[lo]);
        observer(&IterationView {
            iteration,
            best: &vertices[lo],
            best_cost: values[lo],
            best_changed: last_best != Some(lo) || iteration == 0,
        });
        last_best = Some(lo);

        let spread = two * (values[hi] - values[lo]).abs() / (values[hi].abs() + values[lo].abs() + tiny);
        if spread < options.ftol || n == 0 {
            converged = true;
            break;
        }
        if iteration >= options.max_iterations {
            break;
        }
        iteration += 1;

        let mut centroid = vec![T::zero(); n];
        for &idx in &order[..n] {
            for (c, &x) in centroid.iter_mut().zip(&vertices[idx]) {
                *c = *c + x;
            }
        }
        let inv = T::one() / T::from_usize_lossy(n);
        centroid.iter_mut().for_each(|c| *c = *c * inv);

        let along = |coef: T, from: &[T]| -> Vec<T> {
            centroid
                .iter()
                .zip(from)
                .map(|(&c, &x)| c + coef * (x - c))
                .collect()
        };

        let reflected = along(-options.reflection, &vertices[hi]);
        let f_reflected = eval(&reflected);

        if f_reflected < values[lo] {
            let expanded = along(options.expansion, &reflected);
            let f_expanded = eval(&expanded);
            if f_expanded < f_reflected {
                vertices[hi] = expanded;
                values[hi] = f_expanded;
            } else {
                vertices[hi] = reflected;
                values[hi] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[next_hi] {
            vertices[hi] = reflected;
            values[hi] = f_reflected;
            continue;
        }

        let accepted = if f_reflected < values[hi] {
            let outside = along(options.contraction, &reflected);
            let f_outside = eval(&outside);
            if f_outside <= f_reflected {
                vertices[hi] = outside;
                values[hi] = f_outside;
                true
            } else {
                false
            }
        } else {
            let inside = along(options.contraction, &vertices[hi]);
            let f_inside = eval(&inside);
            if f_inside < values[hi] {
                vertices[hi] = inside;
                values[hi] = f_inside;
                true
            } else {
                false
            }
        };
        if !accepted {
            let anchor = vertices[lo].clone();
            for idx in 0..=n {
                if idx == lo {
                    continue;
                }
                for (x, &a) in vertices[idx].iter_mut().zip(&anchor) {
                    *x = a + options.shrink * (*x - a);
                }
                values[idx] = eval(&vertices[idx]);
            }
        }
    }

    let lo = order[0];
    SimplexOutcome {
        best: vertices[lo].clone(),
        best_cost: values[lo],
        iterations: iteration,
        evaluations,
        converged,
        trace,
    }
}
