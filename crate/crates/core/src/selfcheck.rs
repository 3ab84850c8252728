//! Quick built-in sanity suite behind the `selfcheck` command.

use crate::dual::{BoundaryState, DualModel};
use crate::evaluation::{normalized_rmse, pearson, sign_fraction, u_statistic};
use crate::generators::{generate_chain, generate_model2, henon_step, ChainSpec};
use crate::mlp::{Normalizer, Perceptron};
use crate::series::{embed, normalized_difference, rolling_windows, TimeSeries};
use crate::training::{nelder_mead, EnsembleForecaster, SimplexOptions, TrainConfig};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
}

fn series(v: &[f64]) -> TimeSeries<f64> {
    TimeSeries::new(v.to_vec()).expect("finite")
}

fn constant_ensemble(c: f64) -> EnsembleForecaster<f64> {
    let mut w = vec![0.0; 17];
    w[16] = c;
    EnsembleForecaster::from_parts(
        vec![Perceptron::unpack(w, 2, 4).expect("17 weights")],
        Normalizer::identity(2),
        vec![0.0],
        TrainConfig::default(),
    )
    .expect("consistent ensemble")
}

fn cell_for(error: f64) -> usize {
    let model = DualModel {
        value_model: constant_ensemble(0.0),
        error_model: constant_ensemble(error),
        cell_boundaries: vec![0.5],
        n_cells: 2,
        boundary_state: BoundaryState::Active,
    };
    model.forecast_event(&[0.0, 0.0], 1).map(|e| e.cell).unwrap_or(0)
}

type Check = (&'static str, fn() -> bool);

const CHECKS: &[Check] = &[
    ("embed m=2 tau=1", || {
        embed(&series(&[1., 2., 3., 4., 5.]), 2, 1)
            .map(|d| d.inputs() == [vec![2., 1.], vec![3., 2.], vec![4., 3.]] && d.targets() == [3., 4., 5.])
            .unwrap_or(false)
    }),
    ("embed m=2 tau=3", || {
        embed(&series(&[1., 2., 3., 4., 5., 6.]), 2, 3)
            .map(|d| d.inputs() == [vec![4., 1.], vec![5., 2.]] && d.targets() == [5., 6.])
            .unwrap_or(false)
    }),
    ("embed rejects short series", || embed(&series(&[1., 2., 3.]), 2, 3).is_err()),
    ("normalized difference", || {
        normalized_difference(&series(&[100., 110.]))
            .map(|s| (s.values()[0] - 20.0 / 210.0).abs() < 1e-15)
            .unwrap_or(false)
            && normalized_difference(&series(&[5., 5., 5.])).map(|s| s.values() == [0., 0.]).unwrap_or(false)
            && normalized_difference(&series(&[1., -1.])).is_err()
    }),
    ("rolling windows", || {
        rolling_windows(1200, 200, 100, 100).map(|w| w.len() == 10 && w[9].test == (1101..=1200)).unwrap_or(false)
            && rolling_windows(300, 200, 100, 100).map(|w| w.len() == 1).unwrap_or(false)
            && rolling_windows(299, 200, 100, 100).map(|w| w.is_empty()).unwrap_or(false)
    }),
    ("zero perceptron outputs zero", || {
        Perceptron::<f64>::zeros(2, 4).forward(&[0.7, -1.0]).map(|y| y == 0.0).unwrap_or(false)
    }),
    ("half-activated hidden layer", || {
        let mut w = vec![0.0; 17];
        w[12..16].fill(1.0);
        Perceptron::unpack(w, 2, 4).and_then(|p| p.forward(&[1.0, 2.0])).map(|y| y == 2.0).unwrap_or(false)
    }),
    ("cost of constant zero net", || {
        Perceptron::<f64>::zeros(1, 1).cost(&[vec![0.0], vec![1.0]], &[1.0, -1.0]).map(|c| c == 1.0).unwrap_or(false)
    }),
    ("pack length and shape check", || {
        Perceptron::<f64>::zeros(2, 4).pack().len() == 17 && Perceptron::unpack(vec![0.0f64; 16], 2, 4).is_err()
    }),
    ("simplex on quadratic", || {
        let out = nelder_mead(|v: &[f64]| v.iter().map(|x| x * x).sum(), &[3.0, 4.0], &SimplexOptions::default());
        out.best_cost < 1e-6 && out.best.iter().all(|x| x.abs() < 1e-4)
    }),
    ("simplex on Rosenbrock", || {
        let f = |v: &[f64]| (1.0 - v[0]).powi(2) + 100.0 * (v[1] - v[0] * v[0]).powi(2);
        nelder_mead(f, &[-1.2, 1.0], &SimplexOptions::default()).best_cost < 1e-3
    }),
    ("simplex on constant", || {
        let out = nelder_mead(|_: &[f64]| 3.0, &[1.0, 1.0], &SimplexOptions::default());
        out.best_cost == 3.0 && out.converged
    }),
    ("cell tie rule", || cell_for(0.2) == 1 && cell_for(0.8) == 2 && cell_for(0.5) == 1),
    ("U of zero forecast", || u_statistic(&[0.1, -0.3], &[0.0, 0.0]).map(|u| u == 1.0).unwrap_or(false)),
    ("sign fraction", || {
        sign_fraction(&[0.1, -0.3], &[0.2, -0.1]).map(|s| s == 1.0).unwrap_or(false)
            && sign_fraction(&[0.1, -0.3], &[-0.2, 0.1]).map(|s| s == 0.0).unwrap_or(false)
    }),
    ("mean forecast scores one", || {
        let a = [1.0f64, 2.0, 6.0];
        normalized_rmse(&a, &[3.0; 3], crate::scalar::population_std(&a)).map(|e| (e - 1.0).abs() < 1e-15).unwrap_or(false)
    }),
    ("pearson", || pearson(&[1.0f64, 2.0, 3.0], &[1.0, 3.0, 2.0]).map(|r| (r - 0.5).abs() < 1e-15).unwrap_or(false)),
    ("Henon step", || henon_step(1.4, 0.3, 0.0, 0.0) == 1.0 && (henon_step(1.4f64, 0.3, 1.0, 1.0) + 0.1).abs() < 1e-15),
    ("undressed chain is binary", || {
        generate_chain::<f64>(&ChainSpec::model1().with_noise(0.0), 200, 1)
            .map(|s| s.series.values().iter().all(|v| v.abs() == 1.0))
            .unwrap_or(false)
    }),
    ("generator determinism", || {
        matches!((generate_model2::<f64>(10, 7), generate_model2::<f64>(10, 7)), (Ok(a), Ok(b)) if a == b)
    }),
];

pub fn run_selfcheck() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(name, check)| CheckResult {
            name,
            passed: check(),
        })
        .collect()
}
