//! Training protocol: random half-splits with early stopping on the other
//! half, many restarts, and an ensemble of the restarts with the lowest
//! whole-sample cost.

pub mod simplex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mlp::{cost_raw, forward_raw, weight_count, Normalizer, Perceptron};
use crate::scalar::Scalar;
use crate::series::EmbeddedDataset;
pub use simplex::{nelder_mead, nelder_mead_observed, IterationView, SimplexOptions, SimplexOutcome};

pub const MIN_PATTERNS: usize = 4;

/// Hyper-parameters shared by the value and error forecasters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    /// Restarts per ensemble.
    pub n_trials: usize,
    /// Restarts kept in the ensemble.
    pub n_combined: usize,
    pub n_neurons: usize,
    pub max_simplex_iterations: usize,
    pub convergence_ftol: f64,
    /// Initial weights are uniform in `[-init_weight_range, init_weight_range]`.
    pub init_weight_range: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            n_trials: 50,
            n_combined: 25,
            n_neurons: 4,
            max_simplex_iterations: 5000,
            convergence_ftol: 1e-8,
            init_weight_range: 1.0,
            seed: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.n_trials == 0 || self.n_combined == 0 || self.n_neurons == 0 {
            return fail("n_trials, n_combined and n_neurons must be positive");
        }
        if self.n_combined > self.n_trials {
            return fail("n_combined must not exceed n_trials");
        }
        if self.max_simplex_iterations == 0 {
            return fail("max_simplex_iterations must be positive");
        }
        if !(self.convergence_ftol > 0.0) || !(self.init_weight_range > 0.0) {
            return fail("convergence_ftol and init_weight_range must be positive");
        }
        Ok(())
    }

    fn simplex_options<T: Scalar>(&self) -> SimplexOptions<T> {
        SimplexOptions::with_limits(self.max_simplex_iterations, T::lit(self.convergence_ftol))
    }
}

/// SplitMix64 finalizer; spreads `(base, index)` into an independent seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome of one restart.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleRun<T> {
    /// Weights with the lowest validation cost seen along the simplex trace.
    pub weights: Perceptron<T>,
    pub validation_best_cost: T,
    /// Validation cost of the best vertex when the simplex stopped.
    pub validation_final_cost: T,
    /// Cost of `weights` over every pattern.
    pub whole_sample_cost: T,
    pub iterations: usize,
}

fn check_patterns(n: usize) -> Result<()> {
    if n < MIN_PATTERNS {
        return Err(Error::TooFewPatterns {
            required: MIN_PATTERNS,
            actual: n,
        });
    }
    Ok(())
}

/// One restart on the dataset as given (no standardization).
pub fn train_single<T: Scalar>(
    dataset: &EmbeddedDataset<T>,
    config: &TrainConfig,
    restart_seed: u64,
) -> Result<SingleRun<T>> {
    check_patterns(dataset.len())?;
    config.validate()?;
    Ok(train_on(dataset.inputs(), dataset.targets(), dataset.m(), config, restart_seed))
}

fn train_on<T: Scalar>(
    inputs: &[Vec<T>],
    targets: &[T],
    n_inputs: usize,
    config: &TrainConfig,
    restart_seed: u64,
) -> SingleRun<T> {
    let n_neurons = config.n_neurons;
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed);

    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.shuffle(&mut rng);
    let (fit_idx, val_idx) = order.split_at(targets.len() / 2);
    let pick = |idx: &[usize]| -> (Vec<Vec<T>>, Vec<T>) {
        (
            idx.iter().map(|&i| inputs[i].clone()).collect(),
            idx.iter().map(|&i| targets[i]).collect(),
        )
    };
    let (fit_x, fit_y) = pick(fit_idx);
    let (val_x, val_y) = pick(val_idx);

    let range = config.init_weight_range;
    let start: Vec<T> = (0..weight_count(n_inputs, n_neurons))
        .map(|_| T::lit(rng.gen_range(-range..=range)))
        .collect();

    let mut best_val = T::infinity();
    let mut best_weights = start.clone();
    let mut last_val = T::infinity();
    let outcome = nelder_mead_observed(
        |w| cost_raw(w, n_inputs, n_neurons, &fit_x, &fit_y),
        &start,
        &config.simplex_options(),
        |view| {
            if view.best_changed {
                last_val = cost_raw(view.best, n_inputs, n_neurons, &val_x, &val_y);
                if last_val < best_val {
                    best_val = last_val;
                    best_weights.copy_from_slice(view.best);
                }
            }
        },
    );

    let whole = cost_raw(&best_weights, n_inputs, n_neurons, inputs, targets);
    SingleRun {
        weights: Perceptron::unpack(best_weights, n_inputs, n_neurons)
            .expect("simplex keeps weights finite and correctly shaped"),
        validation_best_cost: best_val,
        validation_final_cost: last_val,
        whole_sample_cost: whole,
        iterations: outcome.iterations,
    }
}

/// Average of the best restarts, with the standardization they were trained under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EnsembleForecaster<T> {
    pub members: Vec<Perceptron<T>>,
    pub normalizer: Normalizer<T>,
    /// Whole-sample cost of each member in standardized units, ascending.
    pub member_train_costs: Vec<T>,
    pub config: TrainConfig,
}

impl<T: Scalar> EnsembleForecaster<T> {
    pub fn from_parts(
        members: Vec<Perceptron<T>>,
        normalizer: Normalizer<T>,
        member_train_costs: Vec<T>,
        config: TrainConfig,
    ) -> Result<Self> {
        let ensemble = Self {
            members,
            normalizer,
            member_train_costs,
            config,
        };
        ensemble.validate()?;
        Ok(ensemble)
    }

    /// Checks the structural invariants, e.g. after loading from JSON.
    pub fn validate(&self) -> Result<()> {
        let first = self.members.first().ok_or(Error::EmptyDataset)?;
        let n_inputs = first.n_inputs();
        if self
            .members
            .iter()
            .any(|m| m.n_inputs() != n_inputs || m.n_neurons() != first.n_neurons())
        {
            return Err(Error::Config("ensemble members differ in shape".into()));
        }
        if self.normalizer.n_inputs() != n_inputs || self.normalizer.input_stds.len() != n_inputs {
            return Err(Error::InputDimension {
                expected: n_inputs,
                actual: self.normalizer.n_inputs(),
            });
        }
        if self.member_train_costs.len() != self.members.len() {
            return Err(Error::ShapeMismatch {
                expected: self.members.len(),
                actual: self.member_train_costs.len(),
            });
        }
        if self.member_train_costs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("member costs must be non-decreasing".into()));
        }
        Ok(())
    }

    pub fn n_inputs(&self) -> usize {
        self.members[0].n_inputs()
    }

    /// Mean member output in standardized target units.
    pub fn predict_standardized(&self, z: &[T]) -> T {
        let total: T = self
            .members
            .iter()
            .map(|m| forward_raw(m.params(), m.n_inputs(), m.n_neurons(), z))
            .sum();
        total / T::from_usize_lossy(self.members.len())
    }

    pub fn predict(&self, input: &[T]) -> Result<T> {
        if input.len() != self.n_inputs() {
            return Err(Error::InputDimension {
                expected: self.n_inputs(),
                actual: input.len(),
            });
        }
        let z = self.normalizer.input(input);
        Ok(self.normalizer.restore_target(self.predict_standardized(&z)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ensemble: Self = serde_json::from_str(text)?;
        ensemble.validate()?;
        Ok(ensemble)
    }
}

/// Every restart of an ensemble fit, kept for inspection.
#[derive(Debug, Clone)]
pub struct EnsembleFit<T> {
    pub ensemble: EnsembleForecaster<T>,
    /// All restarts in index order, in standardized units.
    pub runs: Vec<SingleRun<T>>,
}

pub fn train_ensemble<T: Scalar>(dataset: &EmbeddedDataset<T>, config: &TrainConfig) -> Result<EnsembleForecaster<T>> {
    train_ensemble_detailed(dataset, config).map(|f| f.ensemble)
}

/// [`train_ensemble`] that also returns every restart.
pub fn train_ensemble_detailed<T: Scalar>(
    dataset: &EmbeddedDataset<T>,
    config: &TrainConfig,
) -> Result<EnsembleFit<T>> {
    check_patterns(dataset.len())?;
    config.validate()?;
    let normalizer = Normalizer::fit(dataset.inputs(), dataset.targets())?;
    let inputs: Vec<Vec<T>> = dataset.inputs().iter().map(|x| normalizer.input(x)).collect();
    let targets: Vec<T> = dataset.targets().iter().map(|&y| normalizer.target(y)).collect();
    let n_inputs = dataset.m();

    let runs: Vec<SingleRun<T>> = (0..config.n_trials as u64)
        .into_par_iter()
        .map(|k| train_on(&inputs, &targets, n_inputs, config, derive_seed(config.seed, k)))
        .collect();

    let mut ranked: Vec<usize> = (0..runs.len()).collect();
    ranked.sort_by(|&a, &b| {
        runs[a]
            .whole_sample_cost
            .partial_cmp(&runs[b].whole_sample_cost)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    ranked.truncate(config.n_combined);
    let members = ranked.iter().map(|&k| runs[k].weights.clone()).collect();
    let costs = ranked.iter().map(|&k| runs[k].whole_sample_cost).collect();
    let ensemble = EnsembleForecaster::from_parts(members, normalizer, costs, config.clone())?;
    Ok(EnsembleFit { ensemble, runs })
}
