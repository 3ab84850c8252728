//! Invariant checks shared by the property suite and the acceptance run.
//!
//! Each check drives a proptest runner with a fixed seed so results are
//! reproducible, and returns the first counterexample as an error string.
#![allow(dead_code, clippy::needless_range_loop)]

use std::path::Path;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use dualcast::dual::{quantile_boundaries, BoundaryState, DualModel};
use dualcast::evaluation::{label_fraction, normalized_rmse, u_statistic};
use dualcast::generators::{generate_chain, generate_regime_switch, ChainSpec, Regime, RegimeSwitchSpec};
use dualcast::harness::{run_on_series, write_outputs, ExperimentConfig};
use dualcast::mlp::{weight_count, Normalizer, Perceptron};
use dualcast::series::{embed, normalized_difference, rolling_windows, History, Label, TimeSeries};
use dualcast::training::{nelder_mead, train_ensemble_detailed, SimplexOptions, TrainConfig};
use dualcast::{BenchmarkModel, EmbeddedDataset, EnsembleForecaster};

pub type Check = fn() -> Result<(), String>;

const SEED: [u8; 32] = *b"fixed seed for invariant suites!";

/// Runs `test` over `cases` inputs drawn from `strategy` with a fixed seed.
pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

fn tiny_config(seed: u64) -> TrainConfig {
    TrainConfig {
        n_trials: 6,
        n_combined: 3,
        max_simplex_iterations: 150,
        seed,
        ..TrainConfig::default()
    }
}

fn finite_series(len: impl Into<proptest::collection::SizeRange>) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0f64..10.0, len)
}

fn perceptron(n_inputs: usize, n_neurons: usize) -> impl Strategy<Value = Perceptron<f64>> {
    proptest::collection::vec(-5.0f64..5.0, weight_count(n_inputs, n_neurons))
        .prop_map(move |w| Perceptron::unpack(w, n_inputs, n_neurons).unwrap())
}

fn ensemble_of(members: Vec<Perceptron<f64>>) -> EnsembleForecaster<f64> {
    let n = members[0].n_inputs();
    let costs = vec![0.0; members.len()];
    EnsembleForecaster::from_parts(members, Normalizer::identity(n), costs, TrainConfig::default()).unwrap()
}

// ---------------------------------------------------------------- series

pub fn embed_reconstructs_targets() -> Result<(), String> {
    run(256, (finite_series(2..80), 1usize..5, 1usize..5), |(x, m, tau)| {
        let series = TimeSeries::new(x.clone()).unwrap();
        let Ok(d) = embed(&series, m, tau) else {
            prop_assume!(x.len() < (m - 1) * tau + 2);
            return Ok(());
        };
        prop_assert_eq!(d.len(), x.len() - (m - 1) * tau - 1);
        prop_assert!(d.source_indices().windows(2).all(|w| w[0] < w[1]));
        for (p, &s) in d.source_indices().iter().enumerate() {
            prop_assert_eq!(d.targets()[p].to_bits(), x[s - 1].to_bits());
            for k in 0..m {
                prop_assert_eq!(d.inputs()[p][k].to_bits(), x[s - 2 - k * tau].to_bits());
            }
        }
        Ok(())
    })
}

pub fn normalized_difference_is_bounded() -> Result<(), String> {
    run(256, proptest::collection::vec(1e-6f64..1e6, 2..200), |y| {
        let d = normalized_difference(&TimeSeries::new(y).unwrap()).unwrap();
        prop_assert!(d.values().iter().all(|&v| v > -2.0 && v < 2.0));
        Ok(())
    })
}

pub fn rolling_windows_stay_inside() -> Result<(), String> {
    run(512, (1usize..2000, 1usize..400, 1usize..200, 1usize..200), |(len, train, test, step)| {
        let windows = rolling_windows(len, train, test, step).unwrap();
        for w in &windows {
            prop_assert!(*w.train.start() >= 1);
            prop_assert_eq!(w.train.end() + 1, *w.test.start());
            prop_assert!(*w.test.end() <= len);
            prop_assert_eq!(w.train.clone().count(), train);
            prop_assert_eq!(w.test.clone().count(), test);
        }
        // one more shift would leave the series
        if let Some(last) = windows.last() {
            prop_assert!(last.test.end() + step > len);
        } else {
            prop_assert!(train + test > len);
        }
        let contiguous = rolling_windows(len, train, test, test).unwrap();
        prop_assert!(contiguous.windows(2).all(|p| p[0].test.end() + 1 == *p[1].test.start()));
        Ok(())
    })
}

// ---------------------------------------------------------------- generators

pub fn generators_are_deterministic() -> Result<(), String> {
    run(24, (1u8..=3, 3usize..400, any::<u64>()), |(model, len, seed)| {
        let model = BenchmarkModel::from_number(model).unwrap();
        let a: TimeSeries<f64> = in_pool(1, || model.generate(len, seed)).unwrap();
        let b: TimeSeries<f64> = in_pool(4, || model.generate(len, seed)).unwrap();
        let bits = |s: &TimeSeries<f64>| s.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
        prop_assert_eq!(a.labels(), b.labels());
        Ok(())
    })
}

/// Empirical `P(next = +1 | prev, cur)` of an undressed chain, indexed like
/// `ChainSpec::p_up`.
pub fn transition_frequencies(chain: &[i8]) -> [[f64; 2]; 2] {
    let mut up = [[0usize; 2]; 2];
    let mut total = [[0usize; 2]; 2];
    for w in chain.windows(3) {
        let (p, c) = (usize::from(w[0] > 0), usize::from(w[1] > 0));
        total[p][c] += 1;
        up[p][c] += usize::from(w[2] > 0);
    }
    let mut out = [[0.0; 2]; 2];
    for p in 0..2 {
        for c in 0..2 {
            out[p][c] = up[p][c] as f64 / total[p][c].max(1) as f64;
        }
    }
    out
}

pub fn chains_follow_their_tables() -> Result<(), String> {
    run(6, (prop_oneof![Just(1u8), Just(3u8)], any::<u64>()), |(model, seed)| {
        let spec = if model == 1 { ChainSpec::model1() } else { ChainSpec::model3() };
        let sample = generate_chain::<f64>(&spec.clone().with_noise(0.0), 10_000, seed).unwrap();
        prop_assert!(sample.series.values().iter().all(|&v| v == 1.0 || v == -1.0));
        let freq = transition_frequencies(&sample.chain);
        for p in 0..2 {
            for c in 0..2 {
                prop_assert!(
                    (freq[p][c] - spec.p_up[p][c]).abs() <= 0.03,
                    "model {} state ({}, {}): {} vs {}",
                    model,
                    p,
                    c,
                    freq[p][c],
                    spec.p_up[p][c]
                );
            }
        }
        Ok(())
    })
}

/// Largest deviation from the Hénon recurrence over fully chaotic triples.
pub fn henon_triple_error(length: usize, seed: u64) -> (f64, usize) {
    let sample = generate_regime_switch::<f64>(&RegimeSwitchSpec::default(), length, seed).unwrap();
    let x = sample.series.values();
    let mut worst = 0.0f64;
    let mut triples = 0;
    for k in 2..length {
        if sample.regimes[k - 2..=k].iter().all(|&r| r == Regime::Chaotic) {
            let e = (x[k] - (1.0 - 1.4 * x[k - 1] * x[k - 1] + 0.3 * x[k - 2])).abs();
            worst = worst.max(e);
            triples += 1;
        }
    }
    (worst, triples)
}

pub fn henon_triples_are_exact() -> Result<(), String> {
    run(16, (3usize..5000, any::<u64>()), |(len, seed)| {
        let (worst, _) = henon_triple_error(len, seed);
        prop_assert!(worst <= 1e-12, "worst {}", worst);
        Ok(())
    })
}

pub fn labels_match_regime_log() -> Result<(), String> {
    run(16, (3usize..2000, any::<u64>()), |(len, seed)| {
        let s = generate_regime_switch::<f64>(&RegimeSwitchSpec::default(), len, seed).unwrap();
        let labels = s.series.labels().unwrap();
        for k in 2..len {
            let chaotic = s.regimes[k - 2..=k].iter().all(|&r| r == Regime::Chaotic);
            prop_assert_eq!(labels[k] == Label::MorePredictable, chaotic);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- mlp

pub fn forward_is_bounded() -> Result<(), String> {
    let strategy = (1usize..4, 1usize..6).prop_flat_map(|(n, h)| {
        (perceptron(n, h), proptest::collection::vec(-1e3f64..1e3, n))
    });
    run(512, strategy, |(net, x)| {
        let out = net.forward(&x).unwrap();
        let w0 = *net.params().last().unwrap();
        let bound = w0.abs() + net.output_weights().iter().map(|w| w.abs()).sum::<f64>();
        prop_assert!(out.is_finite());
        prop_assert!(out.abs() <= bound * (1.0 + 1e-12));
        Ok(())
    })
}

pub fn cost_ignores_row_order() -> Result<(), String> {
    let strategy = (perceptron(2, 4), proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 1..60))
        .prop_flat_map(|(net, rows)| {
            let n = rows.len();
            (Just(net), Just(rows), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        });
    run(256, strategy, |(net, rows, perm)| {
        let inputs: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.0, r.1]).collect();
        let targets: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let c = net.cost(&inputs, &targets).unwrap();
        let pi: Vec<Vec<f64>> = perm.iter().map(|&i| inputs[i].clone()).collect();
        let pt: Vec<f64> = perm.iter().map(|&i| targets[i]).collect();
        let cp = net.cost(&pi, &pt).unwrap();
        prop_assert!(c >= 0.0);
        prop_assert!(close(c, cp, 1e-12), "{} vs {}", c, cp);
        Ok(())
    })
}

pub fn neuron_permutation_is_symmetric() -> Result<(), String> {
    let strategy = (1usize..4, 2usize..6).prop_flat_map(|(n, h)| {
        (
            perceptron(n, h),
            Just((0..h).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(-4.0f64..4.0, n),
        )
    });
    run(512, strategy, |(net, perm, x)| {
        let (n, h) = (net.n_inputs(), net.n_neurons());
        let mut w = Vec::with_capacity(net.params().len());
        for &j in &perm {
            w.extend_from_slice(net.hidden_row(j));
        }
        for &j in &perm {
            w.push(net.output_weights()[j]);
        }
        w.push(*net.params().last().unwrap());
        let permuted = Perceptron::unpack(w, n, h).unwrap();
        let (a, b) = (net.forward(&x).unwrap(), permuted.forward(&x).unwrap());
        prop_assert!(close(a, b, 1e-12), "{} vs {}", a, b);
        Ok(())
    })
}

pub fn pack_round_trips() -> Result<(), String> {
    let strategy = (1usize..5, 1usize..8).prop_flat_map(|(n, h)| perceptron(n, h));
    run(512, strategy, |net| {
        let again = Perceptron::unpack(net.pack(), net.n_inputs(), net.n_neurons()).unwrap();
        prop_assert_eq!(&again, &net);
        let text = serde_json::to_string(&net).unwrap();
        let back: Perceptron<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, net);
        Ok(())
    })
}

// ---------------------------------------------------------------- training

pub fn simplex_trace_never_rises() -> Result<(), String> {
    let strategy = (proptest::collection::vec(-3.0f64..3.0, 1..6), proptest::collection::vec(0.1f64..10.0, 6));
    run(128, strategy, |(start, scale)| {
        let cost = |v: &[f64]| {
            v.iter()
                .zip(&scale)
                .map(|(x, s)| s * (x - 1.0).powi(2) + (3.0 * x).sin())
                .sum::<f64>()
        };
        let out = nelder_mead(cost, &start, &SimplexOptions::with_limits(400, 1e-10));
        prop_assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(out.best_cost <= cost(&start));
        prop_assert_eq!(out.best_cost, *out.trace.last().unwrap());
        Ok(())
    })
}

fn random_dataset(rows: &[(f64, f64, f64)]) -> EmbeddedDataset<f64> {
    let inputs = rows.iter().map(|r| vec![r.0, r.1]).collect();
    let targets = rows.iter().map(|r| r.2).collect();
    EmbeddedDataset::from_parts(inputs, targets, (3..rows.len() + 3).collect(), 2, 1).unwrap()
}

fn dataset_strategy() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0), 8..40)
}

pub fn ensemble_selection_is_correct() -> Result<(), String> {
    run(24, (dataset_strategy(), any::<u64>()), |(rows, seed)| {
        let data = random_dataset(&rows);
        let fit = train_ensemble_detailed(&data, &tiny_config(seed)).unwrap();
        let mut all: Vec<f64> = fit.runs.iter().map(|r| r.whole_sample_cost).collect();
        prop_assert_eq!(all.len(), 6);
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(&fit.ensemble.member_train_costs[..], &all[..3]);
        prop_assert_eq!(fit.ensemble.members.len(), 3);
        for r in &fit.runs {
            prop_assert!(r.validation_best_cost <= r.validation_final_cost);
        }
        Ok(())
    })
}

pub fn ensemble_is_member_mean() -> Result<(), String> {
    let strategy = (1usize..6).prop_flat_map(|k| {
        (
            proptest::collection::vec(perceptron(2, 4), k),
            proptest::collection::vec(-3.0f64..3.0, 2),
        )
    });
    run(256, strategy, |(members, x)| {
        let mean = members.iter().map(|m| m.forward(&x).unwrap()).sum::<f64>() / members.len() as f64;
        let mut reversed = members.clone();
        reversed.reverse();
        let e = ensemble_of(members);
        let r = ensemble_of(reversed);
        prop_assert!(close(e.predict(&x).unwrap(), mean, 1e-14));
        prop_assert!(close(r.predict(&x).unwrap(), mean, 1e-14));
        Ok(())
    })
}

pub fn training_is_thread_independent() -> Result<(), String> {
    run(6, (dataset_strategy(), any::<u64>()), |(rows, seed)| {
        let data = random_dataset(&rows);
        let config = tiny_config(seed);
        let a = in_pool(1, || train_ensemble_detailed(&data, &config)).unwrap();
        let b = in_pool(4, || train_ensemble_detailed(&data, &config)).unwrap();
        prop_assert_eq!(a.ensemble, b.ensemble);
        Ok(())
    })
}

// ---------------------------------------------------------------- dual

fn boundaries() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(1e-3f64..10.0, 1..5).prop_map(|mut b| {
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.dedup();
        b
    })
}

fn constant_model(boundaries: Vec<f64>) -> DualModel<f64> {
    let zero = Perceptron::zeros(2, 4);
    DualModel {
        value_model: ensemble_of(vec![zero.clone()]),
        error_model: ensemble_of(vec![zero]),
        n_cells: boundaries.len() + 1,
        cell_boundaries: boundaries,
        boundary_state: BoundaryState::Active,
    }
}

pub fn cells_are_monotone() -> Result<(), String> {
    run(512, (boundaries(), 0.0f64..12.0, 0.0f64..12.0), |(b, x, y)| {
        let model = constant_model(b);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(model.cell_of(lo) <= model.cell_of(hi));
        prop_assert!((1..=model.n_cells).contains(&model.cell_of(hi)));
        Ok(())
    })
}

pub fn in_sample_split_is_median() -> Result<(), String> {
    run(512, proptest::collection::vec(0.0f64..5.0, 1..300), |r| {
        let b = quantile_boundaries(&r, 2)[0];
        let (lower, upper) = (r.iter().filter(|&&v| v <= b).count(), r.iter().filter(|&&v| v > b).count());
        let ties = r.iter().filter(|&&v| v == b).count();
        let n = r.len();
        // exact unless several residuals sit on the median
        prop_assert!(lower >= n.div_ceil(2) && lower < n.div_ceil(2) + ties);
        prop_assert_eq!(lower + upper, n);
        Ok(())
    })
}

pub fn error_clamp_is_tight() -> Result<(), String> {
    run(512, (perceptron(2, 4), proptest::collection::vec(-3.0f64..3.0, 2), boundaries()), |(net, x, b)| {
        let mut model = constant_model(b);
        model.error_model = ensemble_of(vec![net]);
        let ev = model.forecast_event(&x, 1).unwrap();
        prop_assert!(ev.predicted_abs_error >= 0.0);
        if ev.raw_error_output < 0.0 {
            prop_assert_eq!(ev.predicted_abs_error, 0.0);
        } else {
            prop_assert_eq!(ev.predicted_abs_error, ev.raw_error_output);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- evaluation

fn scored_split() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<bool>)> {
    (2usize..150).prop_flat_map(|n| {
        (
            proptest::collection::vec(-3.0f64..3.0, n),
            proptest::collection::vec(-3.0f64..3.0, n),
            proptest::collection::vec(any::<bool>(), n),
        )
    })
}

pub fn subset_rmse_decomposes() -> Result<(), String> {
    run(512, scored_split(), |(a, p, in1)| {
        let std = {
            let m = a.iter().sum::<f64>() / a.len() as f64;
            (a.iter().map(|v| (v - m).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
        };
        prop_assume!(std > 1e-9);
        let pick = |flag: bool| -> (Vec<f64>, Vec<f64>) {
            let idx: Vec<usize> = (0..a.len()).filter(|&i| in1[i] == flag).collect();
            (idx.iter().map(|&i| a[i]).collect(), idx.iter().map(|&i| p[i]).collect())
        };
        let part = |s: (Vec<f64>, Vec<f64>)| -> f64 {
            if s.0.is_empty() {
                0.0
            } else {
                normalized_rmse(&s.0, &s.1, std).unwrap().powi(2) * s.0.len() as f64
            }
        };
        let whole = normalized_rmse(&a, &p, std).unwrap().powi(2) * a.len() as f64;
        let parts = part(pick(true)) + part(pick(false));
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.max(1.0), "{} vs {}", whole, parts);
        Ok(())
    })
}

pub fn u_is_scale_invariant() -> Result<(), String> {
    run(512, (scored_split(), 1e-3f64..1e3), |((a, p, _), c)| {
        prop_assume!(a.iter().any(|&v| v != 0.0));
        let u = u_statistic(&a, &p).unwrap();
        let sa: Vec<f64> = a.iter().map(|v| v * c).collect();
        let sp: Vec<f64> = p.iter().map(|v| v * c).collect();
        prop_assert!(close(u, u_statistic(&sa, &sp).unwrap(), 1e-12));
        Ok(())
    })
}

pub fn label_fraction_is_weighted_mean() -> Result<(), String> {
    let strategy = proptest::collection::vec((any::<bool>(), any::<bool>()), 1..200);
    run(512, strategy, |rows| {
        let label = |more: bool| if more { Label::MorePredictable } else { Label::LessPredictable };
        let all: Vec<Label> = rows.iter().map(|r| label(r.0)).collect();
        let c1: Vec<Label> = rows.iter().filter(|r| r.1).map(|r| label(r.0)).collect();
        let c2: Vec<Label> = rows.iter().filter(|r| !r.1).map(|r| label(r.0)).collect();
        let n = all.len() as f64;
        let weighted = |s: &[Label]| if s.is_empty() { 0.0 } else { label_fraction::<f64>(s).unwrap() * s.len() as f64 / n };
        let ft: f64 = label_fraction(&all).unwrap();
        prop_assert!((ft - (weighted(&c1) + weighted(&c2))).abs() <= 1e-12);
        Ok(())
    })
}

// ---------------------------------------------------------------- harness

fn small_experiment(seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        train_size: 40,
        test_size: 15,
        step: 15,
        series_length: 100,
        train_config: TrainConfig {
            n_trials: 4,
            n_combined: 2,
            max_simplex_iterations: 120,
            seed,
            ..TrainConfig::default()
        },
        ..ExperimentConfig::default()
    }
}

fn aggregate_bytes(config: &ExperimentConfig, series: &TimeSeries<f64>, dir: &Path) -> Vec<u8> {
    let result = run_on_series(config, series).unwrap();
    write_outputs(&result, dir).unwrap();
    std::fs::read(dir.join("aggregate.csv")).unwrap()
}

pub fn experiments_are_reproducible() -> Result<(), String> {
    run(4, (1u8..=3, any::<u64>()), |(model, seed)| {
        let config = small_experiment(seed);
        let series: TimeSeries<f64> = BenchmarkModel::from_number(model).unwrap().generate(100, seed).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let a = in_pool(1, || aggregate_bytes(&config, &series, &dir.path().join("a")));
        let b = in_pool(3, || aggregate_bytes(&config, &series, &dir.path().join("b")));
        prop_assert_eq!(a, b);
        Ok(())
    })
}

pub fn folds_are_isolated() -> Result<(), String> {
    let strategy = (60usize..400, 1usize..4, 1usize..4, 12usize..80, 1usize..40, 1usize..40);
    run(256, strategy, |(len, m, tau, train, test, step)| {
        let span = (m - 1) * tau + 1;
        prop_assume!(train >= span + 2);
        let series = TimeSeries::new((0..len).map(|i| i as f64).collect()).unwrap();
        let embedded = embed(&series, m, tau).unwrap();
        for w in rolling_windows(len, train, test, step).unwrap() {
            let tr = embedded.window(w.train.clone(), History::Strict);
            let te = embedded.window(w.test.clone(), History::Borrow);
            prop_assert_eq!(te.len(), test);
            prop_assert_eq!(tr.len(), train - span);
            // inputs carry their own 0-based position, so index = value + 1
            for (x, &s) in tr.inputs().iter().zip(tr.source_indices()) {
                prop_assert!(w.train.contains(&s));
                prop_assert!(x.iter().all(|&v| w.train.contains(&(v as usize + 1))));
            }
            for (x, &s) in te.inputs().iter().zip(te.source_indices()) {
                prop_assert!(w.test.contains(&s));
                let earliest = x.iter().map(|&v| v as usize + 1).min().unwrap();
                prop_assert!(earliest + span >= *w.test.start());
                prop_assert!(w.train.contains(&earliest) || w.test.contains(&earliest));
            }
        }
        Ok(())
    })
}

/// Every invariant with a short name, in a fixed order.
pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("embed reconstructs targets", embed_reconstructs_targets),
        ("normalized difference in (-2, 2)", normalized_difference_is_bounded),
        ("rolling windows stay inside the series", rolling_windows_stay_inside),
        ("generators deterministic across threads", generators_are_deterministic),
        ("chain transition frequencies", chains_follow_their_tables),
        ("Henon triples exact", henon_triples_are_exact),
        ("Model II labels follow regime log", labels_match_regime_log),
        ("forward bounded by output weights", forward_is_bounded),
        ("cost non-negative and row-order free", cost_ignores_row_order),
        ("hidden-unit permutation symmetry", neuron_permutation_is_symmetric),
        ("pack/unpack round trip", pack_round_trips),
        ("simplex trace non-increasing", simplex_trace_never_rises),
        ("ensemble keeps the least-cost restarts", ensemble_selection_is_correct),
        ("ensemble equals member mean", ensemble_is_member_mean),
        ("training independent of thread count", training_is_thread_independent),
        ("cell assignment monotone", cells_are_monotone),
        ("in-sample two-cell median split", in_sample_split_is_median),
        ("error clamp fires only on negative output", error_clamp_is_tight),
        ("subset RMSE decomposition", subset_rmse_decomposes),
        ("U scale invariance", u_is_scale_invariant),
        ("label fraction weighted mean", label_fraction_is_weighted_mean),
        ("end-to-end aggregate reproducible", experiments_are_reproducible),
        ("fold isolation", folds_are_isolated),
    ]
}
