//! Rolling-window experiment driver and artifact persistence.
//!
//! Each fold trains on its own window only: training patterns whose delayed
//! inputs would reach before the window are dropped. Test patterns may read
//! up to `(m-1)*tau + 1` points of history from the preceding training
//! window, never beyond it.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{ExperimentConfig, Source, Transform};

use crate::dual::{fit_dual_detailed, DualModel, EventForecast};
use crate::error::{Error, Result};
use crate::evaluation::{fold_report, render_table, Aggregate, FoldReport, ReportOptions};
use crate::series::{
    embed, normalized_difference, read_series_csv, rolling_windows, EmbeddedDataset, History, Label,
    TimeSeries, Window,
};
use crate::training::derive_seed;

pub const MODEL_FILE: &str = "dual_model.json";

/// A dual model plus what is needed to rebuild its inputs from raw data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub m: usize,
    pub tau: usize,
    pub transform: Transform,
    pub model: DualModel<f64>,
}

impl SavedModel {
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(MODEL_FILE);
        let text = serde_json::to_string_pretty(self)?;
        fs::write(&path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MODEL_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let saved: Self = serde_json::from_str(&text)?;
        // re-run the structural checks
        DualModel::<f64>::from_json(&serde_json::to_string(&saved.model)?)?;
        if saved.model.n_inputs() != saved.m {
            return Err(Error::Config("model input count does not match m".into()));
        }
        Ok(saved)
    }
}

/// Everything produced for one fold.
#[derive(Debug, Clone)]
pub struct FoldRun {
    pub window: Window,
    pub report: FoldReport,
    pub events: Vec<EventForecast<f64>>,
    pub test: EmbeddedDataset<f64>,
    pub train_patterns: usize,
    pub model: DualModel<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub series_length: usize,
    pub folds: Vec<FoldRun>,
    pub aggregate: Aggregate,
}

impl ExperimentResult {
    pub fn reports(&self) -> Vec<FoldReport> {
        self.folds.iter().map(|f| f.report.clone()).collect()
    }

    pub fn table(&self) -> String {
        render_table(&self.reports(), &self.aggregate)
    }
}

/// Loads or generates the series named by `config` and applies its transform.
pub fn load_series(config: &ExperimentConfig) -> Result<TimeSeries<f64>> {
    let raw = match &config.source {
        Source::Csv(path) => read_series_csv(path)?,
        other => other
            .benchmark()
            .expect("non-csv sources are benchmarks")
            .generate(config.series_length, config.series_seed())?,
    };
    apply_transform(&raw, config.transform())
}

pub fn apply_transform(raw: &TimeSeries<f64>, transform: Transform) -> Result<TimeSeries<f64>> {
    match transform {
        Transform::None => Ok(raw.clone()),
        Transform::NormalizedDifference => normalized_difference(raw),
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let series = load_series(config)?;
    run_on_series(config, &series)
}

/// Runs every rolling fold of `config` on an already prepared series.
pub fn run_on_series(config: &ExperimentConfig, series: &TimeSeries<f64>) -> Result<ExperimentResult> {
    config.validate()?;
    let windows = rolling_windows(series.len(), config.train_size, config.test_size, config.step)?;
    if windows.is_empty() {
        return Err(Error::SeriesTooShort {
            required: config.train_size + config.test_size,
            actual: series.len(),
        });
    }
    let embedded = embed(series, config.m, config.tau())?;
    let options = ReportOptions {
        price_changes: config.transform() == Transform::NormalizedDifference,
    };

    let folds = windows
        .par_iter()
        .enumerate()
        .map(|(k, window)| {
            run_fold(config, &embedded, k + 1, window, options).map_err(|e| Error::Fold {
                fold: k + 1,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<FoldRun>>>()?;

    let reports: Vec<FoldReport> = folds.iter().map(|f| f.report.clone()).collect();
    Ok(ExperimentResult {
        config: config.resolved(),
        series_length: series.len(),
        aggregate: Aggregate::from_reports(&reports),
        folds,
    })
}

fn run_fold(
    config: &ExperimentConfig,
    embedded: &EmbeddedDataset<f64>,
    fold: usize,
    window: &Window,
    options: ReportOptions,
) -> Result<FoldRun> {
    let train = embedded.window(window.train.clone(), History::Strict);
    let test = embedded.window(window.test.clone(), History::Borrow);
    let mut train_config = config.train_config.clone();
    train_config.seed = derive_seed(config.train_config.seed, fold as u64);
    let fit = fit_dual_detailed(&train, &train_config, config.n_cells)?;
    let outcome = fold_report(fold, &fit.model, &test, &train, &fit.residuals, options)?;
    Ok(FoldRun {
        window: window.clone(),
        report: outcome.report,
        events: outcome.events,
        train_patterns: train.len(),
        test,
        model: fit.model,
    })
}

/// `source_index,actual,predicted_value,predicted_abs_error,cell,label`.
pub fn write_events_csv<W: Write>(
    events: &[EventForecast<f64>],
    actuals: &[Option<f64>],
    labels: Option<&[Label]>,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "source_index,actual,predicted_value,predicted_abs_error,cell,label")?;
    for (i, e) in events.iter().enumerate() {
        let actual = actuals[i].map(|a| a.to_string()).unwrap_or_default();
        let label = labels.map(|l| l[i].as_str()).unwrap_or("");
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e.source_index, actual, e.predicted_value, e.predicted_abs_error, e.cell, label
        )?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the per-fold and aggregate tables, event dumps and fitted models
/// under `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let mkdir = |p: &Path| fs::create_dir_all(p).map_err(|e| Error::io(p, e));
    mkdir(dir)?;
    mkdir(&dir.join("events"))?;
    mkdir(&dir.join("models"))?;
    let mut written = Vec::new();

    let mut folds_csv = FoldReport::csv_header();
    folds_csv.push('\n');
    for f in &result.folds {
        folds_csv.push_str(&f.report.csv_row());
        folds_csv.push('\n');
    }
    let path = dir.join("folds.csv");
    write_file(&path, folds_csv.as_bytes())?;
    written.push(path);

    let path = dir.join("folds.json");
    write_file(&path, serde_json::to_string_pretty(&result.reports())?.as_bytes())?;
    written.push(path);

    let path = dir.join("aggregate.csv");
    write_file(&path, result.aggregate.csv().as_bytes())?;
    written.push(path);

    let path = dir.join("config.json");
    write_file(&path, serde_json::to_string_pretty(&result.config)?.as_bytes())?;
    written.push(path);

    let path = dir.join("report.txt");
    write_file(&path, report_text(result).as_bytes())?;
    written.push(path);

    for f in &result.folds {
        let name = format!("fold_{:02}", f.report.fold);
        let actuals: Vec<Option<f64>> = f.test.targets().iter().map(|&a| Some(a)).collect();
        let mut buf = Vec::new();
        write_events_csv(&f.events, &actuals, f.test.labels(), &mut buf).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("events").join(format!("{name}.csv"));
        write_file(&path, &buf)?;
        written.push(path);

        let model_dir = dir.join("models").join(&name);
        SavedModel {
            m: result.config.m,
            tau: result.config.tau(),
            transform: result.config.transform(),
            model: f.model.clone(),
        }
        .save(&model_dir)?;
        written.push(model_dir.join(MODEL_FILE));
    }
    Ok(written)
}

/// Human-readable report: a header describing the run, then the table.
pub fn report_text(result: &ExperimentResult) -> String {
    let c = &result.config;
    let mut out = String::new();
    let _ = writeln!(out, "# source: {:?}  transform: {:?}", c.source, c.transform());
    let _ = writeln!(
        out,
        "# series length: {}  m: {}  tau: {}  folds: {}",
        result.series_length,
        c.m,
        c.tau(),
        result.folds.len()
    );
    let _ = writeln!(
        out,
        "# train/test/step: {}/{}/{}  training patterns per fold: {} (first (m-1)*tau+1 = {} points of each window serve as history only)",
        c.train_size,
        c.test_size,
        c.step,
        c.effective_train_patterns(),
        c.train_size - c.effective_train_patterns()
    );
    let t = &c.train_config;
    let _ = writeln!(
        out,
        "# N_N: {}  N_1: {}  N_2: {}  simplex iterations: {}  seed: {}",
        t.n_neurons, t.n_trials, t.n_combined, t.max_simplex_iterations, t.seed
    );
    let degenerate = result.folds.iter().filter(|f| f.report.degenerate_boundaries).count();
    if degenerate > 0 {
        let _ = writeln!(out, "# folds with degenerate cell boundaries: {degenerate}");
    }
    out.push_str(&result.table());
    out
}

/// One row of a `forecast` run; `actual` is absent for the one-step-ahead event.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRow {
    pub event: EventForecast<f64>,
    pub actual: Option<f64>,
    pub label: Option<Label>,
}

/// Forecasts the last `tail` events of `raw`: `tail - 1` in-sample events
/// with known outcome, then the next, not yet observed, value.
pub fn forecast_tail(saved: &SavedModel, raw: &TimeSeries<f64>, tail: usize) -> Result<Vec<ForecastRow>> {
    if tail == 0 {
        return Err(Error::InvalidArgument("tail must be at least 1".into()));
    }
    let series = apply_transform(raw, saved.transform)?;
    let x = series.values();
    let span = (saved.m - 1) * saved.tau;
    if x.len() < span + 1 {
        return Err(Error::SeriesTooShort {
            required: span + 1,
            actual: x.len(),
        });
    }
    let mut rows = Vec::new();
    if tail > 1 && x.len() >= span + 2 {
        let embedded = embed(&series, saved.m, saved.tau)?;
        let start = embedded.len().saturating_sub(tail - 1);
        for p in start..embedded.len() {
            rows.push(ForecastRow {
                event: saved
                    .model
                    .forecast_event(&embedded.inputs()[p], embedded.source_indices()[p])?,
                actual: Some(embedded.targets()[p]),
                label: embedded.labels().map(|l| l[p]),
            });
        }
    }
    let last = x.len() - 1;
    let input: Vec<f64> = (0..saved.m).map(|k| x[last - k * saved.tau]).collect();
    rows.push(ForecastRow {
        event: saved.model.forecast_event(&input, x.len() + 1)?,
        actual: None,
        label: None,
    });
    Ok(rows)
}

pub fn write_forecast_csv<W: Write>(rows: &[ForecastRow], out: W) -> std::io::Result<()> {
    let events: Vec<EventForecast<f64>> = rows.iter().map(|r| r.event).collect();
    let actuals: Vec<Option<f64>> = rows.iter().map(|r| r.actual).collect();
    let labels: Option<Vec<Label>> = if rows.iter().any(|r| r.label.is_some()) {
        Some(rows.iter().map(|r| r.label.unwrap_or(Label::Undefined)).collect())
    } else {
        None
    };
    write_events_csv(&events, &actuals, labels.as_deref(), out)
}
