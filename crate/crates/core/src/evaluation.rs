//! Per-fold forecast statistics and their aggregation across folds.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::dual::{DualModel, EventForecast};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::series::{EmbeddedDataset, Label};

fn check_pair<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(())
}

fn rmse<T: Scalar>(actuals: &[T], predictions: &[T]) -> T {
    let ss: T = actuals
        .iter()
        .zip(predictions)
        .map(|(&a, &p)| (a - p) * (a - p))
        .sum();
    (ss / T::from_usize_lossy(actuals.len())).sqrt()
}

/// RMSE divided by the standard deviation of the whole test sample.
pub fn normalized_rmse<T: Scalar>(actuals: &[T], predictions: &[T], whole_test_std: T) -> Result<T> {
    check_pair(actuals, predictions)?;
    if !(whole_test_std > T::zero()) {
        return Err(Error::DegenerateTestSet("test sample has zero spread"));
    }
    Ok(rmse(actuals, predictions) / whole_test_std)
}

/// Model RMSE over the RMSE of the zero-change forecast on the same points.
pub fn u_statistic<T: Scalar>(actuals: &[T], predictions: &[T]) -> Result<T> {
    check_pair(actuals, predictions)?;
    let zeros = vec![T::zero(); actuals.len()];
    let benchmark = rmse(actuals, &zeros);
    if benchmark == T::zero() {
        return Err(Error::DegenerateTestSet("all actual changes are zero"));
    }
    Ok(rmse(actuals, predictions) / benchmark)
}

/// Fraction of pairs with `actual * prediction > 0`; exact zeros count as misses.
pub fn sign_fraction<T: Scalar>(actuals: &[T], predictions: &[T]) -> Result<T> {
    check_pair(actuals, predictions)?;
    let hits = actuals
        .iter()
        .zip(predictions)
        .filter(|(&a, &p)| a * p > T::zero())
        .count();
    Ok(T::from_usize_lossy(hits) / T::from_usize_lossy(actuals.len()))
}

/// Fraction of labels that are `MorePredictable`.
pub fn label_fraction<T: Scalar>(labels: &[Label]) -> Result<T> {
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if labels.contains(&Label::Undefined) {
        return Err(Error::MissingLabels);
    }
    let more = labels.iter().filter(|&&l| l == Label::MorePredictable).count();
    Ok(T::from_usize_lossy(more) / T::from_usize_lossy(labels.len()))
}

pub fn pearson<T: Scalar>(xs: &[T], ys: &[T]) -> Result<T> {
    check_pair(xs, ys)?;
    if xs.len() < 2 {
        return Err(Error::DegenerateCorrelation);
    }
    let mx = scalar::mean(xs);
    let my = scalar::mean(ys);
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::DegenerateCorrelation);
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.max(-T::one()).min(T::one()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
}

/// Pooled-variance two-sample t statistic, `mean(a) - mean(b)` in the numerator.
pub fn two_sample_t<T: Scalar>(a: &[T], b: &[T]) -> Result<TTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::DegenerateSamples("each sample needs two or more values"));
    }
    let to64 = |s: &[T]| s.iter().map(|v| v.to_f64_lossy()).collect::<Vec<f64>>();
    let (a, b) = (to64(a), to64(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (scalar::mean(&a), scalar::mean(&b));
    let ss = |s: &[f64], m: f64| s.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    let pooled = (ss(&a, ma) + ss(&b, mb)) / (na + nb - 2.0);
    if !(pooled > 0.0) {
        return Err(Error::DegenerateSamples("pooled variance is zero"));
    }
    let t = (ma - mb) / (pooled * (1.0 / na + 1.0 / nb)).sqrt();
    Ok(TTest {
        t,
        df: a.len() + b.len() - 2,
    })
}

/// Two-sided critical value of Student's t at significance `alpha`.
pub fn t_critical_two_sided(alpha: f64, df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - alpha / 2.0)
}

/// Statistics of one rolling fold. Absent values serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    /// 1-based fold number.
    pub fold: usize,
    pub eps_1: Option<f64>,
    pub eps_2: Option<f64>,
    pub eps_t: f64,
    pub f_1: Option<f64>,
    pub f_2: Option<f64>,
    pub f_t: Option<f64>,
    pub u_1: Option<f64>,
    pub u_2: Option<f64>,
    pub u_t: Option<f64>,
    pub s_1: Option<f64>,
    pub s_2: Option<f64>,
    pub s_t: Option<f64>,
    pub n_1: usize,
    pub n_2: usize,
    pub rho_tr: Option<f64>,
    pub rho_pr: Option<f64>,
    pub degenerate_boundaries: bool,
}

pub const REPORT_COLUMNS: [&str; 16] = [
    "eps_1", "eps_2", "eps_t", "f_1", "f_2", "f_t", "u_1", "u_2", "u_t", "s_1", "s_2", "s_t", "n_1",
    "n_2", "rho_tr", "rho_pr",
];

impl FoldReport {
    /// Values in [`REPORT_COLUMNS`] order.
    pub fn values(&self) -> [Option<f64>; 16] {
        [
            self.eps_1,
            self.eps_2,
            Some(self.eps_t),
            self.f_1,
            self.f_2,
            self.f_t,
            self.u_1,
            self.u_2,
            self.u_t,
            self.s_1,
            self.s_2,
            self.s_t,
            Some(self.n_1 as f64),
            Some(self.n_2 as f64),
            self.rho_tr,
            self.rho_pr,
        ]
    }

    pub fn csv_header() -> String {
        format!("fold,{}", REPORT_COLUMNS.join(","))
    }

    pub fn csv_row(&self) -> String {
        let cells: Vec<String> = self.values().iter().map(|v| fmt_cell(*v)).collect();
        format!("{},{}", self.fold, cells.join(","))
    }
}

fn fmt_cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Populate the U statistics and sign fractions (series of changes).
    pub price_changes: bool,
}

/// Everything computed for one fold.
#[derive(Debug, Clone)]
pub struct FoldOutcome<T> {
    pub report: FoldReport,
    pub events: Vec<EventForecast<T>>,
}

/// Scores a fitted model on its test window.
///
/// `train` and `train_residuals` are the training patterns and the value
/// model's absolute in-sample errors on them, used for `rho_tr`.
pub fn fold_report<T: Scalar>(
    fold: usize,
    model: &DualModel<T>,
    test: &EmbeddedDataset<T>,
    train: &EmbeddedDataset<T>,
    train_residuals: &[T],
    options: ReportOptions,
) -> Result<FoldOutcome<T>> {
    let events = model.classify_test_set(test)?;
    let actual: Vec<T> = test.targets().to_vec();
    let whole_std = scalar::population_std(&actual);
    if !(whole_std > T::zero()) {
        return Err(Error::DegenerateTestSet("test sample has zero spread"));
    }
    let predicted: Vec<T> = events.iter().map(|e| e.predicted_value).collect();
    // cell 2 collects every event outside cell 1 when n_cells > 2
    let (cell1, cell2): (Vec<usize>, Vec<usize>) = (0..events.len()).partition(|&i| events[i].cell == 1);
    let gather = |idx: &[usize], src: &[T]| idx.iter().map(|&i| src[i]).collect::<Vec<T>>();
    let f64_of = |v: T| v.to_f64_lossy();

    let eps_subset = |idx: &[usize]| -> Result<Option<f64>> {
        if idx.is_empty() {
            return Ok(None);
        }
        normalized_rmse(&gather(idx, &actual), &gather(idx, &predicted), whole_std).map(|v| Some(f64_of(v)))
    };
    let all: Vec<usize> = (0..events.len()).collect();

    let (f_1, f_2, f_t) = match test.labels() {
        Some(labels) => {
            let frac = |idx: &[usize]| -> Result<Option<f64>> {
                if idx.is_empty() {
                    return Ok(None);
                }
                let l: Vec<Label> = idx.iter().map(|&i| labels[i]).collect();
                label_fraction::<f64>(&l).map(Some)
            };
            (frac(&cell1)?, frac(&cell2)?, frac(&all)?)
        }
        None => (None, None, None),
    };

    let subset_stat = |idx: &[usize], stat: fn(&[T], &[T]) -> Result<T>| -> Option<f64> {
        if idx.is_empty() {
            return None;
        }
        stat(&gather(idx, &actual), &gather(idx, &predicted)).ok().map(f64_of)
    };
    let (u, s) = if options.price_changes {
        (
            [
                subset_stat(&cell1, u_statistic),
                subset_stat(&cell2, u_statistic),
                subset_stat(&all, u_statistic),
            ],
            [
                subset_stat(&cell1, sign_fraction),
                subset_stat(&cell2, sign_fraction),
                subset_stat(&all, sign_fraction),
            ],
        )
    } else {
        ([None; 3], [None; 3])
    };

    let train_predicted = train
        .inputs()
        .iter()
        .map(|x| model.error_model.predict(x).map(|e| e.max(T::zero())))
        .collect::<Result<Vec<T>>>()?;
    let rho_tr = pearson(train_residuals, &train_predicted).ok().map(f64_of);
    let test_abs_err: Vec<T> = actual.iter().zip(&predicted).map(|(&a, &p)| (a - p).abs()).collect();
    let test_pred_err: Vec<T> = events.iter().map(|e| e.predicted_abs_error).collect();
    let rho_pr = pearson(&test_abs_err, &test_pred_err).ok().map(f64_of);

    let report = FoldReport {
        fold,
        eps_1: eps_subset(&cell1)?,
        eps_2: eps_subset(&cell2)?,
        eps_t: eps_subset(&all)?.expect("test set is non-empty"),
        f_1,
        f_2,
        f_t,
        u_1: u[0],
        u_2: u[1],
        u_t: u[2],
        s_1: s[0],
        s_2: s[1],
        s_t: s[2],
        n_1: cell1.len(),
        n_2: cell2.len(),
        rho_tr,
        rho_pr,
        degenerate_boundaries: model.is_degenerate(),
    };
    Ok(FoldOutcome { report, events })
}

/// Column-wise mean and dispersion over folds; folds missing a value are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub folds: usize,
    pub mean: Vec<Option<f64>>,
    pub deviation: Vec<Option<f64>>,
}

impl Aggregate {
    pub fn from_reports(reports: &[FoldReport]) -> Self {
        let mut mean = Vec::with_capacity(REPORT_COLUMNS.len());
        let mut deviation = Vec::with_capacity(REPORT_COLUMNS.len());
        for c in 0..REPORT_COLUMNS.len() {
            let col: Vec<f64> = reports.iter().filter_map(|r| r.values()[c]).collect();
            if col.is_empty() {
                mean.push(None);
                deviation.push(None);
                continue;
            }
            let m = scalar::mean(&col);
            mean.push(Some(m));
            deviation.push(if col.len() > 1 {
                let ss: f64 = col.iter().map(|v| (v - m) * (v - m)).sum();
                Some((ss / (col.len() - 1) as f64).sqrt())
            } else {
                None
            });
        }
        Self {
            folds: reports.len(),
            mean,
            deviation,
        }
    }

    pub fn column(&self, name: &str) -> Option<(Option<f64>, Option<f64>)> {
        let i = REPORT_COLUMNS.iter().position(|&c| c == name)?;
        Some((self.mean[i], self.deviation[i]))
    }

    pub fn csv(&self) -> String {
        let row = |label: &str, v: &[Option<f64>]| {
            let cells: Vec<String> = v.iter().map(|x| fmt_cell(*x)).collect();
            format!("{label},{}\n", cells.join(","))
        };
        format!(
            "statistic,{}\n{}{}",
            REPORT_COLUMNS.join(","),
            row("mean", &self.mean),
            row("deviation", &self.deviation)
        )
    }
}

/// Aligned plain-text table of fold rows plus the aggregate.
pub fn render_table(reports: &[FoldReport], aggregate: &Aggregate) -> String {
    let used: Vec<usize> = (0..REPORT_COLUMNS.len())
        .filter(|&c| aggregate.mean[c].is_some() || reports.iter().any(|r| r.values()[c].is_some()))
        .collect();
    let cell = |v: Option<f64>, c: usize| match v {
        None => "-".to_string(),
        Some(x) if REPORT_COLUMNS[c].starts_with("n_") && x.fract() == 0.0 => format!("{x:.0}"),
        Some(x) => format!("{x:.3}"),
    };
    let mut out = format!("{:>6}", "fold");
    for &c in &used {
        out.push_str(&format!(" {:>8}", REPORT_COLUMNS[c]));
    }
    out.push('\n');
    for r in reports {
        let v = r.values();
        out.push_str(&format!("{:>6}", r.fold));
        for &c in &used {
            out.push_str(&format!(" {:>8}", cell(v[c], c)));
        }
        out.push('\n');
    }
    for (label, row) in [("mean", &aggregate.mean), ("dev", &aggregate.deviation)] {
        out.push_str(&format!("{label:>6}"));
        for &c in &used {
            out.push_str(&format!(" {:>8}", cell(row[c], c)));
        }
        out.push('\n');
    }
    out
}
