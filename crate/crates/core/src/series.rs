//! Time-series container, delay embedding, the normalized-difference
//! transform and rolling train/test windows.
//!
//! Positions are 1-based wherever they leave this module (source indices,
//! window ranges, error messages), matching how series are usually written
//! down: `x_1, x_2, ...`. Storage is 0-based.

use std::fmt;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ground-truth predictability of a single observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    MorePredictable,
    LessPredictable,
    Undefined,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::MorePredictable => "more_predictable",
            Label::LessPredictable => "less_predictable",
            Label::Undefined => "undefined",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "more_predictable" => Ok(Label::MorePredictable),
            "less_predictable" => Ok(Label::LessPredictable),
            "undefined" | "" => Ok(Label::Undefined),
            other => Err(Error::InvalidArgument(format!("unknown label `{other}`"))),
        }
    }
}

/// Ordered finite observations with optional ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    values: Vec<T>,
    labels: Option<Vec<Label>>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        Self::build(values, None)
    }

    pub fn with_labels(values: Vec<T>, labels: Vec<Label>) -> Result<Self> {
        Self::build(values, Some(labels))
    }

    fn build(values: Vec<T>, labels: Option<Vec<Label>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort {
                required: 1,
                actual: 0,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: index + 1 });
        }
        if let Some(labels) = &labels {
            if labels.len() != values.len() {
                return Err(Error::LabelLength {
                    values: values.len(),
                    labels: labels.len(),
                });
            }
        }
        Ok(Self { values, labels })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Drops the labels, keeping the values.
    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Element-wise conversion to another scalar type.
    pub fn cast<U: Scalar>(&self) -> TimeSeries<U> {
        TimeSeries {
            values: self
                .values
                .iter()
                .map(|v| U::lit(v.to_f64_lossy()))
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Smallest series length that yields at least one pattern.
pub fn min_embed_length(m: usize, tau: usize) -> usize {
    (m - 1) * tau + 2
}

/// Delay vectors `(x_i, x_{i-tau}, ..., x_{i-(m-1)tau})` paired with `x_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedDataset<T> {
    inputs: Vec<Vec<T>>,
    targets: Vec<T>,
    source_indices: Vec<usize>,
    labels: Option<Vec<Label>>,
    m: usize,
    tau: usize,
}

/// Whether a window may borrow embedding history from before its first point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum History {
    /// Drop patterns whose delayed inputs fall before the window.
    Strict,
    /// Keep every pattern whose target lies in the window.
    Borrow,
}

impl<T: Scalar> EmbeddedDataset<T> {
    /// Builds a dataset from raw parts, checking the shape invariants.
    pub fn from_parts(
        inputs: Vec<Vec<T>>,
        targets: Vec<T>,
        source_indices: Vec<usize>,
        m: usize,
        tau: usize,
    ) -> Result<Self> {
        if inputs.len() != targets.len() || inputs.len() != source_indices.len() {
            return Err(Error::ShapeMismatch {
                expected: inputs.len(),
                actual: targets.len().min(source_indices.len()),
            });
        }
        if let Some(bad) = inputs.iter().find(|x| x.len() != m) {
            return Err(Error::InputDimension {
                expected: m,
                actual: bad.len(),
            });
        }
        if source_indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "source indices must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            inputs,
            targets,
            source_indices,
            labels: None,
            m,
            tau,
        })
    }

    pub fn inputs(&self) -> &[Vec<T>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    /// 1-based position of each target in the source series.
    pub fn source_indices(&self) -> &[usize] {
        &self.source_indices
    }

    /// Labels of the target points, when the source series carried labels.
    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Patterns at the given positions, in the given order.
    pub fn subset(&self, positions: &[usize]) -> Self {
        Self {
            inputs: positions.iter().map(|&p| self.inputs[p].clone()).collect(),
            targets: positions.iter().map(|&p| self.targets[p]).collect(),
            source_indices: positions.iter().map(|&p| self.source_indices[p]).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| positions.iter().map(|&p| l[p]).collect()),
            m: self.m,
            tau: self.tau,
        }
    }

    /// Same inputs with replaced targets.
    pub fn with_targets(&self, targets: Vec<T>) -> Result<Self> {
        if targets.len() != self.len() {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                actual: targets.len(),
            });
        }
        Ok(Self {
            targets,
            ..self.clone()
        })
    }

    /// Patterns whose target lies in the 1-based inclusive range `targets`.
    pub fn window(&self, targets: RangeInclusive<usize>, history: History) -> Self {
        let span = (self.m - 1) * self.tau + 1;
        let first = *targets.start();
        let keep: Vec<usize> = self
            .source_indices
            .iter()
            .enumerate()
            .filter(|(_, &s)| {
                targets.contains(&s) && (history == History::Borrow || s - span >= first)
            })
            .map(|(p, _)| p)
            .collect();
        self.subset(&keep)
    }
}

/// Delay-embeds `series` with `m` total inputs spaced `tau` steps apart.
pub fn embed<T: Scalar>(series: &TimeSeries<T>, m: usize, tau: usize) -> Result<EmbeddedDataset<T>> {
    if m == 0 || tau == 0 {
        return Err(Error::InvalidArgument(
            "embedding dimension and delay must be positive".into(),
        ));
    }
    let required = min_embed_length(m, tau);
    let n = series.len();
    if n < required {
        return Err(Error::SeriesTooShort {
            required,
            actual: n,
        });
    }
    let x = series.values();
    let first = (m - 1) * tau;
    let count = n - first - 1;
    let mut inputs = Vec::with_capacity(count);
    let mut targets = Vec::with_capacity(count);
    let mut source_indices = Vec::with_capacity(count);
    for i in first..n - 1 {
        inputs.push((0..m).map(|k| x[i - k * tau]).collect());
        targets.push(x[i + 1]);
        source_indices.push(i + 2);
    }
    let labels = series
        .labels()
        .map(|l| source_indices.iter().map(|&s| l[s - 1]).collect());
    Ok(EmbeddedDataset {
        inputs,
        targets,
        source_indices,
        labels,
        m,
        tau,
    })
}

/// `x_i = 2 (y_i - y_{i-1}) / (y_i + y_{i-1})`; labels are dropped.
pub fn normalized_difference<T: Scalar>(raw: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    let y = raw.values();
    if y.len() < 2 {
        return Err(Error::SeriesTooShort {
            required: 2,
            actual: y.len(),
        });
    }
    let two = T::lit(2.0);
    let mut out = Vec::with_capacity(y.len() - 1);
    for i in 1..y.len() {
        let denom = y[i] + y[i - 1];
        if denom == T::zero() {
            return Err(Error::DegenerateDifference { index: i + 1 });
        }
        out.push(two * (y[i] - y[i - 1]) / denom);
    }
    TimeSeries::new(out)
}

/// One rolling fold: 1-based inclusive train and test ranges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub train: RangeInclusive<usize>,
    pub test: RangeInclusive<usize>,
}

/// Rolling train/test windows shifted by `step` until the test range
/// would leave the series.
pub fn rolling_windows(
    series_length: usize,
    train_size: usize,
    test_size: usize,
    step: usize,
) -> Result<Vec<Window>> {
    if step == 0 || train_size == 0 || test_size == 0 {
        return Err(Error::InvalidArgument(
            "train size, test size and step must all be positive".into(),
        ));
    }
    let mut windows = Vec::new();
    let mut offset = 0;
    while offset + train_size + test_size <= series_length {
        windows.push(Window {
            train: offset + 1..=offset + train_size,
            test: offset + train_size + 1..=offset + train_size + test_size,
        });
        offset += step;
    }
    Ok(windows)
}

/// Parses a value series from CSV text.
///
/// Accepts a single numeric column or `date,value` (the value is always the
/// second column when there is more than one). A third column is read as a
/// label when it names one, so files written by [`write_labeled_csv`] load
/// back with their labels. The first record may be a header. Blank lines are
/// ignored.
pub fn parse_series_csv<T: Scalar, R: Read>(reader: R, name: &str) -> Result<TimeSeries<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut labelled = true;
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Csv {
            path: name.to_string(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = if record.len() == 1 { &record[0] } else { &record[1] };
        let value = match field.parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            Ok(_) => {
                return Err(Error::Csv {
                    path: name.to_string(),
                    line,
                    message: format!("non-finite value `{field}`"),
                })
            }
            Err(_) if first => {
                first = false;
                continue;
            }
            Err(_) => {
                return Err(Error::Csv {
                    path: name.to_string(),
                    line,
                    message: format!("cannot parse `{field}` as a number"),
                })
            }
        };
        first = false;
        values.push(T::lit(value));
        match record.get(2).map(str::parse::<Label>) {
            Some(Ok(label)) if labelled => labels.push(label),
            _ => labelled = false,
        }
    }
    if values.is_empty() {
        return Err(Error::Csv {
            path: name.to_string(),
            line: 0,
            message: "no numeric records".into(),
        });
    }
    if labelled {
        TimeSeries::with_labels(values, labels)
    } else {
        TimeSeries::new(values)
    }
}

pub fn read_series_csv<T: Scalar>(path: &Path) -> Result<TimeSeries<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_series_csv(file, &path.display().to_string())
}

/// Writes `index,value,label` with a header row and 1-based indices.
pub fn write_labeled_csv<T: Scalar, W: Write>(series: &TimeSeries<T>, mut out: W) -> std::io::Result<()> {
    writeln!(out, "index,value,label")?;
    for (i, v) in series.values().iter().enumerate() {
        let label = series.labels().map_or(Label::Undefined, |l| l[i]);
        writeln!(out, "{},{},{}", i + 1, v, label)?;
    }
    Ok(())
}
