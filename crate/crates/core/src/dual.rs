//! Value forecaster plus error forecaster, and the cell rule that sorts
//! future events by their predicted error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::EmbeddedDataset;
use crate::training::{train_ensemble, EnsembleForecaster, TrainConfig};

/// Whether the cell boundaries can separate events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryState {
    Active,
    /// In-sample errors did not yield strictly increasing positive
    /// boundaries; every event is placed in cell 1.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DualModel<T> {
    pub value_model: EnsembleForecaster<T>,
    pub error_model: EnsembleForecaster<T>,
    /// Interior boundaries; the outer limits are zero and infinity.
    pub cell_boundaries: Vec<T>,
    pub n_cells: usize,
    pub boundary_state: BoundaryState,
}

/// Forecast for one future event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EventForecast<T> {
    pub predicted_value: T,
    /// Error-model output clamped at zero.
    pub predicted_abs_error: T,
    /// Error-model output before clamping.
    pub raw_error_output: T,
    /// 1 is the most predictable cell.
    pub cell: usize,
    pub source_index: usize,
}

/// A fitted dual model together with the in-sample residuals it was built on.
#[derive(Debug, Clone)]
pub struct DualFit<T> {
    pub model: DualModel<T>,
    /// `|target - value forecast|` per training pattern, in pattern order.
    pub residuals: Vec<T>,
}

/// Interior boundaries at sorted positions `ceil(k N / n_cells)`, 1-based.
pub fn quantile_boundaries<T: Scalar>(residuals: &[T], n_cells: usize) -> Vec<T> {
    let mut sorted = residuals.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = sorted.len();
    (1..n_cells)
        .map(|k| {
            let pos = (k * n).div_ceil(n_cells).max(1);
            sorted[pos - 1]
        })
        .collect()
}

fn boundaries_usable<T: Scalar>(b: &[T]) -> bool {
    b.iter().all(|v| v.is_finite() && *v > T::zero()) && b.windows(2).all(|w| w[0] < w[1])
}

pub fn fit_dual<T: Scalar>(train: &EmbeddedDataset<T>, config: &TrainConfig, n_cells: usize) -> Result<DualModel<T>> {
    fit_dual_detailed(train, config, n_cells).map(|f| f.model)
}

pub fn fit_dual_detailed<T: Scalar>(
    train: &EmbeddedDataset<T>,
    config: &TrainConfig,
    n_cells: usize,
) -> Result<DualFit<T>> {
    if n_cells < 2 {
        return Err(Error::Config("n_cells must be at least 2".into()));
    }
    let value_model = train_ensemble(train, config)?;
    let residuals = train
        .inputs()
        .iter()
        .zip(train.targets())
        .map(|(x, &y)| value_model.predict(x).map(|f| (y - f).abs()))
        .collect::<Result<Vec<T>>>()?;
    let error_model = train_ensemble(&train.with_targets(residuals.clone())?, config)?;
    Ok(DualFit {
        model: DualModel::new(value_model, error_model, &residuals, n_cells)?,
        residuals,
    })
}

impl<T: Scalar> DualModel<T> {
    /// Assembles a dual model, deriving the cell boundaries from `residuals`.
    pub fn new(
        value_model: EnsembleForecaster<T>,
        error_model: EnsembleForecaster<T>,
        residuals: &[T],
        n_cells: usize,
    ) -> Result<Self> {
        if value_model.n_inputs() != error_model.n_inputs() {
            return Err(Error::InputDimension {
                expected: value_model.n_inputs(),
                actual: error_model.n_inputs(),
            });
        }
        if residuals.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let cell_boundaries = quantile_boundaries(residuals, n_cells);
        let boundary_state = if boundaries_usable(&cell_boundaries) {
            BoundaryState::Active
        } else {
            BoundaryState::Degenerate
        };
        Ok(Self {
            value_model,
            error_model,
            cell_boundaries,
            n_cells,
            boundary_state,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.value_model.n_inputs()
    }

    pub fn is_degenerate(&self) -> bool {
        self.boundary_state == BoundaryState::Degenerate
    }

    /// `1 + #{boundaries strictly below error}`; ties go to the lower cell.
    pub fn cell_of(&self, predicted_abs_error: T) -> usize {
        if self.is_degenerate() {
            return 1;
        }
        1 + self
            .cell_boundaries
            .iter()
            .filter(|&&b| b < predicted_abs_error)
            .count()
    }

    pub fn forecast_event(&self, input: &[T], source_index: usize) -> Result<EventForecast<T>> {
        let predicted_value = self.value_model.predict(input)?;
        let raw_error_output = self.error_model.predict(input)?;
        let predicted_abs_error = raw_error_output.max(T::zero());
        Ok(EventForecast {
            predicted_value,
            predicted_abs_error,
            raw_error_output,
            cell: self.cell_of(predicted_abs_error),
            source_index,
        })
    }

    /// One forecast per pattern, in pattern order.
    pub fn classify_test_set(&self, test: &EmbeddedDataset<T>) -> Result<Vec<EventForecast<T>>> {
        if test.is_empty() {
            return Err(Error::EmptyDataset);
        }
        test.inputs()
            .iter()
            .zip(test.source_indices())
            .map(|(x, &s)| self.forecast_event(x, s))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        model.value_model.validate()?;
        model.error_model.validate()?;
        if model.cell_boundaries.len() + 1 != model.n_cells {
            return Err(Error::Config("cell boundary count does not match n_cells".into()));
        }
        Ok(model)
    }
}
