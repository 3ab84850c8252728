//! Dual neural-network forecasting with a-priori selection of the more
//! predictable future events.
//!
//! A value forecaster (an ensemble of one-hidden-layer perceptrons trained by
//! downhill simplex) predicts the next point of a delay-embedded series. A
//! second ensemble is trained on the first one's absolute in-sample errors and
//! predicts how wrong each future forecast will be. Future events are then
//! sorted into cells bounded by quantiles of the in-sample errors.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the usual double-precision instantiation.

// NaN-rejecting guards are written as `!(x > 0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dual;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod harness;
pub mod mlp;
pub mod scalar;
pub mod selfcheck;
pub mod series;
pub mod training;

pub use dual::{fit_dual, BoundaryState, DualModel, EventForecast};
pub use error::{Error, ErrorClass, Result};
pub use evaluation::{Aggregate, FoldReport};
pub use generators::BenchmarkModel;
pub use harness::{run_experiment, ExperimentConfig, SavedModel, Source, Transform};
pub use mlp::{Normalizer, Perceptron};
pub use scalar::Scalar;
pub use series::{embed, normalized_difference, rolling_windows, EmbeddedDataset, Label, TimeSeries};
pub use training::{train_ensemble, train_single, EnsembleForecaster, TrainConfig};

pub type TimeSeries64 = TimeSeries<f64>;
pub type EmbeddedDataset64 = EmbeddedDataset<f64>;
pub type Perceptron64 = Perceptron<f64>;
pub type Normalizer64 = Normalizer<f64>;
pub type EnsembleForecaster64 = EnsembleForecaster<f64>;
pub type DualModel64 = DualModel<f64>;
pub type EventForecast64 = EventForecast<f64>;
pub type Perceptron32 = Perceptron<f32>;
pub type EnsembleForecaster32 = EnsembleForecaster<f32>;
