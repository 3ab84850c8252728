//! One-hidden-layer perceptron with logistic hidden units and a linear
//! output, plus the mean-squared-error cost it is trained on.
//!
//! Parameters live in one flat vector so the simplex optimizer can work on
//! them directly. The layout is fixed:
//!
//! ```text
//! [ w̄_11 .. w̄_1n  b̄_1 | w̄_21 .. w̄_2n  b̄_2 | ... | w_1 .. w_N  w_0 ]
//!   hidden neuron 1      hidden neuron 2            output layer
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

const LOGISTIC_CLAMP: f64 = 500.0;

/// Total weight count for `n_inputs` inputs and `n_neurons` hidden units.
pub fn weight_count(n_inputs: usize, n_neurons: usize) -> usize {
    n_neurons * (n_inputs + 1) + n_neurons + 1
}

#[inline]
fn logistic<T: Scalar>(z: T) -> T {
    let bound = T::lit(LOGISTIC_CLAMP);
    let z = z.max(-bound).min(bound);
    T::one() / (T::one() + (-z).exp())
}

/// Network output for a flat parameter vector; no shape checks.
#[inline]
pub(crate) fn forward_raw<T: Scalar>(params: &[T], n_inputs: usize, n_neurons: usize, x: &[T]) -> T {
    let stride = n_inputs + 1;
    let (hidden, output) = params.split_at(n_neurons * stride);
    let mut acc = output[n_neurons];
    for (row, &w_out) in hidden.chunks_exact(stride).zip(output) {
        let mut z = row[n_inputs];
        for (w, xi) in row[..n_inputs].iter().zip(x) {
            z = z + *w * *xi;
        }
        acc = acc + w_out * logistic(z);
    }
    acc
}

/// Mean squared error of a flat parameter vector; no shape checks.
pub(crate) fn cost_raw<T: Scalar>(
    params: &[T],
    n_inputs: usize,
    n_neurons: usize,
    inputs: &[Vec<T>],
    targets: &[T],
) -> T {
    let mut sse = T::zero();
    for (x, &t) in inputs.iter().zip(targets) {
        let e = t - forward_raw(params, n_inputs, n_neurons, x);
        sse = sse + e * e;
    }
    sse / T::from_usize_lossy(targets.len())
}

/// Weights of a single perceptron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PerceptronRepr<T>", into = "PerceptronRepr<T>")]
#[serde(bound = "T: Scalar")]
pub struct Perceptron<T> {
    n_inputs: usize,
    n_neurons: usize,
    params: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct PerceptronRepr<T> {
    n_inputs: usize,
    n_neurons: usize,
    weights: Vec<T>,
}

impl<T: Scalar> TryFrom<PerceptronRepr<T>> for Perceptron<T> {
    type Error = Error;

    fn try_from(r: PerceptronRepr<T>) -> Result<Self> {
        Perceptron::unpack(r.weights, r.n_inputs, r.n_neurons)
    }
}

impl<T: Scalar> From<Perceptron<T>> for PerceptronRepr<T> {
    fn from(p: Perceptron<T>) -> Self {
        Self {
            n_inputs: p.n_inputs,
            n_neurons: p.n_neurons,
            weights: p.params,
        }
    }
}

impl<T: Scalar> Perceptron<T> {
    pub fn zeros(n_inputs: usize, n_neurons: usize) -> Self {
        Self {
            n_inputs,
            n_neurons,
            params: vec![T::zero(); weight_count(n_inputs, n_neurons)],
        }
    }

    /// Builds a perceptron from a flat parameter vector in pack order.
    pub fn unpack(params: Vec<T>, n_inputs: usize, n_neurons: usize) -> Result<Self> {
        if n_inputs == 0 || n_neurons == 0 {
            return Err(Error::InvalidArgument(
                "perceptron needs at least one input and one neuron".into(),
            ));
        }
        let expected = weight_count(n_inputs, n_neurons);
        if params.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: params.len(),
            });
        }
        if let Some(index) = params.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite { index: index + 1 });
        }
        Ok(Self {
            n_inputs,
            n_neurons,
            params,
        })
    }

    pub fn pack(&self) -> Vec<T> {
        self.params.clone()
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_neurons(&self) -> usize {
        self.n_neurons
    }

    /// Hidden weights of neuron `j`, bias last.
    pub fn hidden_row(&self, j: usize) -> &[T] {
        let stride = self.n_inputs + 1;
        &self.params[j * stride..(j + 1) * stride]
    }

    /// Output weights `w_1..w_N` followed by the output bias `w_0`.
    pub fn output_weights(&self) -> &[T] {
        &self.params[self.n_neurons * (self.n_inputs + 1)..]
    }

    pub fn forward(&self, input: &[T]) -> Result<T> {
        if input.len() != self.n_inputs {
            return Err(Error::InputDimension {
                expected: self.n_inputs,
                actual: input.len(),
            });
        }
        Ok(forward_raw(&self.params, self.n_inputs, self.n_neurons, input))
    }

    /// `(1/N) Σ (target - output)^2` over the given pairs.
    pub fn cost(&self, inputs: &[Vec<T>], targets: &[T]) -> Result<T> {
        if targets.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if inputs.len() != targets.len() {
            return Err(Error::ShapeMismatch {
                expected: targets.len(),
                actual: inputs.len(),
            });
        }
        if let Some(bad) = inputs.iter().find(|x| x.len() != self.n_inputs) {
            return Err(Error::InputDimension {
                expected: self.n_inputs,
                actual: bad.len(),
            });
        }
        Ok(cost_raw(&self.params, self.n_inputs, self.n_neurons, inputs, targets))
    }
}

/// Z-score constants for inputs and target, fitted on a training sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Normalizer<T> {
    pub input_means: Vec<T>,
    pub input_stds: Vec<T>,
    pub target_mean: T,
    pub target_std: T,
}

fn usable_std<T: Scalar>(s: T) -> T {
    if s > T::zero() && s.is_finite() {
        s
    } else {
        T::one()
    }
}

impl<T: Scalar> Normalizer<T> {
    /// Population mean and standard deviation per column; a zero spread is
    /// replaced by one.
    pub fn fit(inputs: &[Vec<T>], targets: &[T]) -> Result<Self> {
        let first = inputs.first().ok_or(Error::EmptyDataset)?;
        let n_inputs = first.len();
        let mut input_means = Vec::with_capacity(n_inputs);
        let mut input_stds = Vec::with_capacity(n_inputs);
        for k in 0..n_inputs {
            let column: Vec<T> = inputs.iter().map(|x| x[k]).collect();
            input_means.push(scalar::mean(&column));
            input_stds.push(usable_std(scalar::population_std(&column)));
        }
        Ok(Self {
            input_means,
            input_stds,
            target_mean: scalar::mean(targets),
            target_std: usable_std(scalar::population_std(targets)),
        })
    }

    /// Leaves data unchanged.
    pub fn identity(n_inputs: usize) -> Self {
        Self {
            input_means: vec![T::zero(); n_inputs],
            input_stds: vec![T::one(); n_inputs],
            target_mean: T::zero(),
            target_std: T::one(),
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.input_means.len()
    }

    pub fn input(&self, x: &[T]) -> Vec<T> {
        x.iter()
            .zip(self.input_means.iter().zip(&self.input_stds))
            .map(|(&v, (&m, &s))| (v - m) / s)
            .collect()
    }

    pub fn target(&self, y: T) -> T {
        (y - self.target_mean) / self.target_std
    }

    pub fn restore_target(&self, z: T) -> T {
        z * self.target_std + self.target_mean
    }
}
