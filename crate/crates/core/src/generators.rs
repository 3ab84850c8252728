//! Synthetic benchmark series with known ground-truth predictability.
//!
//! * Model I: a two-state chain where same-sign predictive states favour a
//!   sign flip (0.2/0.8) and mixed-sign states are a coin toss.
//! * Model II: stretches of Hénon-map chaos interleaved with Gaussian noise
//!   of matching spread.
//! * Model III: a two-state chain where every predictive state has the same
//!   0.2/0.8 split; half the states are labelled predictable arbitrarily.
//!
//! Chains are dressed with Gaussian observation noise after generation;
//! labels always come from the clean process.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{Label, TimeSeries};

pub const DRESSING_SIGMA: f64 = 0.3;
pub const HENON_ALPHA: f64 = 1.4;
pub const HENON_BETA: f64 = 0.3;
const HENON_TRANSIENT: usize = 1000;
const HENON_STD_SAMPLES: usize = 100_000;
const HENON_ESCAPE: f64 = 10.0;
const MAX_RESTARTS: usize = 100;
const MIN_LENGTH: usize = 3;

/// Which of the three benchmark processes to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BenchmarkModel {
    #[serde(rename = "model1")]
    ModelI,
    #[serde(rename = "model2")]
    ModelII,
    #[serde(rename = "model3")]
    ModelIII,
}

impl BenchmarkModel {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Self::ModelI),
            2 => Some(Self::ModelII),
            3 => Some(Self::ModelIII),
            _ => None,
        }
    }

    pub fn generate<T: Scalar>(self, length: usize, seed: u64) -> Result<TimeSeries<T>> {
        match self {
            Self::ModelI => generate_model1(length, seed),
            Self::ModelII => generate_model2(length, seed),
            Self::ModelIII => generate_model3(length, seed),
        }
    }
}

fn sign_index(v: i8) -> usize {
    usize::from(v > 0)
}

/// Two-state chain over `{-1, +1}` driven by the previous two values.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    /// `p_up[prev][cur]`: probability the next value is `+1`, with index 0
    /// for `-1` and 1 for `+1`.
    pub p_up: [[f64; 2]; 2],
    /// States whose successor is labelled more predictable, same indexing.
    pub marked: [[bool; 2]; 2],
    pub noise_sigma: f64,
}

impl ChainSpec {
    /// Model I transition table.
    pub fn model1() -> Self {
        Self {
            p_up: [[0.8, 0.5], [0.5, 0.2]],
            marked: [[true, false], [false, true]],
            noise_sigma: DRESSING_SIGMA,
        }
    }

    /// Model III transition table; same-sign states are the marked half.
    pub fn model3() -> Self {
        Self {
            // (-1,-1) -> +1 w.p. 0.8, (-1,+1) -> +1 w.p. 0.8,
            // (+1,-1) -> +1 w.p. 0.2, (+1,+1) -> +1 w.p. 0.2
            p_up: [[0.8, 0.8], [0.2, 0.2]],
            marked: [[true, false], [false, true]],
            noise_sigma: DRESSING_SIGMA,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn prob_up(&self, prev: i8, cur: i8) -> f64 {
        self.p_up[sign_index(prev)][sign_index(cur)]
    }

    pub fn is_marked(&self, prev: i8, cur: i8) -> bool {
        self.marked[sign_index(prev)][sign_index(cur)]
    }

    fn validate(&self) -> Result<()> {
        let probs_ok = self.p_up.iter().flatten().all(|p| (0.0..=1.0).contains(p));
        if !probs_ok || !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidArgument(
                "chain probabilities must lie in [0, 1] and noise sigma must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// A dressed chain together with its clean underlying states.
#[derive(Debug, Clone)]
pub struct ChainSample<T> {
    pub series: TimeSeries<T>,
    pub chain: Vec<i8>,
}

pub fn generate_chain<T: Scalar>(spec: &ChainSpec, length: usize, seed: u64) -> Result<ChainSample<T>> {
    check_length(length)?;
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng, p: f64| if rng.gen::<f64>() < p { 1i8 } else { -1i8 };
    let mut chain = Vec::with_capacity(length);
    chain.push(pick(&mut rng, 0.5));
    chain.push(pick(&mut rng, 0.5));
    let mut labels = vec![Label::Undefined; 2];
    for i in 2..length {
        let (prev, cur) = (chain[i - 2], chain[i - 1]);
        chain.push(pick(&mut rng, spec.prob_up(prev, cur)));
        labels.push(if spec.is_marked(prev, cur) {
            Label::MorePredictable
        } else {
            Label::LessPredictable
        });
    }
    let values = if spec.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, spec.noise_sigma).expect("validated sigma");
        chain
            .iter()
            .map(|&c| T::lit(f64::from(c) + noise.sample(&mut rng)))
            .collect()
    } else {
        chain.iter().map(|&c| T::lit(f64::from(c))).collect()
    };
    Ok(ChainSample {
        series: TimeSeries::with_labels(values, labels)?,
        chain,
    })
}

pub fn generate_model1<T: Scalar>(length: usize, seed: u64) -> Result<TimeSeries<T>> {
    generate_chain(&ChainSpec::model1(), length, seed).map(|s| s.series)
}

pub fn generate_model3<T: Scalar>(length: usize, seed: u64) -> Result<TimeSeries<T>> {
    generate_chain(&ChainSpec::model3(), length, seed).map(|s| s.series)
}

/// One iteration of `x_{i+1} = 1 - alpha x_i^2 + beta x_{i-1}`.
pub fn henon_step<T: Scalar>(alpha: T, beta: T, prev: T, cur: T) -> T {
    T::one() - alpha * cur * cur + beta * prev
}

/// Hénon orbit state `(x_{i-1}, x_i)`.
#[derive(Debug, Clone, Copy)]
struct HenonOrbit<T> {
    prev: T,
    cur: T,
}

impl<T: Scalar> HenonOrbit<T> {
    fn burned_in(alpha: T, beta: T, prev: T, cur: T) -> Self {
        let mut orbit = Self { prev, cur };
        for _ in 0..HENON_TRANSIENT {
            orbit.advance(alpha, beta);
        }
        orbit
    }

    fn advance(&mut self, alpha: T, beta: T) -> T {
        let next = henon_step(alpha, beta, self.prev, self.cur);
        self.prev = self.cur;
        self.cur = next;
        next
    }
}

/// Population standard deviation of a burned-in Hénon orbit started at the
/// origin.
pub fn henon_orbit_std(alpha: f64, beta: f64, samples: usize) -> f64 {
    let mut orbit = HenonOrbit::burned_in(alpha, beta, 0.0, 0.0);
    let xs: Vec<f64> = (0..samples).map(|_| orbit.advance(alpha, beta)).collect();
    crate::scalar::population_std(&xs)
}

/// Spread of the standard (1.4, 0.3) attractor, computed once.
pub fn standard_henon_std() -> f64 {
    static STD: OnceLock<f64> = OnceLock::new();
    *STD.get_or_init(|| henon_orbit_std(HENON_ALPHA, HENON_BETA, HENON_STD_SAMPLES))
}

/// Model II parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSwitchSpec {
    pub alpha: f64,
    pub beta: f64,
    pub chaotic_duration: (usize, usize),
    pub noise_duration: (usize, usize),
}

impl Default for RegimeSwitchSpec {
    fn default() -> Self {
        Self {
            alpha: HENON_ALPHA,
            beta: HENON_BETA,
            chaotic_duration: (1, 58),
            noise_duration: (1, 49),
        }
    }
}

impl RegimeSwitchSpec {
    fn validate(&self) -> Result<()> {
        for (lo, hi) in [self.chaotic_duration, self.noise_duration] {
            if lo < 1 || lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "invalid regime duration range [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    fn noise_std(&self) -> f64 {
        if self.alpha == HENON_ALPHA && self.beta == HENON_BETA {
            standard_henon_std()
        } else {
            henon_orbit_std(self.alpha, self.beta, HENON_STD_SAMPLES)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Chaotic,
    Noise,
}

/// A regime-switching series together with the generation log.
#[derive(Debug, Clone)]
pub struct RegimeSample<T> {
    pub series: TimeSeries<T>,
    pub regimes: Vec<Regime>,
    /// Number of times a chaotic segment had to be regenerated.
    pub restarts: usize,
}

pub fn generate_regime_switch<T: Scalar>(
    spec: &RegimeSwitchSpec,
    length: usize,
    seed: u64,
) -> Result<RegimeSample<T>> {
    check_length(length)?;
    spec.validate()?;
    let alpha = T::lit(spec.alpha);
    let beta = T::lit(spec.beta);
    let escape = T::lit(HENON_ESCAPE);
    let noise = Normal::new(0.0, spec.noise_std())
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orbit = HenonOrbit::burned_in(alpha, beta, T::zero(), T::zero());

    let mut values: Vec<T> = Vec::with_capacity(length);
    let mut regimes = Vec::with_capacity(length);
    let mut regime = if rng.gen_bool(0.5) {
        Regime::Chaotic
    } else {
        Regime::Noise
    };
    let mut restarts = 0;
    while values.len() < length {
        let (lo, hi) = match regime {
            Regime::Chaotic => spec.chaotic_duration,
            Regime::Noise => spec.noise_duration,
        };
        let take = rng.gen_range(lo..=hi).min(length - values.len());
        match regime {
            Regime::Chaotic => {
                let mut failures = 0;
                let segment = loop {
                    let mut trial = orbit;
                    let seg: Vec<T> = (0..take).map(|_| trial.advance(alpha, beta)).collect();
                    if seg.iter().all(|x| x.is_finite() && x.abs() <= escape) {
                        orbit = trial;
                        break seg;
                    }
                    failures += 1;
                    restarts += 1;
                    if failures >= MAX_RESTARTS {
                        return Err(Error::GeneratorDivergence { restarts: failures });
                    }
                    let start_prev = T::lit(rng.gen_range(-0.1..0.1));
                    let start_cur = T::lit(rng.gen_range(-0.1..0.1));
                    orbit = HenonOrbit::burned_in(alpha, beta, start_prev, start_cur);
                };
                values.extend(segment);
            }
            Regime::Noise => {
                values.extend((0..take).map(|_| T::lit(noise.sample(&mut rng))));
            }
        }
        regimes.extend(std::iter::repeat_n(regime, take));
        regime = match regime {
            Regime::Chaotic => Regime::Noise,
            Regime::Noise => Regime::Chaotic,
        };
    }

    let labels = (0..length)
        .map(|k| {
            if k < 2 {
                Label::Undefined
            } else if regimes[k - 2..=k].iter().all(|&r| r == Regime::Chaotic) {
                Label::MorePredictable
            } else {
                Label::LessPredictable
            }
        })
        .collect();
    Ok(RegimeSample {
        series: TimeSeries::with_labels(values, labels)?,
        regimes,
        restarts,
    })
}

pub fn generate_model2<T: Scalar>(length: usize, seed: u64) -> Result<TimeSeries<T>> {
    generate_regime_switch(&RegimeSwitchSpec::default(), length, seed).map(|s| s.series)
}

fn check_length(length: usize) -> Result<()> {
    if length < MIN_LENGTH {
        return Err(Error::SeriesTooShort {
            required: MIN_LENGTH,
            actual: length,
        });
    }
    Ok(())
}
