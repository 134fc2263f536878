//! Univariate pivot statistics: the classical Student t, its known-variance
//! form, and the randomized weighted versions.
//!
//! Conventions: S_n^2 divides by n (not n - 1); the randomized denominator uses
//! either the exact weight moment E(w - theta)^2 or its empirical counterpart
//! sum (w_j - theta)^2, selected by [`DenominatorMode`].

use crate::error::{Error, Result};
use crate::weights::CenteredMoments;
use std::fmt;
use std::str::FromStr;

/// Which denominator scales the randomized pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenominatorMode {
    /// n * E(w - theta)^2 with the exact scheme moment.
    #[default]
    Expected,
    /// sum_j (w_j - theta)^2 computed from the drawn weights.
    Empirical,
}

impl fmt::Display for DenominatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenominatorMode::Expected => write!(f, "expected"),
            DenominatorMode::Empirical => write!(f, "empirical"),
        }
    }
}

impl FromStr for DenominatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "expected" => Ok(DenominatorMode::Expected),
            "empirical" => Ok(DenominatorMode::Empirical),
            other => Err(Error::Parse(format!(
                "denominator mode must be `expected` or `empirical`, got `{other}`"
            ))),
        }
    }
}

/// A centered data sample: observations plus the mean they pivot around.
#[derive(Debug, Clone, Copy)]
pub struct UnivariateSample<'a> {
    data: &'a [f64],
    mu: f64,
}

impl<'a> UnivariateSample<'a> {
    pub fn new(data: &'a [f64], mu: f64) -> Result<Self> {
        if data.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 observations, got {}",
                data.len()
            )));
        }
        Ok(Self { data, mu })
    }

    pub fn data(&self) -> &'a [f64] {
        self.data
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.len() as f64
    }

    /// S_n with the divisor-n convention; 0.0 for constant data.
    pub fn s_n(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self.data.iter().map(|x| (x - mean) * (x - mean)).sum();
        (ss / self.len() as f64).sqrt()
    }
}

/// A computed pivot value tagged with the denominator convention it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotValue {
    pub value: f64,
    pub mode: DenominatorMode,
}

/// Classical t_n = sum (X_i - mu) / (S_n sqrt(n)).
pub fn t_statistic(sample: &UnivariateSample) -> Result<f64> {
    let s = sample.s_n();
    if s == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let num: f64 = sample.data.iter().map(|x| x - sample.mu).sum();
    Ok(num / (s * (sample.len() as f64).sqrt()))
}

/// Randomized pivot g_n = sum (w_i - theta)(X_i - mu) / (S_n * D) where D is
/// sqrt(n E(w-theta)^2) or sqrt(sum (w_j-theta)^2) per the mode.
pub fn g_statistic(
    sample: &UnivariateSample,
    weights: &[f64],
    theta: f64,
    moments: &CenteredMoments,
    mode: DenominatorMode,
) -> Result<PivotValue> {
    let d = randomized_denominator(sample.len(), weights, theta, moments, mode)?;
    let s = sample.s_n();
    if s == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let num: f64 = sample
        .data
        .iter()
        .zip(weights)
        .map(|(x, w)| (w - theta) * (x - sample.mu))
        .sum();
    Ok(PivotValue { value: num / (s * d), mode })
}

/// Known-sigma classical statistic sum (X_i - mu) / sqrt(n sigma^2).
pub fn z_statistic(sample: &UnivariateSample, sigma: f64) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidParameter("sigma must be positive".into()));
    }
    let num: f64 = sample.data.iter().map(|x| x - sample.mu).sum();
    Ok(num / (sigma * (sample.len() as f64).sqrt()))
}

/// Known-sigma randomized statistic sum (w_i - theta)(X_i - mu) / sqrt(n sigma^2 E(w-theta)^2).
pub fn z_w_statistic(
    sample: &UnivariateSample,
    weights: &[f64],
    theta: f64,
    moments: &CenteredMoments,
    sigma: f64,
) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidParameter("sigma must be positive".into()));
    }
    if weights.len() != sample.len() {
        return Err(Error::DimensionMismatch { expected: sample.len(), got: weights.len() });
    }
    let num: f64 = sample
        .data
        .iter()
        .zip(weights)
        .map(|(x, w)| (w - theta) * (x - sample.mu))
        .sum();
    Ok(num / (sigma * (sample.len() as f64 * moments.mu_k2).sqrt()))
}

/// Shared denominator of the randomized pivot and interval formulas.
pub(crate) fn randomized_denominator(
    n: usize,
    weights: &[f64],
    theta: f64,
    moments: &CenteredMoments,
    mode: DenominatorMode,
) -> Result<f64> {
    if weights.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: weights.len() });
    }
    let d2 = match mode {
        DenominatorMode::Expected => n as f64 * moments.mu_k2,
        DenominatorMode::Empirical => weights.iter().map(|w| (w - theta) * (w - theta)).sum(),
    };
    if d2 == 0.0 {
        return Err(Error::DegenerateWeights);
    }
    Ok(d2.sqrt())
}
