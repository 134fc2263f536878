//! Reproducible Monte Carlo experiments: coverage and length studies for the
//! randomized and classical intervals and rectangles, paired bootstrap
//! comparisons, and the skewness diagnostics behind the study's figures.
//!
//! Determinism contract: every replicate draws from its own counter-based RNG
//! stream derived from `(seed, replicate index)`, and data are always drawn
//! before any arm-specific randomness. Identical specs therefore produce
//! bit-identical results under any thread count, and arms that share a seed
//! see the same data (paired comparisons come for free).

mod config;
mod output;
mod tables;

pub use config::{parse_config, parse_config_file, DEFAULT_SEED};
pub use output::{result_row, sig, to_aligned, to_csv, ResultRow};
pub use tables::{run_table, table_description, TABLE_COUNT};

use crate::datagen::DataLaw;
use crate::error::{Error, Result};
use crate::intervals::{
    bootstrap_t_interval, classical_t_interval, multinomial_interval, randomized_interval,
    ConfidenceInterval,
};
use crate::multivariate::{
    classical_rectangle, mardia_skewness, randomized_rectangle, randomized_rows, sample_skewness,
    ConfidenceRectangle, MultivariateSample, RegularizationPolicy,
};
use crate::pivots::{DenominatorMode, UnivariateSample};
use crate::solver::{solve_method1, solve_method1_1, solve_method1_2, solve_method2, Side};
use crate::weights::{CenteredMoments, WeightScheme};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// Interval-construction recipe for one experiment arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Skewed i.i.d. weights at a fixed or solved window constant.
    MethodI,
    /// Symmetric i.i.d. weights evaluated at their mean.
    MethodII,
    /// Triangular (multinomial) weights at the limit-formula window constant.
    MethodI1,
    /// Triangular weights at the finite-n window constant.
    MethodI2,
    /// The classical Student-t interval.
    ClassicalT,
    /// The bootstrap-t baseline.
    BootstrapT,
}

impl Method {
    fn randomized(self) -> bool {
        matches!(self, Method::MethodI | Method::MethodII | Method::MethodI1 | Method::MethodI2)
    }

    fn triangular(self) -> bool {
        matches!(self, Method::MethodI1 | Method::MethodI2)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let token = match self {
            Method::MethodI => "I",
            Method::MethodII => "II",
            Method::MethodI1 => "I.1",
            Method::MethodI2 => "I.2",
            Method::ClassicalT => "classical-t",
            Method::BootstrapT => "bootstrap-t",
        };
        write!(f, "{token}")
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" => Ok(Method::MethodI),
            "ii" => Ok(Method::MethodII),
            "i.1" => Ok(Method::MethodI1),
            "i.2" => Ok(Method::MethodI2),
            "classical-t" | "classical" => Ok(Method::ClassicalT),
            "bootstrap-t" | "bootstrap" => Ok(Method::BootstrapT),
            other => Err(Error::Parse(format!(
                "method must be one of I, II, I.1, I.2, classical-t, bootstrap-t; got `{other}`"
            ))),
        }
    }
}

/// How the window constant is obtained for a randomized arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSpec {
    /// Use this value directly.
    Fixed(f64),
    /// Use the weight mean (the Method II choice).
    AtMean,
    /// Solve SRF(theta) = delta with the solver matching the method.
    Solve { delta: f64, side: Side },
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSpec::Fixed(x) => write!(f, "{x}"),
            ThetaSpec::AtMean => write!(f, "mean"),
            ThetaSpec::Solve { delta, side: Side::AboveMean } => write!(f, "solve({delta})"),
            ThetaSpec::Solve { delta, side: Side::BelowMean } => {
                write!(f, "solve({delta},below)")
            }
        }
    }
}

impl FromStr for ThetaSpec {
    type Err = Error;

    /// Accepts a number, `mean`, `solve(delta)`, or `solve(delta,below|above)`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.eq_ignore_ascii_case("mean") {
            return Ok(ThetaSpec::AtMean);
        }
        if let Ok(x) = trimmed.parse::<f64>() {
            if !x.is_finite() {
                return Err(Error::Parse(format!("theta must be finite, got `{trimmed}`")));
            }
            return Ok(ThetaSpec::Fixed(x));
        }
        let (name, args) = crate::datagen::split_descriptor(trimmed)?;
        if name != "solve" {
            return Err(Error::Parse(format!(
                "theta must be a number, `mean`, or `solve(delta[,side])`; got `{trimmed}`"
            )));
        }
        let (delta, side) = match args.as_slice() {
            [d] => (d.clone(), Side::AboveMean),
            [d, side] => {
                let side = match side.as_str() {
                    "below" => Side::BelowMean,
                    "above" => Side::AboveMean,
                    other => {
                        return Err(Error::Parse(format!(
                            "solve side must be `below` or `above`, got `{other}`"
                        )))
                    }
                };
                (d.clone(), side)
            }
            _ => return Err(Error::Parse(format!("expected solve(delta[,side]) in `{trimmed}`"))),
        };
        let delta: f64 = delta
            .parse()
            .map_err(|_| Error::Parse(format!("bad solve target in `{trimmed}`")))?;
        Ok(ThetaSpec::Solve { delta, side })
    }
}

/// One declarative Monte Carlo experiment: a data law, an interval-construction
/// arm, and the replication plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub id: String,
    pub law: DataLaw,
    pub method: Method,
    /// Weight scheme for randomized methods; must be absent for classical arms.
    pub weights: Option<WeightScheme>,
    pub theta: ThetaSpec,
    pub mode: DenominatorMode,
    pub n: usize,
    pub replications: usize,
    pub alpha: f64,
    /// Bootstrap resample count; only read by the bootstrap-t arm.
    pub resamples: usize,
    pub seed: u64,
    /// Retain the per-replicate length vector in the result.
    pub keep_lengths: bool,
}

impl ExperimentSpec {
    /// A spec with the study's defaults: 1000 replications at level 0.05,
    /// expected-moment denominator, 1000 bootstrap resamples.
    pub fn new(id: impl Into<String>, law: DataLaw, method: Method, n: usize) -> Self {
        Self {
            id: id.into(),
            law,
            method,
            weights: None,
            theta: ThetaSpec::AtMean,
            mode: DenominatorMode::Expected,
            n,
            replications: 1000,
            alpha: 0.05,
            resamples: 1000,
            seed: DEFAULT_SEED,
            keep_lengths: false,
        }
    }

    pub fn with_weights(mut self, scheme: WeightScheme, theta: ThetaSpec) -> Self {
        self.weights = Some(scheme);
        self.theta = theta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("{}: sample size must be >= 2", self.id)));
        }
        if self.replications < 1 {
            return Err(Error::Config(format!("{}: needs at least one replication", self.id)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("{}: alpha must lie in (0, 1)", self.id)));
        }
        match self.method {
            Method::MethodI => {
                let scheme = self.require_weights()?;
                if scheme.triangular() {
                    return Err(Error::Config(format!(
                        "{}: method I takes an i.i.d. scheme; use I.1 or I.2 for the triangular one",
                        self.id
                    )));
                }
            }
            Method::MethodII => {
                let scheme = self.require_weights()?;
                if !scheme.symmetric() {
                    return Err(Error::Config(format!(
                        "{}: method II requires a symmetric weight scheme",
                        self.id
                    )));
                }
                let at_mean = match self.theta {
                    ThetaSpec::AtMean => true,
                    ThetaSpec::Fixed(x) => x == scheme.mean(None)?,
                    ThetaSpec::Solve { .. } => false,
                };
                if !at_mean {
                    return Err(Error::Config(format!(
                        "{}: method II evaluates theta at the weight mean",
                        self.id
                    )));
                }
            }
            Method::MethodI1 | Method::MethodI2 => {
                let scheme = self.require_weights()?;
                if !scheme.triangular() {
                    return Err(Error::Config(format!(
                        "{}: methods I.1/I.2 require the triangular scheme",
                        self.id
                    )));
                }
            }
            Method::ClassicalT | Method::BootstrapT => {
                if self.weights.is_some() {
                    return Err(Error::Config(format!(
                        "{}: classical arms take no weight scheme",
                        self.id
                    )));
                }
                if self.method == Method::BootstrapT && self.resamples < 100 {
                    return Err(Error::Config(format!(
                        "{}: bootstrap needs at least 100 resamples",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }

    fn require_weights(&self) -> Result<&WeightScheme> {
        self.weights.as_ref().ok_or_else(|| {
            Error::Config(format!("{}: randomized methods need a weight scheme", self.id))
        })
    }

    /// The finite-n flag passed to triangular moment formulas.
    fn scheme_n(&self) -> Option<u64> {
        match self.weights {
            Some(s) if s.triangular() => Some(self.n as u64),
            _ => None,
        }
    }

    /// Resolve the window constant once per experiment: fixed values pass
    /// through (validated against the scheme's moments), `mean` reads the
    /// scheme, `solve` dispatches to the solver matching the method.
    pub fn resolved_theta(&self) -> Result<Option<f64>> {
        if !self.method.randomized() {
            return Ok(None);
        }
        let scheme = self.require_weights()?;
        let theta = match self.theta {
            ThetaSpec::Fixed(x) => {
                let srf = scheme.srf(x, self.scheme_n())?;
                if !srf.is_finite() {
                    return Err(Error::Config(format!(
                        "{}: weight moments are degenerate at theta = {x}",
                        self.id
                    )));
                }
                x
            }
            ThetaSpec::AtMean => scheme.mean(self.scheme_n())?,
            ThetaSpec::Solve { delta, side } => match self.method {
                Method::MethodI => solve_method1(scheme, delta, side)?.theta,
                Method::MethodII => solve_method2(scheme)?.theta,
                Method::MethodI1 => solve_method1_1(delta)?.theta,
                Method::MethodI2 => solve_method1_2(self.n as u64, delta)?.theta,
                Method::ClassicalT | Method::BootstrapT => unreachable!(),
            },
        };
        Ok(Some(theta))
    }
}

/// Aggregates over the replicates of one experiment arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub id: String,
    pub method: Method,
    /// Fraction of replicates whose region contained the true mean.
    pub coverage: f64,
    /// Mean length (interval) or volume (rectangle); infinite as soon as one
    /// replicate degenerates to the whole line.
    pub mean_length: f64,
    pub median_length: f64,
    /// Mean after dropping the lowest and highest 5% of lengths.
    pub trimmed_length: f64,
    pub infinite_count: usize,
    pub replications: usize,
    /// Sorted per-replicate lengths, kept only on request.
    pub lengths: Option<Vec<f64>>,
}

/// Fraction trimmed from each tail by the robust length aggregate.
pub const TRIM_FRACTION: f64 = 0.05;

fn aggregate(
    id: &str,
    method: Method,
    outcomes: &[(bool, f64)],
    keep_lengths: bool,
) -> ExperimentResult {
    let r = outcomes.len();
    let covered = outcomes.iter().filter(|(c, _)| *c).count();
    let mut lengths: Vec<f64> = outcomes.iter().map(|(_, l)| *l).collect();
    lengths.sort_by(f64::total_cmp);
    let mean = lengths.iter().sum::<f64>() / r as f64;
    let median = if r % 2 == 1 {
        lengths[r / 2]
    } else {
        0.5 * (lengths[r / 2 - 1] + lengths[r / 2])
    };
    let k = (TRIM_FRACTION * r as f64).floor() as usize;
    let kept = &lengths[k..r - k];
    let trimmed = kept.iter().sum::<f64>() / kept.len() as f64;
    let infinite_count = lengths.iter().filter(|l| l.is_infinite()).count();
    ExperimentResult {
        id: id.to_string(),
        method,
        coverage: covered as f64 / r as f64,
        mean_length: mean,
        median_length: median,
        trimmed_length: trimmed,
        infinite_count,
        replications: r,
        lengths: keep_lengths.then_some(lengths),
    }
}

/// The per-replicate RNG: one counter-based stream per replicate index, so the
/// schedule that runs a replicate never changes what it draws.
fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    rng
}

/// Run a univariate coverage experiment.
pub fn run_univariate(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    if spec.law.dimension() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: spec.law.dimension() });
    }
    let mu = spec.law.true_mean()[0];
    let theta = spec.resolved_theta()?;
    let moments = match (theta, spec.weights.as_ref()) {
        (Some(t), Some(scheme)) => Some(scheme.centered_moments(t, spec.scheme_n())?),
        _ => None,
    };
    let outcomes: Vec<(bool, f64)> = (0..spec.replications)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(spec.seed, i);
            let data = spec.law.sample(spec.n, &mut rng)?;
            let sample = UnivariateSample::new(&data, mu)?;
            let interval = match spec.method {
                Method::ClassicalT => classical_t_interval(&sample, spec.alpha)?,
                Method::BootstrapT => {
                    bootstrap_t_interval(&sample, spec.resamples, spec.alpha, &mut rng)?
                }
                _ => {
                    let scheme = spec.weights.as_ref().expect("validated");
                    let weights = scheme.sample(spec.n, &mut rng)?;
                    randomized_arm_interval(spec, &sample, &weights, theta, &moments)?
                }
            };
            Ok((interval.contains(mu), interval.length()))
        })
        .collect::<Result<_>>()?;
    Ok(aggregate(&spec.id, spec.method, &outcomes, spec.keep_lengths))
}

fn randomized_arm_interval(
    spec: &ExperimentSpec,
    sample: &UnivariateSample,
    weights: &[f64],
    theta: Option<f64>,
    moments: &Option<CenteredMoments>,
) -> Result<ConfidenceInterval> {
    let theta = theta.expect("randomized arm");
    let moments = moments.as_ref().expect("randomized arm");
    if spec.method.triangular() {
        multinomial_interval(sample, weights, theta, moments, spec.mode, spec.alpha)
    } else {
        randomized_interval(sample, weights, theta, moments, spec.mode, spec.alpha)
    }
}

/// Paired per-replicate results of the triangular randomized interval and the
/// bootstrap-t interval on the same data.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapComparison {
    pub randomized: ExperimentResult,
    pub bootstrap: ExperimentResult,
}

/// Run the paired study behind the bootstrap comparisons: `spec` describes
/// the triangular randomized arm; each replicate also builds a bootstrap-t
/// interval (with `spec.resamples` resamples) from the same data.
pub fn run_bootstrap_comparison(spec: &ExperimentSpec) -> Result<BootstrapComparison> {
    spec.validate()?;
    if !spec.method.triangular() {
        return Err(Error::Config(format!(
            "{}: the paired comparison pits a triangular method against the bootstrap",
            spec.id
        )));
    }
    if spec.law.dimension() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: spec.law.dimension() });
    }
    if spec.resamples < 100 {
        return Err(Error::Config(format!("{}: bootstrap needs at least 100 resamples", spec.id)));
    }
    let mu = spec.law.true_mean()[0];
    let theta = spec.resolved_theta()?;
    let scheme = spec.require_weights()?;
    let moments =
        Some(scheme.centered_moments(theta.expect("randomized"), spec.scheme_n())?);
    let outcomes: Vec<((bool, f64), (bool, f64))> = (0..spec.replications)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(spec.seed, i);
            let data = spec.law.sample(spec.n, &mut rng)?;
            let sample = UnivariateSample::new(&data, mu)?;
            let weights = scheme.sample(spec.n, &mut rng)?;
            let randomized = randomized_arm_interval(spec, &sample, &weights, theta, &moments)?;
            let bootstrap = bootstrap_t_interval(&sample, spec.resamples, spec.alpha, &mut rng)?;
            Ok((
                (randomized.contains(mu), randomized.length()),
                (bootstrap.contains(mu), bootstrap.length()),
            ))
        })
        .collect::<Result<_>>()?;
    let first: Vec<(bool, f64)> = outcomes.iter().map(|(a, _)| *a).collect();
    let second: Vec<(bool, f64)> = outcomes.iter().map(|(_, b)| *b).collect();
    Ok(BootstrapComparison {
        randomized: aggregate(&spec.id, spec.method, &first, spec.keep_lengths),
        bootstrap: aggregate(&spec.id, Method::BootstrapT, &second, spec.keep_lengths),
    })
}

/// Run a bivariate rectangle-coverage experiment; lengths become volumes.
pub fn run_bivariate(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    if spec.law.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: spec.law.dimension() });
    }
    if spec.method == Method::BootstrapT {
        return Err(Error::Config(format!("{}: no bivariate bootstrap arm", spec.id)));
    }
    let policy = RegularizationPolicy::Ridge;
    let mu = spec.law.true_mean();
    let theta = spec.resolved_theta()?;
    let moments = match (theta, spec.weights.as_ref()) {
        (Some(t), Some(scheme)) => Some(scheme.centered_moments(t, spec.scheme_n())?),
        _ => None,
    };
    let outcomes: Vec<(bool, f64)> = (0..spec.replications)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(spec.seed, i);
            let rows = spec.law.sample_rows(spec.n, &mut rng)?;
            let sample = MultivariateSample::new(&rows, &mu)?;
            let rect: ConfidenceRectangle = match spec.method {
                Method::ClassicalT => classical_rectangle(&sample, spec.alpha, policy)?,
                _ => {
                    let scheme = spec.weights.as_ref().expect("validated");
                    let weights = scheme.sample(spec.n, &mut rng)?;
                    randomized_rectangle(
                        &sample,
                        &weights,
                        theta.expect("randomized"),
                        moments.as_ref().expect("randomized"),
                        spec.mode,
                        spec.alpha,
                        policy,
                    )?
                }
            };
            Ok((rect.contains(&mu), rect.volume()))
        })
        .collect::<Result<_>>()?;
    Ok(aggregate(&spec.id, spec.method, &outcomes, spec.keep_lengths))
}

/// Which diagnostic to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// Univariate histogram study: skewness of centered exponential data
    /// before and after multiplication by shifted weights.
    PearsonHistogram,
    /// Bivariate study: Mardia skewness of (Z, Z^2) rows before and after
    /// randomization.
    Mardia,
}

impl fmt::Display for FigureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FigureKind::PearsonHistogram => write!(f, "pearson-histogram"),
            FigureKind::Mardia => write!(f, "mardia"),
        }
    }
}

impl FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pearson-histogram" | "pearson" => Ok(FigureKind::PearsonHistogram),
            "mardia" => Ok(FigureKind::Mardia),
            other => Err(Error::Parse(format!(
                "figure kind must be `pearson-histogram` or `mardia`, got `{other}`"
            ))),
        }
    }
}

/// One labeled randomized measurement next to its ratio to the raw measure.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedMeasure {
    pub label: String,
    pub value: f64,
    pub ratio_to_raw: f64,
}

/// Equal-width bin counts; bin i covers [min + i*width, min + (i+1)*width).
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub label: String,
    pub min: f64,
    pub width: f64,
    pub counts: Vec<u64>,
}

pub const HISTOGRAM_BINS: usize = 60;

fn histogram(label: &str, data: &[f64]) -> Histogram {
    let min = data.iter().copied().fold(f64::INFINITY, f64::min);
    let max = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let width = if span > 0.0 { span / HISTOGRAM_BINS as f64 } else { 1.0 };
    let mut counts = vec![0_u64; HISTOGRAM_BINS];
    for &x in data {
        let bin = (((x - min) / width) as usize).min(HISTOGRAM_BINS - 1);
        counts[bin] += 1;
    }
    Histogram { label: label.to_string(), min, width, counts }
}

/// Skewness diagnostics for original versus randomized data.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureDiagnostics {
    pub kind: FigureKind,
    pub n: usize,
    pub seed: u64,
    /// Sample skewness (univariate) or Mardia skewness (bivariate) of the raw data.
    pub raw_measure: f64,
    pub randomized: Vec<RandomizedMeasure>,
    pub histograms: Vec<Histogram>,
}

/// The two weight arms every diagnostic compares: the skewed chi-square scheme
/// and the Bernoulli scheme, each at its study window constant.
fn diagnostic_arms() -> Vec<(WeightScheme, f64)> {
    vec![
        (WeightScheme::chi_square(7).expect("df >= 1"), 9.3),
        (WeightScheme::bernoulli(1.0 / 3.0).expect("p in (0,1)"), 0.58),
    ]
}

/// Reproduce a skewness diagnostic at sample size `n`.
pub fn run_figure_diagnostics(kind: FigureKind, n: usize, seed: u64) -> Result<FigureDiagnostics> {
    if n < 10 {
        return Err(Error::Config("figure diagnostics need n >= 10".into()));
    }
    let mut rng = replicate_rng(seed, 0);
    match kind {
        FigureKind::PearsonHistogram => {
            let law = DataLaw::Exponential { rate: 1.0 };
            let centered: Vec<f64> =
                law.sample(n, &mut rng)?.into_iter().map(|x| x - 1.0).collect();
            let raw = sample_skewness(&centered)?;
            let mut randomized = Vec::new();
            let mut histograms = vec![histogram("exponential-centered", &centered)];
            for (scheme, theta) in diagnostic_arms() {
                let weights = scheme.sample(n, &mut rng)?;
                let products: Vec<f64> = centered
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| (w - theta) * x)
                    .collect();
                let value = sample_skewness(&products)?;
                let label = format!("{scheme}@{theta}");
                randomized.push(RandomizedMeasure {
                    label: label.clone(),
                    value,
                    ratio_to_raw: value / raw,
                });
                histograms.push(histogram(&label, &products));
            }
            Ok(FigureDiagnostics {
                kind,
                n,
                seed,
                raw_measure: raw,
                randomized,
                histograms,
            })
        }
        FigureKind::Mardia => {
            let law = DataLaw::SquarePair { base: crate::datagen::SquareBase::Normal };
            let rows = law.sample_rows(n, &mut rng)?;
            let raw = mardia_skewness(&rows, RegularizationPolicy::Ridge)?;
            let mut randomized = Vec::new();
            for (scheme, theta) in diagnostic_arms() {
                let weights = scheme.sample(n, &mut rng)?;
                let rand_rows = randomized_rows(&rows, &weights, theta)?;
                let value = mardia_skewness(&rand_rows, RegularizationPolicy::Ridge)?;
                randomized.push(RandomizedMeasure {
                    label: format!("{scheme}@{theta}"),
                    value,
                    ratio_to_raw: value / raw,
                });
            }
            Ok(FigureDiagnostics {
                kind,
                n,
                seed,
                raw_measure: raw,
                randomized,
                histograms: Vec::new(),
            })
        }
    }
}
