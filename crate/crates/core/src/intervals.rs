//! Confidence intervals for the mean: randomized-pivot inversion, the
//! classical t interval, the triangular-scheme specialization, and a
//! bootstrap-t baseline.

use crate::error::{Error, Result};
use crate::normal;
use crate::pivots::{randomized_denominator, DenominatorMode, UnivariateSample};
use crate::weights::CenteredMoments;
use rand::Rng;

/// A two-sided interval. `degenerate` marks the whole-line interval produced
/// when the shifted weights sum to zero (the pivot inversion then constrains
/// nothing) or when constant data make the bootstrap statistic undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub degenerate: bool,
}

impl ConfidenceInterval {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    fn whole_line() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY, degenerate: true }
    }
}

/// Invert |g_n| <= z: with T = sum (w_i - theta) X_i, W = sum (w_i - theta),
/// and A = S_n * denominator, the endpoints are (T -+ z A) / W.
pub fn randomized_interval(
    sample: &UnivariateSample,
    weights: &[f64],
    theta: f64,
    moments: &CenteredMoments,
    mode: DenominatorMode,
    alpha: f64,
) -> Result<ConfidenceInterval> {
    let z = cutoff(alpha)?;
    let d = randomized_denominator(sample.len(), weights, theta, moments, mode)?;
    let w_sum: f64 = weights.iter().map(|w| w - theta).sum();
    if w_sum == 0.0 {
        return Ok(ConfidenceInterval::whole_line());
    }
    let t_sum: f64 = sample.data().iter().zip(weights).map(|(x, w)| (w - theta) * x).sum();
    let a = sample.s_n() * d;
    let m = (t_sum - z * a) / w_sum;
    let n = (t_sum + z * a) / w_sum;
    Ok(ConfidenceInterval { lo: m.min(n), hi: m.max(n), degenerate: false })
}

/// Closed-form length of the randomized interval:
/// 2 z S_n / (|sum (w_i - theta)| / denominator).
pub fn interval_length(
    sample: &UnivariateSample,
    weights: &[f64],
    theta: f64,
    moments: &CenteredMoments,
    mode: DenominatorMode,
    alpha: f64,
) -> Result<f64> {
    let z = cutoff(alpha)?;
    let d = randomized_denominator(sample.len(), weights, theta, moments, mode)?;
    let w_sum: f64 = weights.iter().map(|w| w - theta).sum();
    if w_sum == 0.0 {
        return Err(Error::DegenerateWeights);
    }
    Ok(2.0 * z * sample.s_n() / (w_sum.abs() / d))
}

/// Classical interval mean +- z S_n / sqrt(n) (normal cutoff, divisor-n S_n).
pub fn classical_t_interval(sample: &UnivariateSample, alpha: f64) -> Result<ConfidenceInterval> {
    let z = cutoff(alpha)?;
    let half = z * sample.s_n() / (sample.len() as f64).sqrt();
    let mean = sample.mean();
    Ok(ConfidenceInterval { lo: mean - half, hi: mean + half, degenerate: false })
}

/// Randomized interval for one triangular (multinomial) weight row. The row
/// must sum to n exactly; theta_star must differ from the row mean 1, which
/// makes sum (w_i - theta_star) = n (1 - theta_star) never zero.
pub fn multinomial_interval(
    sample: &UnivariateSample,
    weights: &[f64],
    theta_star: f64,
    moments: &CenteredMoments,
    mode: DenominatorMode,
    alpha: f64,
) -> Result<ConfidenceInterval> {
    let n = sample.len();
    let sum: f64 = weights.iter().sum();
    if (sum - n as f64).abs() > 1e-9 {
        return Err(Error::ConstraintViolated(format!(
            "triangular weights must sum to n = {n}, got {sum}"
        )));
    }
    if theta_star == 1.0 {
        return Err(Error::ConstraintViolated(
            "theta_star must differ from the triangular weight mean 1".into(),
        ));
    }
    randomized_interval(sample, weights, theta_star, moments, mode, alpha)
}

/// 1-based order-statistic indices (lower, upper) for the bootstrap-t
/// inversion: ceil(B alpha/2) and floor(B (1 - alpha/2)).
pub fn bootstrap_percentile_indices(b_count: usize, alpha: f64) -> (usize, usize) {
    let b = b_count as f64;
    let lower = (b * alpha / 2.0).ceil() as usize;
    let upper = (b * (1.0 - alpha / 2.0)).floor() as usize;
    (lower.clamp(1, b_count), upper.clamp(1, b_count))
}

/// How many consecutive unusable (0/0) resamples before giving up on a slot
/// and declaring the interval infinite.
const MAX_DEGENERATE_REDRAWS: u32 = 100;

/// Bootstrap-t interval: draw B with-replacement resamples, sort the studentized
/// statistics t*_b = sqrt(n)(mean* - mean)/S*, and invert the order statistics.
///
/// A zero-variance resample still carries a sign: t* runs to +-infinity as S*
/// vanishes, so it enters the sort as an infinite value and infinite interval
/// endpoints arise exactly when enough resamples collapse onto one data value.
/// Only the 0/0 case (a constant resample sitting exactly on the sample mean)
/// is redrawn; after `MAX_DEGENERATE_REDRAWS` consecutive failures the whole
/// interval is reported as the degenerate whole line.
pub fn bootstrap_t_interval<R: Rng + ?Sized>(
    sample: &UnivariateSample,
    b_count: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<ConfidenceInterval> {
    if b_count < 100 {
        return Err(Error::InvalidParameter(format!(
            "bootstrap needs at least 100 resamples, got {b_count}"
        )));
    }
    let z_check = cutoff(alpha)?; // validates alpha
    let _ = z_check;
    let n = sample.len();
    let nf = n as f64;
    let mean = sample.mean();
    let s_n = sample.s_n();
    if s_n == 0.0 {
        return Ok(ConfidenceInterval::whole_line());
    }

    let data = sample.data();
    let mut stats = Vec::with_capacity(b_count);
    let mut resample = vec![0.0_f64; n];
    for _ in 0..b_count {
        let mut consecutive = 0;
        let t_star = loop {
            for slot in resample.iter_mut() {
                *slot = data[rng.gen_range(0..n)];
            }
            let m_star = resample.iter().sum::<f64>() / nf;
            let ss: f64 = resample.iter().map(|x| (x - m_star) * (x - m_star)).sum();
            let s_star = (ss / nf).sqrt();
            let num = nf.sqrt() * (m_star - mean);
            if s_star > 0.0 {
                break num / s_star;
            }
            if num != 0.0 {
                // Constant resample away from the sample mean: the statistic
                // diverges with a definite sign.
                break num.signum() * f64::INFINITY;
            }
            consecutive += 1;
            if consecutive >= MAX_DEGENERATE_REDRAWS {
                return Ok(ConfidenceInterval::whole_line());
            }
        };
        stats.push(t_star);
    }
    stats.sort_by(f64::total_cmp);

    let (lower, upper) = bootstrap_percentile_indices(b_count, alpha);
    let t_lo = stats[lower - 1];
    let t_hi = stats[upper - 1];
    // t_n(mu) decreases in mu, so t_lo bounds mu from above.
    let lo = mean - t_hi * s_n / nf.sqrt();
    let hi = mean - t_lo * s_n / nf.sqrt();
    Ok(ConfidenceInterval { lo, hi, degenerate: false })
}

fn cutoff(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(normal::quantile(1.0 - alpha / 2.0))
}
