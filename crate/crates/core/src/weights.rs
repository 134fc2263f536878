//! Weight laws, their exact shifted moments, and the skewness-reducing factor.
//!
//! For a weight law w and window constant theta the SRF is
//!
//! ```text
//! SRF(theta) = E(w - theta)^3 / (E(w - theta)^2)^{3/2}
//! ```
//!
//! The products (w_i - theta)(X_i - mu) that drive the randomized pivot have
//! skewness SRF(theta) * skewness(X), so the SRF is the knob the window solver
//! turns. All moments here are closed-form; nothing is estimated by sampling.

use crate::datagen::{one_arg, split_descriptor, two_args};
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Bernoulli, ChiSquared, Distribution, Normal};
use std::fmt;
use std::str::FromStr;

/// Shifted moments E(w - theta)^k for k = 2, 3, 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenteredMoments {
    pub mu_k2: f64,
    pub mu_k3: f64,
    pub mu_k4: f64,
}

/// Central moments (about the mean) of a weight law, plus the mean itself.
/// Intermediate form shared by every scheme; shifted moments come from it by
/// a binomial expansion in c = mean - theta.
#[derive(Debug, Clone, Copy)]
struct LawMoments {
    mean: f64,
    c2: f64,
    c3: f64,
    c4: f64,
}

impl LawMoments {
    fn shifted(&self, theta: f64) -> CenteredMoments {
        let c = self.mean - theta;
        CenteredMoments {
            mu_k2: self.c2 + c * c,
            mu_k3: self.c3 + 3.0 * c * self.c2 + c * c * c,
            mu_k4: self.c4 + 4.0 * c * self.c3 + 6.0 * c * c * self.c2 + c * c * c * c,
        }
    }

    fn srf(&self, theta: f64) -> f64 {
        let m = self.shifted(theta);
        m.mu_k3 / m.mu_k2.powf(1.5)
    }

    /// d/dtheta of srf; used by the Newton refinement in the window solver.
    fn srf_derivative(&self, theta: f64) -> f64 {
        let c = self.mean - theta;
        let num = self.c3 + 3.0 * c * self.c2 + c * c * c;
        let den = self.c2 + c * c;
        // dc/dtheta = -1, d(num)/dtheta = -(3c^2 + 3 c2), d(den)/dtheta = -2c
        (-3.0 * (c * c + self.c2) * den + 3.0 * num * c) / den.powf(2.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    /// Chi-square with k degrees of freedom.
    ChiSquare(u32),
    /// Bernoulli taking value 1 with probability p.
    Bernoulli(f64),
    /// Normal with the given mean and variance.
    Normal { mean: f64, variance: f64 },
    /// Triangular scheme: one multinomial draw (w_1,...,w_n) with n trials and
    /// equal cell probabilities 1/n, so each margin is Binomial(n, 1/n) and
    /// the components always sum to n.
    MultinomialSymmetric,
    /// A law specified only through its first four raw moments E w^k.
    CustomMoments { m1: f64, m2: f64, m3: f64, m4: f64 },
}

/// A weight-generating law together with its exact moment formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightScheme {
    kind: WeightKind,
}

impl WeightScheme {
    pub fn chi_square(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "chi-square degrees of freedom must be >= 1".into(),
            ));
        }
        Ok(Self { kind: WeightKind::ChiSquare(k) })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bernoulli p must lie strictly in (0, 1), got {p}"
            )));
        }
        Ok(Self { kind: WeightKind::Bernoulli(p) })
    }

    pub fn normal(mean: f64, variance: f64) -> Result<Self> {
        if variance.is_nan() || variance <= 0.0 {
            return Err(Error::NonPositiveVariance);
        }
        Ok(Self { kind: WeightKind::Normal { mean, variance } })
    }

    pub fn multinomial_symmetric() -> Self {
        Self { kind: WeightKind::MultinomialSymmetric }
    }

    /// Build a scheme from raw moments. Requires a positive variance and the
    /// Cauchy-Schwarz consistency central4 >= central2^2; nothing stronger is
    /// checked, so not every accepted quadruple corresponds to a real law.
    pub fn custom_moments(m1: f64, m2: f64, m3: f64, m4: f64) -> Result<Self> {
        let c2 = m2 - m1 * m1;
        if c2.is_nan() || c2 <= 0.0 {
            return Err(Error::NonPositiveVariance);
        }
        let c4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1.powi(4);
        if c4 < c2 * c2 * (1.0 - 1e-9) {
            return Err(Error::InvalidParameter(
                "moments violate Cauchy-Schwarz: central4 < central2^2".into(),
            ));
        }
        Ok(Self { kind: WeightKind::CustomMoments { m1, m2, m3, m4 } })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// True iff the law is symmetric about its mean (Method II admissibility).
    /// For custom moments this is judged from the third central moment alone.
    pub fn symmetric(&self) -> bool {
        match self.kind {
            WeightKind::Normal { .. } => true,
            WeightKind::CustomMoments { .. } => self.law_moments(None).map(|m| m.c3 == 0.0).unwrap_or(false),
            _ => false,
        }
    }

    /// True iff the scheme is the triangular multinomial one, whose moments
    /// depend on the row length n.
    pub fn triangular(&self) -> bool {
        matches!(self.kind, WeightKind::MultinomialSymmetric)
    }

    /// E(w); needs `n` only for the triangular scheme (where it is 1 anyway,
    /// but the accessor keeps the signature uniform).
    pub fn mean(&self, n: Option<u64>) -> Result<f64> {
        Ok(self.law_moments(n)?.mean)
    }

    /// Standard deviation of the law; used to size solver brackets.
    pub fn sd(&self, n: Option<u64>) -> Result<f64> {
        Ok(self.law_moments(n)?.c2.sqrt())
    }

    fn law_moments(&self, n: Option<u64>) -> Result<LawMoments> {
        match self.kind {
            WeightKind::ChiSquare(k) => {
                let k = f64::from(k);
                Ok(LawMoments {
                    mean: k,
                    c2: 2.0 * k,
                    c3: 8.0 * k,
                    c4: 12.0 * k * k + 48.0 * k,
                })
            }
            WeightKind::Bernoulli(p) => {
                let q = 1.0 - p;
                Ok(LawMoments {
                    mean: p,
                    c2: p * q,
                    c3: p * q * (1.0 - 2.0 * p),
                    c4: p * q * (1.0 - 3.0 * p * q),
                })
            }
            WeightKind::Normal { mean, variance } => Ok(LawMoments {
                mean,
                c2: variance,
                c3: 0.0,
                c4: 3.0 * variance * variance,
            }),
            WeightKind::MultinomialSymmetric => {
                let n = n.ok_or(Error::MissingSampleSize)?;
                if n < 2 {
                    return Err(Error::InvalidParameter(
                        "triangular scheme needs n >= 2".into(),
                    ));
                }
                Ok(binomial_margin_moments(n))
            }
            WeightKind::CustomMoments { m1, m2, m3, m4 } => {
                let c2 = m2 - m1 * m1;
                if c2.is_nan() || c2 <= 0.0 {
                    return Err(Error::NonPositiveVariance);
                }
                Ok(LawMoments {
                    mean: m1,
                    c2,
                    c3: m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3),
                    c4: m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1.powi(4),
                })
            }
        }
    }

    /// Exact shifted moments E(w - theta)^k, k = 2, 3, 4.
    pub fn centered_moments(&self, theta: f64, n: Option<u64>) -> Result<CenteredMoments> {
        Ok(self.law_moments(n)?.shifted(theta))
    }

    /// Skewness-reducing factor at theta. A symmetric law evaluated exactly at
    /// its mean returns 0.0 with no floating residue.
    pub fn srf(&self, theta: f64, n: Option<u64>) -> Result<f64> {
        let m = self.law_moments(n)?;
        if self.symmetric() && theta == m.mean {
            return Ok(0.0);
        }
        Ok(m.srf(theta))
    }

    /// d SRF / d theta; exact, used by the Newton refinement.
    pub fn srf_derivative(&self, theta: f64, n: Option<u64>) -> Result<f64> {
        Ok(self.law_moments(n)?.srf_derivative(theta))
    }

    /// Draw one weight row of length n.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be positive".into()));
        }
        match self.kind {
            WeightKind::ChiSquare(k) => {
                let d = ChiSquared::new(f64::from(k)).expect("validated dof");
                Ok((0..n).map(|_| d.sample(rng)).collect())
            }
            WeightKind::Bernoulli(p) => {
                let d = Bernoulli::new(p).expect("validated p");
                Ok((0..n).map(|_| if d.sample(rng) { 1.0 } else { 0.0 }).collect())
            }
            WeightKind::Normal { mean, variance } => {
                let d = Normal::new(mean, variance.sqrt()).expect("validated variance");
                Ok((0..n).map(|_| d.sample(rng)).collect())
            }
            WeightKind::MultinomialSymmetric => {
                // One multinomial draw: n balls into n equiprobable cells.
                let mut counts = vec![0.0_f64; n];
                for _ in 0..n {
                    counts[rng.gen_range(0..n)] += 1.0;
                }
                Ok(counts)
            }
            WeightKind::CustomMoments { .. } => Err(Error::InvalidParameter(
                "a moment-only scheme has no sampler".into(),
            )),
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WeightKind::ChiSquare(k) => write!(f, "chisq({k})"),
            WeightKind::Bernoulli(p) => write!(f, "bernoulli({p})"),
            WeightKind::Normal { mean, variance } => write!(f, "normal({mean},{variance})"),
            WeightKind::MultinomialSymmetric => write!(f, "multinomial-sym"),
            WeightKind::CustomMoments { m1, m2, m3, m4 } => {
                write!(f, "custom-moments({m1},{m2},{m3},{m4})")
            }
        }
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    /// Parse descriptors like `chisq(7)`, `bernoulli(0.333)`, `normal(0,1)`,
    /// `multinomial-sym`, `custom-moments(m1,m2,m3,m4)`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_descriptor(s)?;
        match name.as_str() {
            "chisq" | "chisquare" => {
                let k = one_arg(&args, s)?;
                if k.fract() != 0.0 || k < 1.0 {
                    return Err(Error::Parse(format!(
                        "chi-square degrees of freedom must be a positive integer in `{s}`"
                    )));
                }
                WeightScheme::chi_square(k as u32)
            }
            "bernoulli" => WeightScheme::bernoulli(one_arg(&args, s)?),
            "normal" => {
                let (mean, variance) = two_args(&args, s)?;
                WeightScheme::normal(mean, variance)
            }
            "multinomial-sym" => {
                if !args.is_empty() {
                    return Err(Error::Parse(format!("multinomial-sym takes no arguments in `{s}`")));
                }
                Ok(WeightScheme::multinomial_symmetric())
            }
            "custom-moments" => match args.as_slice() {
                [a, b, c, d] => {
                    let bad = |_| Error::Parse(format!("bad number in `{s}`"));
                    WeightScheme::custom_moments(
                        a.parse().map_err(bad)?,
                        b.parse().map_err(bad)?,
                        c.parse().map_err(bad)?,
                        d.parse().map_err(bad)?,
                    )
                }
                _ => Err(Error::Parse(format!("expected four moments in `{s}`"))),
            },
            other => Err(Error::Parse(format!("unknown weight scheme `{other}`"))),
        }
    }
}

/// Central moments of the Binomial(n, 1/n) margin of the triangular scheme.
fn binomial_margin_moments(n: u64) -> LawMoments {
    let nf = n as f64;
    let p = 1.0 / nf;
    let q = 1.0 - p;
    let npq = q; // n * p * q collapses to q when p = 1/n
    LawMoments {
        mean: 1.0,
        c2: npq,
        c3: npq * (q - p),
        c4: npq * (1.0 + 3.0 * (nf - 2.0) * p * q),
    }
}

/// Finite-n SRF of the triangular scheme at theta, through the exact
/// Binomial(n, 1/n) margin moments.
pub fn srf_multinomial_finite(theta: f64, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter("triangular SRF needs n >= 2".into()));
    }
    Ok(binomial_margin_moments(n).srf(theta))
}

/// Limit of the triangular SRF as n grows: the margin converges to Poisson(1),
/// giving (-theta^3 + 3 theta^2 - 6 theta + 5) / (theta^2 - 2 theta + 2)^{3/2}.
pub fn srf_multinomial_limit(theta: f64) -> f64 {
    let num = -theta.powi(3) + 3.0 * theta * theta - 6.0 * theta + 5.0;
    let den = theta * theta - 2.0 * theta + 2.0;
    num / den.powf(1.5)
}

/// Largest single-weight contribution max_i (w_i - theta)^2 / n; a negligibility
/// diagnostic that must vanish as n grows for the CLT to bite.
pub fn max_negligibility_stat(weights: &[f64], theta: f64) -> f64 {
    let n = weights.len() as f64;
    weights
        .iter()
        .map(|w| (w - theta) * (w - theta))
        .fold(0.0_f64, f64::max)
        / n
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chi7() -> WeightScheme {
        WeightScheme::chi_square(7).unwrap()
    }

    #[test]
    fn chi_square_shifted_moments_at_9_3() {
        // mean 7, central (14, 56, 924); shift c = -2.3.
        let m = chi7().centered_moments(9.3, None).unwrap();
        assert!((m.mu_k2 - 19.29).abs() < 1e-12);
        assert!((m.mu_k3 - (56.0 + 42.0 * (-2.3) + (-2.3_f64).powi(3))).abs() < 1e-12);
        assert!((m.mu_k3 - (-52.767)).abs() < 1e-12);
        let c: f64 = -2.3;
        let expect4 = 924.0 + 4.0 * c * 56.0 + 6.0 * c * c * 14.0 + c.powi(4);
        assert!((m.mu_k4 - expect4).abs() < 1e-10);
    }

    #[test]
    fn srf_chi_square_reference() {
        let s = chi7().srf(9.3, None).unwrap();
        assert!((s - (-0.6228)).abs() < 5e-4, "srf = {s}");
    }

    #[test]
    fn srf_bernoulli_reference() {
        let w = WeightScheme::bernoulli(1.0 / 3.0).unwrap();
        let s = w.srf(0.58, None).unwrap();
        assert!((s - (-0.6997)).abs() < 5e-4, "srf = {s}");
    }

    #[test]
    fn symmetric_scheme_at_mean_is_exactly_zero() {
        let w = WeightScheme::normal(0.0, 1.0).unwrap();
        assert_eq!(w.srf(0.0, None).unwrap(), 0.0);
        let m = w.centered_moments(0.0, None).unwrap();
        assert_eq!(m.mu_k3, 0.0);
        let shifted = WeightScheme::normal(2.5, 4.0).unwrap();
        assert_eq!(shifted.srf(2.5, None).unwrap(), 0.0);
    }

    #[test]
    fn multinomial_margin_matches_two_point_enumeration() {
        // n = 2: margin Binomial(2, 1/2) takes 0,1,2 with probs 1/4,1/2,1/4.
        let w = WeightScheme::multinomial_symmetric();
        let m = w.centered_moments(0.0, Some(2)).unwrap();
        assert!((m.mu_k2 - 1.5).abs() < 1e-15);
        let e3 = 0.25 * 0.0 + 0.5 * 1.0 + 0.25 * 8.0; // E w^3
        assert!((m.mu_k3 - e3).abs() < 1e-15);
    }

    #[test]
    fn multinomial_requires_sample_size() {
        let w = WeightScheme::multinomial_symmetric();
        assert_eq!(w.centered_moments(0.0, None).unwrap_err(), Error::MissingSampleSize);
    }

    #[test]
    fn limit_srf_reference_points() {
        assert!((srf_multinomial_limit(0.0) - 5.0 / 8.0_f64.sqrt()).abs() < 1e-12);
        let at_star = srf_multinomial_limit(1.32215);
        assert!((at_star - 1e-4).abs() < 2e-5, "srf(1.32215) = {at_star}");
    }

    #[test]
    fn finite_srf_approaches_limit() {
        let theta = 1.1;
        let fin = srf_multinomial_finite(theta, 1_000_000).unwrap();
        let lim = srf_multinomial_limit(theta);
        assert!((fin - lim).abs() < 1e-5, "finite {fin} vs limit {lim}");
    }

    #[test]
    fn finite_srf_at_published_constants() {
        let s10 = srf_multinomial_finite(1.2601, 10).unwrap();
        assert!(s10.abs() < 5e-4, "srf(1.2601, 10) = {s10}");
        let s20 = srf_multinomial_finite(1.29129, 20).unwrap();
        assert!(s20.abs() < 5e-4, "srf(1.29129, 20) = {s20}");
    }

    #[test]
    fn srf_derivative_matches_finite_difference() {
        let w = chi7();
        for theta in [4.0, 8.0, 9.3, 12.0] {
            let h = 1e-6;
            let fd = (w.srf(theta + h, None).unwrap() - w.srf(theta - h, None).unwrap()) / (2.0 * h);
            let an = w.srf_derivative(theta, None).unwrap();
            assert!((fd - an).abs() < 1e-6, "theta {theta}: fd {fd} vs analytic {an}");
        }
    }

    #[test]
    fn custom_moments_validation() {
        assert_eq!(
            WeightScheme::custom_moments(1.0, 1.0, 1.0, 1.0).unwrap_err(),
            Error::NonPositiveVariance
        );
        // central4 = 0.5 < central2^2 = 1 violates Cauchy-Schwarz.
        assert!(matches!(
            WeightScheme::custom_moments(0.0, 1.0, 0.0, 0.5),
            Err(Error::InvalidParameter(_))
        ));
        // Standard normal raw moments are fine.
        let w = WeightScheme::custom_moments(0.0, 1.0, 0.0, 3.0).unwrap();
        assert!(w.symmetric());
        assert_eq!(w.srf(0.0, None).unwrap(), 0.0);
    }

    #[test]
    fn custom_moments_reproduce_chi_square() {
        // Raw moments of chi-square(7): 7, 63, 693, 9009.
        let w = WeightScheme::custom_moments(7.0, 63.0, 693.0, 9009.0).unwrap();
        let a = w.centered_moments(9.3, None).unwrap();
        let b = chi7().centered_moments(9.3, None).unwrap();
        assert!((a.mu_k2 - b.mu_k2).abs() < 1e-9);
        assert!((a.mu_k3 - b.mu_k3).abs() < 1e-9);
        assert!((a.mu_k4 - b.mu_k4).abs() < 1e-8);
    }

    #[test]
    fn multinomial_rows_sum_to_n() {
        let w = WeightScheme::multinomial_symmetric();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 10, 137] {
            let row = w.sample(n, &mut rng).unwrap();
            let sum: f64 = row.iter().sum();
            assert_eq!(sum, n as f64);
        }
    }

    #[test]
    fn sampler_means_close_to_law_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 20_000;
        for (scheme, mean, sd) in [
            (chi7(), 7.0, (14.0_f64).sqrt()),
            (WeightScheme::bernoulli(1.0 / 3.0).unwrap(), 1.0 / 3.0, (2.0_f64 / 9.0).sqrt()),
            (WeightScheme::normal(0.0, 1.0).unwrap(), 0.0, 1.0),
        ] {
            let xs = scheme.sample(draws, &mut rng).unwrap();
            let m = xs.iter().sum::<f64>() / draws as f64;
            let tol = 5.0 * sd / (draws as f64).sqrt();
            assert!((m - mean).abs() < tol, "{scheme:?}: mean {m} vs {mean}");
        }
    }

    #[test]
    fn chi_square_samples_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs = chi7().sample(1000, &mut rng).unwrap();
        assert!(xs.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn negligibility_examples() {
        assert_eq!(max_negligibility_stat(&[1.0, 1.0, 1.0, 1.0], 1.0), 0.0);
        assert_eq!(max_negligibility_stat(&[3.0, 0.0], 1.0), 2.0);
    }

    #[test]
    fn negligibility_shrinks_for_multinomial() {
        let w = WeightScheme::multinomial_symmetric();
        let theta = 1.32215;
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut medians = Vec::new();
        for n in [100usize, 1000, 10_000] {
            let mut stats: Vec<f64> = (0..100)
                .map(|_| max_negligibility_stat(&w.sample(n, &mut rng).unwrap(), theta))
                .collect();
            stats.sort_by(f64::total_cmp);
            medians.push(stats[stats.len() / 2]);
        }
        assert!(medians[0] > medians[1] && medians[1] > medians[2], "{medians:?}");
    }
}
