//! Data-generating laws for the simulation harness: skewed univariate
//! families plus two bivariate constructions (a variable paired with its
//! square, and adjacent terms of a first-order moving average).

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Beta, Binomial, ChiSquared, Distribution, Exp, LogNormal, Normal, Poisson};
use std::fmt;
use std::str::FromStr;

/// Base family for the (X, X^2) bivariate construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareBase {
    Normal,
    Exponential,
}

/// Innovation family for the moving-average pair construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaBase {
    Normal,
    /// Exp(1) innovations recentered to mean zero.
    CenteredExponential,
}

/// MA(1) coefficient used by [`DataLaw::Ma1Pair`].
pub const MA1_COEFFICIENT: f64 = 0.2;

/// A data-generating law, identified by family and parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DataLaw {
    Binomial { trials: u64, p: f64 },
    Poisson { lambda: f64 },
    Lognormal { location: f64, scale: f64 },
    Exponential { rate: f64 },
    ChiSquare { df: u32 },
    Beta { a: f64, b: f64 },
    Normal { mean: f64, sd: f64 },
    /// Rows (X, X^2) with X drawn from the base family.
    SquarePair { base: SquareBase },
    /// Rows (eta_t, eta_{t+1}) with eta_t = zeta_t + 0.2 zeta_{t-1}; each row
    /// consumes three fresh innovations, so rows are mutually independent.
    Ma1Pair { base: MaBase },
}

impl DataLaw {
    /// Number of coordinates per observation.
    pub fn dimension(&self) -> usize {
        match self {
            DataLaw::SquarePair { .. } | DataLaw::Ma1Pair { .. } => 2,
            _ => 1,
        }
    }

    /// The exact mean vector of one observation.
    pub fn true_mean(&self) -> Vec<f64> {
        match self {
            DataLaw::Binomial { trials, p } => vec![*trials as f64 * p],
            DataLaw::Poisson { lambda } => vec![*lambda],
            DataLaw::Lognormal { location, scale } => {
                vec![(location + 0.5 * scale * scale).exp()]
            }
            DataLaw::Exponential { rate } => vec![1.0 / rate],
            DataLaw::ChiSquare { df } => vec![*df as f64],
            DataLaw::Beta { a, b } => vec![a / (a + b)],
            DataLaw::Normal { mean, .. } => vec![*mean],
            DataLaw::SquarePair { base: SquareBase::Normal } => vec![0.0, 1.0],
            DataLaw::SquarePair { base: SquareBase::Exponential } => vec![1.0, 2.0],
            DataLaw::Ma1Pair { .. } => vec![0.0, 0.0],
        }
    }

    /// Closed-form (skewness, kurtosis) of a univariate law; kurtosis is the
    /// standardized fourth moment (normal = 3). `None` for bivariate laws.
    pub fn skewness_kurtosis(&self) -> Option<(f64, f64)> {
        match self {
            DataLaw::Binomial { trials, p } => {
                let q = 1.0 - p;
                let v = *trials as f64 * p * q;
                Some(((1.0 - 2.0 * p) / v.sqrt(), 3.0 + (1.0 - 6.0 * p * q) / v))
            }
            DataLaw::Poisson { lambda } => Some((lambda.sqrt().recip(), 3.0 + 1.0 / lambda)),
            DataLaw::Lognormal { scale, .. } => {
                let w = (scale * scale).exp();
                Some((
                    (w + 2.0) * (w - 1.0).sqrt(),
                    w * w * (w * w + 2.0 * w + 3.0) - 3.0,
                ))
            }
            DataLaw::Exponential { .. } => Some((2.0, 9.0)),
            DataLaw::ChiSquare { df } => {
                let k = *df as f64;
                Some(((8.0 / k).sqrt(), 3.0 + 12.0 / k))
            }
            DataLaw::Beta { a, b } => {
                let s = a + b;
                let skew = 2.0 * (b - a) * (s + 1.0).sqrt() / ((s + 2.0) * (a * b).sqrt());
                let excess = 6.0 * ((a - b).powi(2) * (s + 1.0) - a * b * (s + 2.0))
                    / (a * b * (s + 2.0) * (s + 3.0));
                Some((skew, 3.0 + excess))
            }
            DataLaw::Normal { .. } => Some((0.0, 3.0)),
            DataLaw::SquarePair { .. } | DataLaw::Ma1Pair { .. } => None,
        }
    }

    /// Draw `n` univariate observations. Errors for bivariate laws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        if self.dimension() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.dimension() });
        }
        let rows = self.sample_rows(n, rng)?;
        Ok(rows.into_iter().map(|r| r[0]).collect())
    }

    /// Draw `n` observations as rows of length [`dimension`](Self::dimension).
    pub fn sample_rows<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
        let mut rows = Vec::with_capacity(n);
        match self {
            DataLaw::Binomial { trials, p } => {
                let d = Binomial::new(*trials, *p)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for _ in 0..n {
                    rows.push(vec![d.sample(rng) as f64]);
                }
            }
            DataLaw::Poisson { lambda } => {
                let d = Poisson::new(*lambda)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for _ in 0..n {
                    rows.push(vec![d.sample(rng)]);
                }
            }
            DataLaw::Lognormal { location, scale } => {
                let d = LogNormal::new(*location, *scale)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for _ in 0..n {
                    rows.push(vec![d.sample(rng)]);
                }
            }
            DataLaw::Exponential { rate } => {
                let d = Exp::new(*rate).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for _ in 0..n {
                    rows.push(vec![d.sample(rng)]);
                }
            }
            DataLaw::ChiSquare { df } => {
                let d = ChiSquared::new(*df as f64)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for _ in 0..n {
                    rows.push(vec![d.sample(rng)]);
                }
            }
            DataLaw::Beta { a, b } => {
                let d = Beta::new(*a, *b).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for _ in 0..n {
                    rows.push(vec![d.sample(rng)]);
                }
            }
            DataLaw::Normal { mean, sd } => {
                let d = Normal::new(*mean, *sd)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for _ in 0..n {
                    rows.push(vec![d.sample(rng)]);
                }
            }
            DataLaw::SquarePair { base } => {
                for _ in 0..n {
                    let x: f64 = match base {
                        SquareBase::Normal => {
                            Normal::new(0.0, 1.0).unwrap().sample(rng)
                        }
                        SquareBase::Exponential => Exp::new(1.0).unwrap().sample(rng),
                    };
                    rows.push(vec![x, x * x]);
                }
            }
            DataLaw::Ma1Pair { base } => {
                for _ in 0..n {
                    let mut draw = || -> f64 {
                        match base {
                            MaBase::Normal => Normal::new(0.0, 1.0).unwrap().sample(rng),
                            MaBase::CenteredExponential => {
                                Exp::new(1.0).unwrap().sample(rng) - 1.0
                            }
                        }
                    };
                    let (z0, z1, z2) = (draw(), draw(), draw());
                    rows.push(vec![
                        z1 + MA1_COEFFICIENT * z0,
                        z2 + MA1_COEFFICIENT * z1,
                    ]);
                }
            }
        }
        Ok(rows)
    }
}

impl fmt::Display for DataLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataLaw::Binomial { trials, p } => write!(f, "binomial({trials},{p})"),
            DataLaw::Poisson { lambda } => write!(f, "poisson({lambda})"),
            DataLaw::Lognormal { location, scale } => write!(f, "lognormal({location},{scale})"),
            DataLaw::Exponential { rate } => write!(f, "exponential({rate})"),
            DataLaw::ChiSquare { df } => write!(f, "chisquare({df})"),
            DataLaw::Beta { a, b } => write!(f, "beta({a},{b})"),
            DataLaw::Normal { mean, sd } => write!(f, "normal({mean},{sd})"),
            DataLaw::SquarePair { base: SquareBase::Normal } => write!(f, "xx2(normal)"),
            DataLaw::SquarePair { base: SquareBase::Exponential } => {
                write!(f, "xx2(exponential)")
            }
            DataLaw::Ma1Pair { base: MaBase::Normal } => write!(f, "ma1(normal)"),
            DataLaw::Ma1Pair { base: MaBase::CenteredExponential } => {
                write!(f, "ma1(exponential)")
            }
        }
    }
}

impl FromStr for DataLaw {
    type Err = Error;

    /// Parse descriptors like `binomial(10,0.1)`, `xx2(normal)`, `ma1(exponential)`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_descriptor(s)?;
        let law = match name.as_str() {
            "binomial" => {
                let (a, b) = two_args(&args, s)?;
                let trials = a as u64;
                if a.fract() != 0.0 || a < 1.0 {
                    return Err(Error::Parse(format!("binomial trials must be a positive integer in `{s}`")));
                }
                DataLaw::Binomial { trials, p: b }
            }
            "poisson" => DataLaw::Poisson { lambda: one_arg(&args, s)? },
            "lognormal" => {
                let (a, b) = two_args(&args, s)?;
                DataLaw::Lognormal { location: a, scale: b }
            }
            "exponential" => DataLaw::Exponential { rate: one_arg(&args, s)? },
            "chisquare" => {
                let a = one_arg(&args, s)?;
                if a.fract() != 0.0 || a < 1.0 {
                    return Err(Error::Parse(format!("chisquare df must be a positive integer in `{s}`")));
                }
                DataLaw::ChiSquare { df: a as u32 }
            }
            "beta" => {
                let (a, b) = two_args(&args, s)?;
                DataLaw::Beta { a, b }
            }
            "normal" => {
                let (a, b) = two_args(&args, s)?;
                DataLaw::Normal { mean: a, sd: b }
            }
            "xx2" => match args.as_slice() {
                [one] if one == "normal" => DataLaw::SquarePair { base: SquareBase::Normal },
                [one] if one == "exponential" => {
                    DataLaw::SquarePair { base: SquareBase::Exponential }
                }
                _ => return Err(Error::Parse(format!("xx2 base must be normal or exponential in `{s}`"))),
            },
            "ma1" => match args.as_slice() {
                [one] if one == "normal" => DataLaw::Ma1Pair { base: MaBase::Normal },
                [one] if one == "exponential" => {
                    DataLaw::Ma1Pair { base: MaBase::CenteredExponential }
                }
                _ => return Err(Error::Parse(format!("ma1 base must be normal or exponential in `{s}`"))),
            },
            other => return Err(Error::Parse(format!("unknown data law `{other}`"))),
        };
        Ok(law)
    }
}

pub(crate) fn split_descriptor(s: &str) -> Result<(String, Vec<String>)> {
    let s = s.trim().to_ascii_lowercase();
    match s.split_once('(') {
        None => Ok((s, Vec::new())),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{s}`")))?;
            let args = inner.split(',').map(|a| a.trim().to_string()).collect();
            Ok((name.trim().to_string(), args))
        }
    }
}

pub(crate) fn one_arg(args: &[String], src: &str) -> Result<f64> {
    match args {
        [a] => a.parse().map_err(|_| Error::Parse(format!("bad number in `{src}`"))),
        _ => Err(Error::Parse(format!("expected one argument in `{src}`"))),
    }
}

pub(crate) fn two_args(args: &[String], src: &str) -> Result<(f64, f64)> {
    match args {
        [a, b] => {
            let a = a.parse().map_err(|_| Error::Parse(format!("bad number in `{src}`")))?;
            let b = b.parse().map_err(|_| Error::Parse(format!("bad number in `{src}`")))?;
            Ok((a, b))
        }
        _ => Err(Error::Parse(format!("expected two arguments in `{src}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn descriptors_round_trip() {
        let laws = [
            DataLaw::Binomial { trials: 10, p: 0.1 },
            DataLaw::Poisson { lambda: 1.0 },
            DataLaw::Lognormal { location: 0.0, scale: 1.0 },
            DataLaw::Exponential { rate: 1.0 },
            DataLaw::ChiSquare { df: 1 },
            DataLaw::Beta { a: 5.0, b: 1.0 },
            DataLaw::Normal { mean: 0.0, sd: 1.0 },
            DataLaw::SquarePair { base: SquareBase::Normal },
            DataLaw::SquarePair { base: SquareBase::Exponential },
            DataLaw::Ma1Pair { base: MaBase::Normal },
            DataLaw::Ma1Pair { base: MaBase::CenteredExponential },
        ];
        for law in laws {
            let text = law.to_string();
            let back: DataLaw = text.parse().unwrap();
            assert_eq!(back, law, "round trip failed for {text}");
        }
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!("weibull(1)".parse::<DataLaw>().is_err());
        assert!("binomial(10".parse::<DataLaw>().is_err());
        assert!("binomial(0.5,0.1)".parse::<DataLaw>().is_err());
        assert!("poisson(a)".parse::<DataLaw>().is_err());
        assert!("xx2(cauchy)".parse::<DataLaw>().is_err());
    }

    #[test]
    fn true_means_match_closed_forms() {
        let e = std::f64::consts::E;
        let cases = [
            (DataLaw::Binomial { trials: 10, p: 0.1 }, vec![1.0]),
            (DataLaw::Poisson { lambda: 1.0 }, vec![1.0]),
            (DataLaw::Lognormal { location: 0.0, scale: 1.0 }, vec![e.sqrt()]),
            (DataLaw::Exponential { rate: 1.0 }, vec![1.0]),
            (DataLaw::ChiSquare { df: 1 }, vec![1.0]),
            (DataLaw::Beta { a: 5.0, b: 1.0 }, vec![5.0 / 6.0]),
            (DataLaw::SquarePair { base: SquareBase::Normal }, vec![0.0, 1.0]),
            (DataLaw::SquarePair { base: SquareBase::Exponential }, vec![1.0, 2.0]),
            (DataLaw::Ma1Pair { base: MaBase::CenteredExponential }, vec![0.0, 0.0]),
        ];
        for (law, want) in cases {
            let got = law.true_mean();
            assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12, "{law}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn shape_constants_match_closed_forms() {
        let e = std::f64::consts::E;
        let cases = [
            (DataLaw::Exponential { rate: 1.0 }, 2.0, 9.0),
            (DataLaw::Poisson { lambda: 1.0 }, 1.0, 4.0),
            (DataLaw::ChiSquare { df: 1 }, 8.0_f64.sqrt(), 15.0),
            (
                DataLaw::Lognormal { location: 0.0, scale: 1.0 },
                (e + 2.0) * (e - 1.0).sqrt(),
                e.powi(4) + 2.0 * e.powi(3) + 3.0 * e.powi(2) - 3.0,
            ),
            (DataLaw::Binomial { trials: 10, p: 0.1 }, 0.8 / 0.9_f64.sqrt(), 3.0 + 0.46 / 0.9),
            (DataLaw::Beta { a: 5.0, b: 1.0 }, -(7.0_f64 / 5.0).sqrt(), 4.2),
            (DataLaw::Normal { mean: 0.0, sd: 1.0 }, 0.0, 3.0),
        ];
        for (law, skew, kurt) in cases {
            let (g, k) = law.skewness_kurtosis().unwrap();
            assert!((g - skew).abs() < 1e-12, "{law} skewness {g} vs {skew}");
            assert!((k - kurt).abs() < 1e-12, "{law} kurtosis {k} vs {kurt}");
        }
        assert!(DataLaw::Ma1Pair { base: MaBase::Normal }.skewness_kurtosis().is_none());
    }

    #[test]
    fn sample_rows_have_declared_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for law in [
            DataLaw::Poisson { lambda: 1.0 },
            DataLaw::SquarePair { base: SquareBase::Exponential },
            DataLaw::Ma1Pair { base: MaBase::Normal },
        ] {
            let rows = law.sample_rows(25, &mut rng).unwrap();
            assert_eq!(rows.len(), 25);
            assert!(rows.iter().all(|r| r.len() == law.dimension()));
        }
    }

    #[test]
    fn univariate_sample_rejects_bivariate_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let err = DataLaw::Ma1Pair { base: MaBase::Normal }.sample(5, &mut rng).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 1, got: 2 }));
    }

    #[test]
    fn square_pair_second_coordinate_is_square_of_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rows =
            DataLaw::SquarePair { base: SquareBase::Normal }.sample_rows(100, &mut rng).unwrap();
        for r in rows {
            assert_eq!(r[1], r[0] * r[0]);
        }
    }

    #[test]
    fn sample_means_approach_true_means() {
        // Coarse law-of-large-numbers check, 200k draws, generous tolerance.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for law in [
            DataLaw::Binomial { trials: 10, p: 0.1 },
            DataLaw::Lognormal { location: 0.0, scale: 1.0 },
            DataLaw::Beta { a: 5.0, b: 1.0 },
            DataLaw::SquarePair { base: SquareBase::Exponential },
        ] {
            let n = 200_000;
            let rows = law.sample_rows(n, &mut rng).unwrap();
            let want = law.true_mean();
            for (j, w) in want.iter().enumerate() {
                let got: f64 = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
                assert!((got - w).abs() < 0.05, "{law}[{j}]: {got} vs {w}");
            }
        }
    }

    #[test]
    fn ma1_rows_are_mutually_independent_but_internally_correlated() {
        // Within a row, cov(eta_t, eta_{t+1}) = 0.2 var(zeta); across rows the
        // innovations are fresh, so the sample cross-row correlation vanishes.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 100_000;
        let rows = DataLaw::Ma1Pair { base: MaBase::Normal }.sample_rows(n, &mut rng).unwrap();
        let within: f64 = rows.iter().map(|r| r[0] * r[1]).sum::<f64>() / n as f64;
        assert!((within - MA1_COEFFICIENT).abs() < 0.02, "within-row cov {within}");
        let across: f64 = rows.windows(2).map(|w| w[0][1] * w[1][0]).sum::<f64>() / (n - 1) as f64;
        assert!(across.abs() < 0.02, "across-row cov {across}");
    }
}
