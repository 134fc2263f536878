//! One- and two-term Edgeworth expansions quantifying how far the pivot
//! distributions sit from the normal limit, and the factorized p-variate
//! one-term expansion built from Gaussian partial moments.
//!
//! These evaluators are diagnostics: intervals and rectangles always use
//! plain normal quantiles.

use crate::error::{Error, Result};
use crate::multivariate::{inverse_sqrt, rows_mean_cov_divisor_n, RegularizationPolicy};
use crate::normal;
use nalgebra::DVector;

/// The polynomial factors of the expansions: order 1 is t^2 - 1, order 2 is
/// t^3 - 3t, order 3 is t^5 - 10t^3 + 15t.
pub fn hermite(t: f64, order: u8) -> Result<f64> {
    match order {
        1 => Ok(t * t - 1.0),
        2 => Ok(t * (t * t - 3.0)),
        3 => Ok(t * (t * t * (t * t - 10.0) + 15.0)),
        other => Err(Error::InvalidParameter(format!(
            "expansion polynomials are defined for orders 1-3, got {other}"
        ))),
    }
}

/// Moment inputs to the univariate expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionInputs {
    /// Data skewness E(X - mu)^3 / sigma^3.
    pub gamma: f64,
    /// Data kurtosis E(X - mu)^4 / sigma^4 (normal = 3).
    pub kappa: f64,
    /// Skewness-reducing factor of the weight law at the chosen window
    /// constant; 1 recovers the classical expansion.
    pub srf: f64,
    /// E_w(w - theta)^4 / [E_w(w - theta)^2]^2; 1 in the classical case.
    pub weight_kurtosis_ratio: f64,
    pub n: u64,
}

impl ExpansionInputs {
    pub fn new(gamma: f64, kappa: f64, srf: f64, weight_kurtosis_ratio: f64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::MissingSampleSize);
        }
        if kappa < 1.0 + gamma * gamma {
            return Err(Error::InvalidParameter(format!(
                "kurtosis {kappa} violates the moment bound 1 + skewness^2 = {}",
                1.0 + gamma * gamma
            )));
        }
        if weight_kurtosis_ratio < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "weight kurtosis ratio must be at least 1, got {weight_kurtosis_ratio}"
            )));
        }
        Ok(Self { gamma, kappa, srf, weight_kurtosis_ratio, n })
    }

    /// Classical (non-randomized) inputs: both weight factors equal 1.
    pub fn classical(gamma: f64, kappa: f64, n: u64) -> Result<Self> {
        Self::new(gamma, kappa, 1.0, 1.0, n)
    }
}

/// One-term expansion of the pivot's distribution function:
/// Phi(t) - phi(t) H1(t) / (6 sqrt n) * srf * gamma.
pub fn one_term_cdf(t: f64, inputs: &ExpansionInputs) -> f64 {
    let sqrt_n = (inputs.n as f64).sqrt();
    normal::cdf(t)
        - normal::pdf(t) * (t * t - 1.0) / (6.0 * sqrt_n) * inputs.srf * inputs.gamma
}

/// Two-term expansion: subtracts the 1/sqrt(n) skewness term, the 1/n
/// kurtosis term, and the 1/n squared-skewness term.
pub fn two_term_cdf(t: f64, inputs: &ExpansionInputs) -> f64 {
    let nf = inputs.n as f64;
    let sqrt_n = nf.sqrt();
    let sg = inputs.srf * inputs.gamma;
    let h1 = t * t - 1.0;
    let h2 = t * (t * t - 3.0);
    let h3 = t * (t * t * (t * t - 10.0) + 15.0);
    let bracket = h1 / (6.0 * sqrt_n) * sg
        + h2 / (24.0 * nf) * (inputs.weight_kurtosis_ratio * inputs.kappa - 3.0)
        + h3 / (72.0 * nf) * sg * sg;
    normal::cdf(t) - normal::pdf(t) * bracket
}

/// Partial moments of the standard normal, I_k(t) = int_{-inf}^t u^k phi(u) du
/// for k = 0..3: the closed forms that make the rectangle integrals of the
/// p-variate expansion exact.
pub fn gaussian_partial_moments(t: f64) -> (f64, f64, f64, f64) {
    let cdf = normal::cdf(t);
    let pdf = normal::pdf(t);
    (cdf, -pdf, cdf - t * pdf, -(t * t + 2.0) * pdf)
}

/// Symmetric tensor of standardized third moments E(Y_j Y_k Y_l), stored once
/// per sorted index triple.
#[derive(Debug, Clone, PartialEq)]
pub struct ThirdMomentTensor {
    p: usize,
    entries: Vec<f64>, // indexed over j <= k <= l in lexicographic order
}

impl ThirdMomentTensor {
    pub fn zeros(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("tensor dimension must be positive".into()));
        }
        let len = p * (p + 1) * (p + 2) / 6;
        Ok(Self { p, entries: vec![0.0; len] })
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    fn offset(&self, j: usize, k: usize, l: usize) -> usize {
        // Sorted (a <= b <= c); rank within the simplex enumeration
        // a ascending, then b, then c.
        let mut idx = [j, k, l];
        idx.sort_unstable();
        let [a, b, c] = idx;
        let p = self.p;
        // entries before first index a: sum_{u<a} (p-u)(p-u+1)/2
        let mut off = 0;
        for u in 0..a {
            let m = p - u;
            off += m * (m + 1) / 2;
        }
        // within block a: pairs (b', c') with a <= b' <= c'; before b: rows
        for v in a..b {
            off += p - v;
        }
        off + (c - b)
    }

    pub fn get(&self, j: usize, k: usize, l: usize) -> f64 {
        self.entries[self.offset(j, k, l)]
    }

    pub fn set(&mut self, j: usize, k: usize, l: usize, value: f64) {
        let o = self.offset(j, k, l);
        self.entries[o] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Dimension 1 tensor holding a plain skewness.
    pub fn univariate(gamma: f64) -> Self {
        Self { p: 1, entries: vec![gamma] }
    }

    /// Exact tensor for (X, X^2) with standard normal X: standardized
    /// coordinates (X, (X^2 - 1)/sqrt 2) give E(Y_1^2 Y_2) = sqrt 2 and
    /// E(Y_2^3) = 2 sqrt 2, all other entries zero.
    pub fn square_pair_normal() -> Self {
        let mut t = Self::zeros(2).unwrap();
        t.set(0, 0, 1, std::f64::consts::SQRT_2);
        t.set(1, 1, 1, 2.0 * std::f64::consts::SQRT_2);
        t
    }

    /// Empirical tensor of rows: standardize by the divisor-n covariance's
    /// inverse square root, then average the third-order products.
    pub fn empirical(rows: &[Vec<f64>]) -> Result<Self> {
        let (mean, cov) = rows_mean_cov_divisor_n(rows)?;
        let inv_root = inverse_sqrt(&cov, RegularizationPolicy::Ridge)?;
        let p = mean.len();
        let n = rows.len() as f64;
        let standardized: Vec<DVector<f64>> = rows
            .iter()
            .map(|r| &inv_root * (DVector::from_column_slice(r) - &mean))
            .collect();
        let mut tensor = Self::zeros(p)?;
        for j in 0..p {
            for k in j..p {
                for l in k..p {
                    let v: f64 =
                        standardized.iter().map(|z| z[j] * z[k] * z[l]).sum::<f64>() / n;
                    tensor.set(j, k, l, v);
                }
            }
        }
        Ok(tensor)
    }
}

/// Factorized p-variate one-term expansion at the orthant corner t:
/// the product of marginal Phi values plus (srf / sqrt n) times the three
/// closed-form index-family sums (pure cubes, square-cross pairs, distinct
/// triples), each rectangle integral reduced to products of
/// [`gaussian_partial_moments`] per coordinate.
pub fn multivariate_one_term_cdf(
    t: &[f64],
    tensor: &ThirdMomentTensor,
    srf: f64,
    n: u64,
) -> Result<f64> {
    let p = tensor.dim();
    if t.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: t.len() });
    }
    if n == 0 {
        return Err(Error::MissingSampleSize);
    }
    let moments: Vec<(f64, f64, f64, f64)> =
        t.iter().map(|&tj| gaussian_partial_moments(tj)).collect();
    let phi_product = |skip: &[usize]| -> f64 {
        (0..p).filter(|s| !skip.contains(s)).map(|s| moments[s].0).product()
    };

    let mut bracket = 0.0;
    // Pure cubes: -(1/6)(-I3 + 3 I1) at the cubed coordinate.
    for (j, &(_, i1, _, i3)) in moments.iter().enumerate() {
        bracket += tensor.get(j, j, j) * (-(1.0 / 6.0) * (-i3 + 3.0 * i1)) * phi_product(&[j]);
    }
    // Square-cross pairs over ordered (j, k), j squared and k linear:
    // -(1/2)(I2(t_j) I1(t_k) + I0(t_j) I1(t_k)).
    for j in 0..p {
        for k in 0..p {
            if j == k {
                continue;
            }
            let (i0_j, _, i2_j, _) = moments[j];
            let i1_k = moments[k].1;
            bracket += tensor.get(j, j, k)
                * (-0.5 * (i2_j * i1_k + i0_j * i1_k))
                * phi_product(&[j, k]);
        }
    }
    // Distinct triples over ordered (j, k, l): -I1 I1 I1.
    for j in 0..p {
        for k in 0..p {
            for l in 0..p {
                if j == k || k == l || j == l {
                    continue;
                }
                bracket += tensor.get(j, k, l)
                    * (-moments[j].1 * moments[k].1 * moments[l].1)
                    * phi_product(&[j, k, l]);
            }
        }
    }

    Ok(phi_product(&[]) + srf / (n as f64).sqrt() * bracket)
}
