//! Multivariate pivots, simultaneous confidence rectangles, and a
//! Mardia-type multivariate skewness measure.
//!
//! The standardizer throughout is the symmetric inverse square root of the
//! sample covariance; near-singular covariances are handled by a small ridge
//! (or rejected, under [`RegularizationPolicy::Fail`]).

use crate::error::{Error, Result};
use crate::normal;
use crate::pivots::{randomized_denominator, DenominatorMode};
use crate::weights::CenteredMoments;
use nalgebra::{DMatrix, DVector};

/// Relative eigenvalue floor: covariances whose smallest eigenvalue falls
/// below this fraction of the largest are regularized before inversion.
pub const EIGEN_RATIO_FLOOR: f64 = 1e-10;

/// Ridge size as a fraction of the average diagonal entry.
pub const RIDGE_SCALE: f64 = 1e-8;

/// What to do when the covariance is numerically singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularizationPolicy {
    /// Add `RIDGE_SCALE * trace/p` to the diagonal and retry; a matrix with
    /// no positive trace at all standardizes by the identity.
    #[default]
    Ridge,
    /// Refuse with [`Error::SingularStandardizer`].
    Fail,
}

/// An i.i.d. multivariate sample (rows are observations) together with the
/// mean vector under test.
#[derive(Debug, Clone)]
pub struct MultivariateSample {
    data: DMatrix<f64>,
    mu: DVector<f64>,
}

impl MultivariateSample {
    pub fn new(rows: &[Vec<f64>], mu: &[f64]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::MissingSampleSize);
        }
        let p = rows[0].len();
        if p == 0 {
            return Err(Error::InvalidParameter("observations must have at least one coordinate".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::DimensionMismatch { expected: p, got: bad.len() });
        }
        if mu.len() != p {
            return Err(Error::DimensionMismatch { expected: p, got: mu.len() });
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(Self {
            data: DMatrix::from_row_slice(rows.len(), p, &flat),
            mu: DVector::from_column_slice(mu),
        })
    }

    pub fn len(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor requires at least two rows
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn mean(&self) -> DVector<f64> {
        let n = self.len() as f64;
        DVector::from_iterator(self.dim(), self.data.column_iter().map(|c| c.sum() / n))
    }

    /// Sample covariance with divisor n - 1.
    pub fn covariance(&self) -> DMatrix<f64> {
        covariance_of(&self.data, self.len() as f64 - 1.0)
    }
}

/// Mean vector and divisor-n covariance of rows, for modules that standardize
/// empirically (the skewness measure and the third-moment tensor).
pub(crate) fn rows_mean_cov_divisor_n(rows: &[Vec<f64>]) -> Result<(DVector<f64>, DMatrix<f64>)> {
    if rows.len() < 2 {
        return Err(Error::MissingSampleSize);
    }
    let p = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != p) {
        return Err(Error::DimensionMismatch { expected: p, got: bad.len() });
    }
    let n = rows.len();
    let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    let data = DMatrix::from_row_slice(n, p, &flat);
    let nf = n as f64;
    let mean = DVector::<f64>::from_iterator(p, data.column_iter().map(|c| c.sum() / nf));
    Ok((mean, covariance_of(&data, nf)))
}

fn covariance_of(data: &DMatrix<f64>, divisor: f64) -> DMatrix<f64> {
    let n = data.nrows() as f64;
    let p = data.ncols();
    let mean = DVector::<f64>::from_iterator(p, data.column_iter().map(|c| c.sum() / n));
    let mut acc = DMatrix::<f64>::zeros(p, p);
    for row in data.row_iter() {
        let d = row.transpose() - &mean;
        acc += &d * d.transpose();
    }
    acc / divisor
}

/// Symmetric square root and inverse square root of a covariance-like matrix,
/// from one eigendecomposition.
fn eigen_roots(m: &DMatrix<f64>, policy: RegularizationPolicy) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let p = m.nrows();
    if m.ncols() != p {
        return Err(Error::DimensionMismatch { expected: p, got: m.ncols() });
    }
    let scale = m.amax();
    if scale > 0.0 {
        let asym = (m - m.transpose()).amax();
        if asym > 1e-8 * scale {
            return Err(Error::NotSymmetric);
        }
    }
    let sym = (m + m.transpose()) * 0.5;
    let attempt = |mat: DMatrix<f64>| -> Option<(DMatrix<f64>, DMatrix<f64>)> {
        let eig = mat.symmetric_eigen();
        let max_eig = eig.eigenvalues.max();
        let min_eig = eig.eigenvalues.min();
        if max_eig.is_nan() || max_eig <= 0.0 || min_eig < EIGEN_RATIO_FLOOR * max_eig {
            return None;
        }
        let v = &eig.eigenvectors;
        let root = v * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * v.transpose();
        let inv_root =
            v * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt())) * v.transpose();
        Some((root, inv_root))
    };
    if let Some(pair) = attempt(sym.clone()) {
        return Ok(pair);
    }
    match policy {
        RegularizationPolicy::Fail => Err(Error::SingularStandardizer),
        RegularizationPolicy::Ridge => {
            let trace = sym.trace();
            if trace <= 0.0 {
                let id = DMatrix::identity(p, p);
                return Ok((id.clone(), id));
            }
            let ridge = RIDGE_SCALE * trace / p as f64;
            let repaired = &sym + DMatrix::from_diagonal_element(p, p, ridge);
            attempt(repaired).ok_or(Error::SingularStandardizer)
        }
    }
}

/// Symmetric inverse square root M^{-1/2} with the given singularity policy.
pub fn inverse_sqrt(m: &DMatrix<f64>, policy: RegularizationPolicy) -> Result<DMatrix<f64>> {
    eigen_roots(m, policy).map(|(_, inv)| inv)
}

/// Classical multivariate statistic sqrt(n) S^{-1/2} (mean - mu).
pub fn t_multivariate(
    sample: &MultivariateSample,
    policy: RegularizationPolicy,
) -> Result<DVector<f64>> {
    let (_, inv_root) = eigen_roots(&sample.covariance(), policy)?;
    let n = sample.len() as f64;
    Ok(inv_root * (sample.mean() - sample.mu()) * n.sqrt())
}

/// Randomized multivariate statistic S^{-1/2} sum_i (w_i - theta)(X_i - mu) / D,
/// with D the same scalar denominator as in the univariate pivot.
pub fn g_multivariate(
    sample: &MultivariateSample,
    weights: &[f64],
    theta: f64,
    moments: &CenteredMoments,
    mode: DenominatorMode,
    policy: RegularizationPolicy,
) -> Result<DVector<f64>> {
    let n = sample.len();
    let d = randomized_denominator(n, weights, theta, moments, mode)?;
    let (_, inv_root) = eigen_roots(&sample.covariance(), policy)?;
    let mut acc = DVector::<f64>::zeros(sample.dim());
    for (row, w) in sample.data.row_iter().zip(weights) {
        acc += (row.transpose() - sample.mu()) * (w - theta);
    }
    Ok(inv_root * acc / d)
}

/// Per-coordinate cutoff z with Phi(z) = (1 + (1-alpha)^{1/p}) / 2, so that p
/// independent coordinate events each at level (1-alpha)^{1/p} multiply to
/// simultaneous level 1 - alpha.
pub fn rectangle_cutoff(alpha: f64, p: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if p == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    Ok(normal::quantile((1.0 + (1.0 - alpha).powf(1.0 / p as f64)) / 2.0))
}

/// Simultaneous confidence region summarized as an axis-aligned rectangle.
///
/// The region itself is the set inverted from the standardized pivot: the
/// points where every coordinate of the pivot vector stays inside the
/// per-coordinate cutoff. `center` and `halfwidths` describe the axis-aligned
/// bounding rectangle of that set — the printable sides and volume — while
/// `contains` evaluates the defining pivot event, so membership and pivot
/// coordinates agree exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceRectangle {
    pub center: DVector<f64>,
    pub halfwidths: DVector<f64>,
    /// Maps a deviation (center - point) to pivot coordinates.
    pub standardizer: DMatrix<f64>,
    /// Per-coordinate bound on the pivot coordinates.
    pub cutoff: f64,
    pub degenerate: bool,
}

impl ConfidenceRectangle {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn lo(&self) -> DVector<f64> {
        &self.center - &self.halfwidths
    }

    pub fn hi(&self) -> DVector<f64> {
        &self.center + &self.halfwidths
    }

    pub fn side_lengths(&self) -> DVector<f64> {
        &self.halfwidths * 2.0
    }

    pub fn volume(&self) -> f64 {
        self.side_lengths().iter().product()
    }

    /// Pivot coordinates of a hypothesized point: the vector whose sup-norm
    /// decides membership.
    pub fn pivot_coordinates(&self, point: &[f64]) -> DVector<f64> {
        let deviation = &self.center - DVector::from_column_slice(point);
        &self.standardizer * deviation
    }

    /// The defining event: every pivot coordinate within the cutoff.
    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && self.pivot_coordinates(point).iter().all(|u| u.abs() <= self.cutoff)
    }

    fn whole_space(p: usize) -> Self {
        Self {
            center: DVector::zeros(p),
            halfwidths: DVector::from_element(p, f64::INFINITY),
            standardizer: DMatrix::zeros(p, p),
            cutoff: f64::INFINITY,
            degenerate: true,
        }
    }
}

/// Row sums of absolute entries of S^{1/2}: the coefficient that turns the
/// per-coordinate cutoff into a halfwidth covering the standardized region.
pub fn bounding_coefficients(root: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(root.nrows(), root.row_iter().map(|r| r.iter().map(|x| x.abs()).sum()))
}

/// Simultaneous rectangle around the sample mean. The pivot at a point m is
/// sqrt(n) S^{-1/2} (mean - m); the reported bounding side for coordinate k is
/// z/sqrt(n) * sum_l |S^{1/2}_{kl}|.
pub fn classical_rectangle(
    sample: &MultivariateSample,
    alpha: f64,
    policy: RegularizationPolicy,
) -> Result<ConfidenceRectangle> {
    let z = rectangle_cutoff(alpha, sample.dim())?;
    let (root, inv_root) = eigen_roots(&sample.covariance(), policy)?;
    let n = sample.len() as f64;
    Ok(ConfidenceRectangle {
        center: sample.mean(),
        halfwidths: bounding_coefficients(&root) * (z / n.sqrt()),
        standardizer: inv_root * n.sqrt(),
        cutoff: z,
        degenerate: false,
    })
}

/// Simultaneous rectangle from the randomized pivot: center
/// sum_i (w_i - theta) X_i / W with W = sum_i (w_i - theta). At a point m the
/// pivot is (W/D) S^{-1/2} (center - m), so the reported bounding side for
/// coordinate k is z D / |W| * sum_l |S^{1/2}_{kl}|. W = 0 yields the
/// degenerate whole space.
pub fn randomized_rectangle(
    sample: &MultivariateSample,
    weights: &[f64],
    theta: f64,
    moments: &CenteredMoments,
    mode: DenominatorMode,
    alpha: f64,
    policy: RegularizationPolicy,
) -> Result<ConfidenceRectangle> {
    let n = sample.len();
    let p = sample.dim();
    let z = rectangle_cutoff(alpha, p)?;
    let d = randomized_denominator(n, weights, theta, moments, mode)?;
    let w_sum: f64 = weights.iter().map(|w| w - theta).sum();
    if w_sum == 0.0 {
        return Ok(ConfidenceRectangle::whole_space(p));
    }
    let (root, inv_root) = eigen_roots(&sample.covariance(), policy)?;
    let mut t_vec = DVector::<f64>::zeros(p);
    for (row, w) in sample.data.row_iter().zip(weights) {
        t_vec += row.transpose() * (w - theta);
    }
    Ok(ConfidenceRectangle {
        center: t_vec / w_sum,
        halfwidths: bounding_coefficients(&root) * (z * d / w_sum.abs()),
        standardizer: inv_root * (w_sum.abs() / d),
        cutoff: z,
        degenerate: false,
    })
}

/// Mardia-type multivariate skewness of the rows:
/// (1/n^2) sum_{i,j} [(x_i - mean)' S^{-1} (x_j - mean)]^3 with divisor-n
/// covariance. Computed by expanding the cube into third-moment monomials of
/// the standardized rows — O(n p^3) instead of the literal O(n^2 p^2) double
/// sum, and exactly equal to it.
pub fn mardia_skewness(rows: &[Vec<f64>], policy: RegularizationPolicy) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::MissingSampleSize);
    }
    let p = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != p) {
        return Err(Error::DimensionMismatch { expected: p, got: bad.len() });
    }
    let n = rows.len();
    let nf = n as f64;
    let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    let data = DMatrix::from_row_slice(n, p, &flat);
    let cov = covariance_of(&data, nf);
    let (_, inv_root) = eigen_roots(&cov, policy)?;
    let mean = DVector::<f64>::from_iterator(p, data.column_iter().map(|c| c.sum() / nf));

    // Standardized rows z_i = S^{-1/2} (x_i - mean).
    let mut z = DMatrix::<f64>::zeros(n, p);
    for (i, row) in data.row_iter().enumerate() {
        let zi = &inv_root * (row.transpose() - &mean);
        z.row_mut(i).copy_from(&zi.transpose());
    }

    // sum_{i,j} (z_i' z_j)^3 = sum over ordered coordinate triples (a,b,c) of
    // (sum_i z_ia z_ib z_ic)^2; group the triples by sorted key.
    let mut total = 0.0;
    for a in 0..p {
        for b in a..p {
            for c in b..p {
                let t: f64 = (0..n).map(|i| z[(i, a)] * z[(i, b)] * z[(i, c)]).sum();
                let mult = if a == c {
                    1.0 // all three coordinates equal
                } else if a == b || b == c {
                    3.0
                } else {
                    6.0
                };
                total += mult * t * t;
            }
        }
    }
    Ok(total / (nf * nf))
}

/// How randomization rescales the population Mardia skewness: multiplying
/// centered rows by independent (w - theta) factors multiplies the skewness
/// by the squared skewness-reducing factor.
pub fn mardia_randomization_scaling(srf: f64, beta: f64) -> f64 {
    srf * srf * beta
}

/// Rows (w_i - theta)(x_i - rowmean), the randomized observations whose
/// skewness the factor is meant to shrink.
pub fn randomized_rows(rows: &[Vec<f64>], weights: &[f64], theta: f64) -> Result<Vec<Vec<f64>>> {
    if rows.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: rows.len(), got: weights.len() });
    }
    if rows.is_empty() {
        return Err(Error::MissingSampleSize);
    }
    let p = rows[0].len();
    let n = rows.len() as f64;
    let mut mean = vec![0.0; p];
    for r in rows {
        for (m, x) in mean.iter_mut().zip(r) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    Ok(rows
        .iter()
        .zip(weights)
        .map(|(r, w)| r.iter().zip(&mean).map(|(x, m)| (w - theta) * (x - m)).collect())
        .collect())
}

/// Standardized third central moment m3 / m2^{3/2} of a univariate sample
/// (moment divisors n).
pub fn sample_skewness(data: &[f64]) -> Result<f64> {
    if data.len() < 2 {
        return Err(Error::MissingSampleSize);
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let m2 = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = data.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    if m2 == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(m3 / m2.powf(1.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect()
    }

    #[test]
    fn inverse_sqrt_diagonal_case() {
        let m = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let inv = inverse_sqrt(&m, RegularizationPolicy::Fail).unwrap();
        assert!((inv[(0, 0)] - 0.5).abs() < 1e-14);
        assert!((inv[(1, 1)] - 1.0 / 3.0).abs() < 1e-14);
        assert!(inv[(0, 1)].abs() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_whitens() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [2, 3, 5] {
            let a = DMatrix::<f64>::from_fn(p, p, |_, _| rng.gen_range(-1.0..1.0));
            let m = &a * a.transpose() + DMatrix::identity(p, p) * 0.3;
            let inv = inverse_sqrt(&m, RegularizationPolicy::Fail).unwrap();
            let whitened = &inv * &m * &inv;
            assert!((whitened - DMatrix::<f64>::identity(p, p)).amax() < 1e-10);
        }
    }

    #[test]
    fn inverse_sqrt_policy_on_singular_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            inverse_sqrt(&m, RegularizationPolicy::Fail),
            Err(Error::SingularStandardizer)
        ));
        let inv = inverse_sqrt(&m, RegularizationPolicy::Ridge).unwrap();
        assert!(inv.iter().all(|x| x.is_finite()));
        let zero = DMatrix::<f64>::zeros(3, 3);
        let inv = inverse_sqrt(&zero, RegularizationPolicy::Ridge).unwrap();
        assert_eq!(inv, DMatrix::identity(3, 3));
    }

    #[test]
    fn inverse_sqrt_rejects_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.5, 1.0]);
        assert!(matches!(
            inverse_sqrt(&m, RegularizationPolicy::Ridge),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn classical_statistic_scalar_case() {
        // For p = 1 the statistic is sqrt(n)(mean - mu)/s with divisor n - 1.
        let rows: Vec<Vec<f64>> = vec![vec![0.0], vec![2.0], vec![4.0]];
        let s = MultivariateSample::new(&rows, &[1.0]).unwrap();
        let t = t_multivariate(&s, RegularizationPolicy::Fail).unwrap();
        let expect = 3.0_f64.sqrt() * (2.0 - 1.0) / 2.0; // s_{n-1} = 2
        assert!((t[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn rectangle_cutoff_reference_values() {
        assert!((rectangle_cutoff(0.05, 1).unwrap() - 1.9599639845).abs() < 1e-9);
        assert!((rectangle_cutoff(0.05, 2).unwrap() - 2.2364766446).abs() < 1e-9);
        assert!((rectangle_cutoff(0.05, 3).unwrap() - 2.3877378871).abs() < 1e-9);
        assert!(rectangle_cutoff(1.5, 2).is_err());
    }

    #[test]
    fn classical_rectangle_matches_bivariate_closed_form() {
        // With [a b; b c] the inverse square root of S and b >= 0 (negatively
        // correlated coordinates), the halfwidths are z(b+c)/((ac-b^2) sqrt n)
        // and z(a+b)/((ac-b^2) sqrt n), with area the product of the sides.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let x: f64 = rng.gen_range(-1.0..1.0);
                vec![x, -x + 0.3 * rng.gen_range(-1.0..1.0)]
            })
            .collect();
        let s = MultivariateSample::new(&rows, &[0.0, 0.0]).unwrap();
        let inv = inverse_sqrt(&s.covariance(), RegularizationPolicy::Fail).unwrap();
        let (a, b, c) = (inv[(0, 0)], inv[(0, 1)], inv[(1, 1)]);
        assert!(b > 0.0, "construction should give a positive off-diagonal, got {b}");
        let rect = classical_rectangle(&s, 0.05, RegularizationPolicy::Fail).unwrap();
        let z = rectangle_cutoff(0.05, 2).unwrap();
        let det = a * c - b * b;
        let nf = n as f64;
        let h0 = z * (b + c) / (det * nf.sqrt());
        let h1 = z * (a + b) / (det * nf.sqrt());
        assert!((rect.halfwidths[0] - h0).abs() < 1e-10);
        assert!((rect.halfwidths[1] - h1).abs() < 1e-10);
        let area = (2.0 * z) * (2.0 * z) * (b + c) * (a + b) / (nf * det * det);
        assert!((rect.volume() - area).abs() < 1e-10);
    }

    #[test]
    fn rectangle_bounds_standardized_region() {
        // Every mu with |[S^{-1/2} sum (w - theta)(x - mu)]_k| <= z D lies in
        // the rectangle: the box circumscribes the standardized region.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows = random_rows(&mut rng, 30, 2);
        let weights: Vec<f64> = (0..30).map(|_| rng.gen_range(0.0..15.0)).collect();
        let theta = 9.3;
        let m = CenteredMoments { mu_k2: 19.29, mu_k3: -52.767, mu_k4: 2000.0 };
        let s = MultivariateSample::new(&rows, &[0.0, 0.0]).unwrap();
        let rect = randomized_rectangle(
            &s,
            &weights,
            theta,
            &m,
            DenominatorMode::Expected,
            0.05,
            RegularizationPolicy::Fail,
        )
        .unwrap();
        let z = rectangle_cutoff(0.05, 2).unwrap();
        let d = randomized_denominator(30, &weights, theta, &m, DenominatorMode::Expected).unwrap();
        let inv = inverse_sqrt(&s.covariance(), RegularizationPolicy::Fail).unwrap();
        let mut inside_region = 0;
        for _ in 0..500 {
            let mu = vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let probe = MultivariateSample::new(&rows, &mu).unwrap();
            let mut acc = DVector::<f64>::zeros(2);
            for (row, w) in probe.data.row_iter().zip(&weights) {
                acc += (row.transpose() - probe.mu()) * (w - theta);
            }
            let g = &inv * acc / d;
            if g.amax() <= z {
                inside_region += 1;
                assert!(rect.contains(&mu), "standardized region point escaped the rectangle");
            }
        }
        assert!(inside_region > 0, "probe grid never hit the region; test is vacuous");
    }

    #[test]
    fn rectangle_duality_for_uncorrelated_coordinates() {
        // When S is exactly diagonal the rectangle equals the standardized
        // region, so membership matches the per-coordinate pivot test exactly.
        let rows: Vec<Vec<f64>> = vec![
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, -1.0],
            vec![2.0, 0.0],
            vec![-2.0, 0.0],
        ];
        let s = MultivariateSample::new(&rows, &[0.0, 0.0]).unwrap();
        let cov = s.covariance();
        assert!(cov[(0, 1)].abs() < 1e-12);
        let rect = classical_rectangle(&s, 0.05, RegularizationPolicy::Fail).unwrap();
        let z = rectangle_cutoff(0.05, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let mu = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let probe = MultivariateSample::new(&rows, &mu).unwrap();
            let t = t_multivariate(&probe, RegularizationPolicy::Fail).unwrap();
            assert_eq!(rect.contains(&mu), t.amax() <= z);
        }
    }

    #[test]
    fn degenerate_weight_sum_gives_whole_space() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 0.0], vec![3.0, 1.0]];
        let s = MultivariateSample::new(&rows, &[0.0, 0.0]).unwrap();
        let m = CenteredMoments { mu_k2: 1.0, mu_k3: 0.0, mu_k4: 1.0 };
        let rect = randomized_rectangle(
            &s,
            &[2.0, 0.0],
            1.0,
            &m,
            DenominatorMode::Empirical,
            0.05,
            RegularizationPolicy::Ridge,
        )
        .unwrap();
        assert!(rect.degenerate);
        assert!(rect.contains(&[1e300, -1e300]));
    }

    #[test]
    fn mardia_reduces_to_squared_skewness_in_one_dimension() {
        let data = [0.4, 1.9, 0.1, 3.2, 0.8, 0.5, 2.2, 0.3, 1.1, 0.6];
        let rows: Vec<Vec<f64>> = data.iter().map(|&x| vec![x]).collect();
        let beta = mardia_skewness(&rows, RegularizationPolicy::Fail).unwrap();
        let g = sample_skewness(&data).unwrap();
        assert!((beta - g * g).abs() < 1e-12, "{beta} vs {}", g * g);
    }

    #[test]
    fn mardia_matches_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for (n, p) in [(15, 2), (40, 3), (25, 4)] {
            let rows = random_rows(&mut rng, n, p);
            let fast = mardia_skewness(&rows, RegularizationPolicy::Fail).unwrap();
            // Literal definition, recomputed from scratch.
            let s = MultivariateSample::new(&rows, &vec![0.0; p]).unwrap();
            let cov = covariance_of(&s.data, n as f64);
            let inv = cov.clone().try_inverse().unwrap();
            let mean = s.mean();
            let devs: Vec<DVector<f64>> =
                s.data.row_iter().map(|r| r.transpose() - &mean).collect();
            let mut total = 0.0;
            for di in &devs {
                for dj in &devs {
                    total += (di.transpose() * &inv * dj)[(0, 0)].powi(3);
                }
            }
            let slow = total / (n as f64 * n as f64);
            assert!((fast - slow).abs() < 1e-9 * (1.0 + slow.abs()), "{fast} vs {slow}");
        }
    }

    #[test]
    fn mardia_is_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rows = random_rows(&mut rng, 50, 3);
        let base = mardia_skewness(&rows, RegularizationPolicy::Fail).unwrap();
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[2.0, 0.3, -0.1, 0.0, 1.5, 0.4, 0.2, -0.2, 0.9],
        );
        let shift = DVector::from_column_slice(&[5.0, -3.0, 0.7]);
        let mapped: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                let v = &a * DVector::from_column_slice(r) + &shift;
                v.iter().copied().collect()
            })
            .collect();
        let transformed = mardia_skewness(&mapped, RegularizationPolicy::Fail).unwrap();
        assert!((base - transformed).abs() < 1e-8 * (1.0 + base.abs()));
    }

    #[test]
    fn randomization_scaling_matches_product_rule() {
        assert!((mardia_randomization_scaling(0.5, 14.0) - 3.5).abs() < 1e-14);
        assert_eq!(mardia_randomization_scaling(0.0, 14.0), 0.0);
    }

    #[test]
    fn randomized_rows_center_and_scale() {
        let rows = vec![vec![1.0, 10.0], vec![3.0, 20.0], vec![5.0, 30.0]];
        let out = randomized_rows(&rows, &[2.0, 1.0, 0.0], 1.0).unwrap();
        // Means are (3, 20); factors (w - 1) are (1, 0, -1).
        assert_eq!(out[0], vec![-2.0, -10.0]);
        assert_eq!(out[1], vec![0.0, 0.0]);
        assert_eq!(out[2], vec![-2.0, -10.0]);
    }

    #[test]
    fn sample_skewness_signs() {
        assert!(sample_skewness(&[0.0, 0.0, 0.0, 10.0]).unwrap() > 0.0);
        assert!(sample_skewness(&[0.0, 10.0, 10.0, 10.0]).unwrap() < 0.0);
        assert!(matches!(sample_skewness(&[2.0, 2.0, 2.0]), Err(Error::ZeroVariance)));
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            MultivariateSample::new(&[vec![1.0]], &[0.0]),
            Err(Error::MissingSampleSize)
        ));
        assert!(matches!(
            MultivariateSample::new(&[vec![1.0, 2.0], vec![3.0]], &[0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            MultivariateSample::new(&[vec![1.0, 2.0], vec![3.0, 4.0]], &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
