//! Window-constant solvers: find theta with SRF(theta) = delta.
//!
//! Method I shifts a skewed i.i.d. weight law; Method II takes a symmetric law
//! at its mean (SRF identically zero); Methods I.1 and I.2 solve the triangular
//! scheme's limit and finite-n SRF formulas. The root finder scans the bracket
//! for sign changes, then runs bisection with Newton refinement inside the
//! bracketing pair; when several roots exist on the chosen side, the one
//! closest to the weight mean wins (least weight distortion).

use crate::error::{Error, Result};
use crate::weights::{srf_multinomial_finite, srf_multinomial_limit, WeightScheme};

/// Which side of the weight mean to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    BelowMean,
    AboveMean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMethod {
    /// Skewed i.i.d. weights, theta away from the mean, SRF driven to delta.
    MethodI,
    /// Symmetric i.i.d. weights evaluated at their mean; SRF is exactly zero.
    MethodII,
    /// Triangular scheme against the limiting (Poisson) SRF formula.
    MethodI1,
    /// Triangular scheme against the exact finite-n SRF formula.
    MethodI2 { n: u64 },
}

/// A solved window constant and the diagnostics of how it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSolution {
    pub theta: f64,
    /// SRF evaluated at `theta`; equals the requested delta up to solver tolerance.
    pub achieved_delta: f64,
    pub method: SolveMethod,
    /// Scan subinterval that bracketed the root: SRF - delta changes sign across it.
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Relative exclusion gap around the weight mean: Method I requires
/// |theta - mean| >= GAP_SCALE * max(1, |mean|).
const GAP_SCALE: f64 = 1e-6;
/// Bracket half-width in units of the weight standard deviation.
const BRACKET_SDS: f64 = 50.0;
/// Convergence tolerance on theta (relative to max(1, |theta|)).
const THETA_TOL: f64 = 1e-12;
const MAX_ITER: u32 = 200;
/// Scan resolution used to locate sign changes before refining.
const SCAN_POINTS: usize = 2048;

/// Solve SRF(theta) = delta for an i.i.d. scheme on the given side of its mean.
pub fn solve_method1(scheme: &WeightScheme, delta: f64, side: Side) -> Result<WindowSolution> {
    if scheme.triangular() {
        return Err(Error::InvalidParameter(
            "triangular scheme: use the I.1 or I.2 solver".into(),
        ));
    }
    if scheme.symmetric() && delta == 0.0 {
        // A symmetric law has SRF(theta) = c(3 c2 + c^2)/(c2 + c^2)^{3/2} with
        // c = mean - theta, whose only zero is the excluded mean itself.
        return Err(Error::ExclusionViolation);
    }
    let mean = scheme.mean(None)?;
    let sd = scheme.sd(None)?;
    let f = |theta: f64| scheme.srf(theta, None).expect("moments exist");
    let fp = |theta: f64| scheme.srf_derivative(theta, None).expect("moments exist");
    let sol = solve_on_side(&f, &fp, mean, sd, delta, side)?;
    Ok(WindowSolution { method: SolveMethod::MethodI, ..sol })
}

/// Method II: theta is the mean of a symmetric law; no search involved.
pub fn solve_method2(scheme: &WeightScheme) -> Result<WindowSolution> {
    if !scheme.symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mean = scheme.mean(None)?;
    Ok(WindowSolution {
        theta: mean,
        achieved_delta: 0.0,
        method: SolveMethod::MethodII,
        bracket: (mean, mean),
        iterations: 0,
    })
}

/// Method I.1: solve the triangular scheme's limit SRF formula for delta.
/// Prefers the side above the limiting mean 1; falls back to the side below
/// when delta is only attainable there.
pub fn solve_method1_1(delta: f64) -> Result<WindowSolution> {
    let f = srf_multinomial_limit;
    let fp = |theta: f64| limit_srf_derivative(theta);
    let sol = solve_with_fallback(&f, &fp, 1.0, 1.0, delta)?;
    Ok(WindowSolution { method: SolveMethod::MethodI1, ..sol })
}

/// Method I.2: solve the exact finite-n triangular SRF for delta at this n.
pub fn solve_method1_2(n: u64, delta: f64) -> Result<WindowSolution> {
    let scheme = WeightScheme::multinomial_symmetric();
    let sd = scheme.sd(Some(n))?;
    let f = move |theta: f64| srf_multinomial_finite(theta, n).expect("n validated");
    let fp = move |theta: f64| scheme.srf_derivative(theta, Some(n)).expect("n validated");
    let sol = solve_with_fallback(&f, &fp, 1.0, sd, delta)?;
    Ok(WindowSolution { method: SolveMethod::MethodI2 { n }, ..sol })
}

fn limit_srf_derivative(theta: f64) -> f64 {
    // Limit margin has mean 1, c2 = 1, c3 = 1 (Poisson(1) central moments).
    let c = 1.0 - theta;
    let num = 1.0 + 3.0 * c + c * c * c;
    let den = 1.0 + c * c;
    (-3.0 * (c * c + 1.0) * den + 3.0 * num * c) / den.powf(2.5)
}

fn solve_with_fallback(
    f: &dyn Fn(f64) -> f64,
    fp: &dyn Fn(f64) -> f64,
    mean: f64,
    sd: f64,
    delta: f64,
) -> Result<WindowSolution> {
    match solve_on_side(f, fp, mean, sd, delta, Side::AboveMean) {
        Ok(sol) => Ok(sol),
        Err(Error::NoRootInBracket { .. }) => solve_on_side(f, fp, mean, sd, delta, Side::BelowMean),
        Err(e) => Err(e),
    }
}

fn solve_on_side(
    f: &dyn Fn(f64) -> f64,
    fp: &dyn Fn(f64) -> f64,
    mean: f64,
    sd: f64,
    delta: f64,
    side: Side,
) -> Result<WindowSolution> {
    let gap = GAP_SCALE * mean.abs().max(1.0);
    let (lo, hi) = match side {
        Side::AboveMean => (mean + gap, mean + BRACKET_SDS * sd),
        Side::BelowMean => (mean - BRACKET_SDS * sd, mean - gap),
    };
    let g = |theta: f64| f(theta) - delta;

    // Locate every sign change on a uniform scan, refine each, keep the root
    // closest to the mean.
    let step = (hi - lo) / SCAN_POINTS as f64;
    let mut best: Option<WindowSolution> = None;
    let mut prev_x = lo;
    let mut prev_g = g(lo);
    for i in 1..=SCAN_POINTS {
        let x = if i == SCAN_POINTS { hi } else { lo + step * i as f64 };
        let gx = g(x);
        if prev_g == 0.0 || prev_g.signum() != gx.signum() {
            let (theta, iterations) = refine(&g, fp, prev_x, x, prev_g, gx);
            let cand = WindowSolution {
                theta,
                achieved_delta: f(theta),
                method: SolveMethod::MethodI, // caller overwrites
                bracket: (prev_x, x),
                iterations,
            };
            best = match best {
                Some(b) if (b.theta - mean).abs() <= (theta - mean).abs() => Some(b),
                _ => Some(cand),
            };
        }
        prev_x = x;
        prev_g = gx;
    }
    best.ok_or(Error::NoRootInBracket { lo, hi })
}

/// Bisection with Newton acceleration inside a sign-change bracket.
fn refine(
    g: &dyn Fn(f64) -> f64,
    fp: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    mut glo: f64,
    ghi: f64,
) -> (f64, u32) {
    if glo == 0.0 {
        return (lo, 0);
    }
    if ghi == 0.0 {
        return (hi, 0);
    }
    let mut x = 0.5 * (lo + hi);
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let gx = g(x);
        if gx == 0.0 {
            return (x, iterations);
        }
        if gx.signum() == glo.signum() {
            lo = x;
            glo = gx;
        } else {
            hi = x;
        }
        // Newton proposal from the current midpoint estimate; fall back to
        // bisection when it leaves the bracket or the slope vanishes.
        let d = fp(x);
        let newton = if d != 0.0 { x - gx / d } else { f64::NAN };
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= THETA_TOL * x.abs().max(1.0) {
            return (next, iterations);
        }
        x = next;
    }
    let _ = ghi;
    (x, iterations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi7() -> WeightScheme {
        WeightScheme::chi_square(7).unwrap()
    }

    #[test]
    fn method1_chi_square_zero_srf() {
        // SRF = 0 above the mean solves c^3 + 42 c + 56 = 0, c = mean - theta.
        let sol = solve_method1(&chi7(), 0.0, Side::AboveMean).unwrap();
        assert!((sol.theta - 8.2830).abs() < 1e-3, "theta = {}", sol.theta);
        assert!(sol.achieved_delta.abs() < 1e-10);
        let c = 7.0 - sol.theta;
        assert!((c * c * c + 42.0 * c + 56.0).abs() < 1e-8);
    }

    #[test]
    fn method1_round_trips_through_srf() {
        let schemes = [chi7(), WeightScheme::bernoulli(1.0 / 3.0).unwrap()];
        for scheme in &schemes {
            for delta in [0.0, 1e-4, -1e-4, 0.1, -0.1, 0.5, -0.5] {
                for side in [Side::AboveMean, Side::BelowMean] {
                    if let Ok(sol) = solve_method1(scheme, delta, side) {
                        let back = scheme.srf(sol.theta, None).unwrap();
                        assert!(
                            (back - delta).abs() < 1e-9,
                            "{scheme:?} delta {delta} side {side:?}: round trip {back}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn method1_bernoulli_reference() {
        let w = WeightScheme::bernoulli(1.0 / 3.0).unwrap();
        let sol = solve_method1(&w, -0.6997, Side::AboveMean).unwrap();
        assert!((sol.theta - 0.58).abs() < 1e-3, "theta = {}", sol.theta);
    }

    #[test]
    fn method1_symmetric_zero_is_excluded() {
        let w = WeightScheme::normal(0.0, 1.0).unwrap();
        assert_eq!(solve_method1(&w, 0.0, Side::AboveMean).unwrap_err(), Error::ExclusionViolation);
    }

    #[test]
    fn method1_unattainable_delta() {
        // SRF of a normal scheme on the above side is negative; +0.5 there fails.
        let w = WeightScheme::normal(0.0, 1.0).unwrap();
        assert!(matches!(
            solve_method1(&w, 0.5, Side::AboveMean),
            Err(Error::NoRootInBracket { .. })
        ));
    }

    #[test]
    fn method2_takes_the_mean() {
        let w = WeightScheme::normal(5.0, 4.0).unwrap();
        let sol = solve_method2(&w).unwrap();
        assert_eq!(sol.theta, 5.0);
        assert_eq!(sol.achieved_delta, 0.0);
        assert_eq!(solve_method2(&chi7()).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn method1_1_reference_constant() {
        let sol = solve_method1_1(1e-4).unwrap();
        assert!((sol.theta - 1.32215).abs() < 5e-4, "theta = {}", sol.theta);
        assert!((srf_multinomial_limit(sol.theta) - 1e-4).abs() < 1e-10);
    }

    #[test]
    fn method1_1_below_mean_fallback() {
        // 5/2^{3/2} is attainable only below the limiting mean; the inverse is
        // two-valued there (theta near 0.6449 and theta near 0) and the root
        // closest to the mean wins.
        let delta = 1.76777;
        let sol = solve_method1_1(delta).unwrap();
        assert!(sol.theta < 1.0);
        assert!((srf_multinomial_limit(sol.theta) - delta).abs() < 1e-10);
        assert!((sol.theta - 0.6449).abs() < 5e-3, "theta = {}", sol.theta);
    }

    #[test]
    fn method1_1_out_of_range() {
        assert!(matches!(solve_method1_1(10.0), Err(Error::NoRootInBracket { .. })));
    }

    #[test]
    fn method1_2_published_constants() {
        let s10 = solve_method1_2(10, 1e-4).unwrap();
        assert!((s10.theta - 1.2601).abs() < 5e-4, "theta_10 = {}", s10.theta);
        let s20 = solve_method1_2(20, 1e-4).unwrap();
        assert!((s20.theta - 1.29129).abs() < 5e-4, "theta_20 = {}", s20.theta);
    }

    #[test]
    fn method1_2_converges_to_limit() {
        let fin = solve_method1_2(1_000_000, 1e-4).unwrap();
        let lim = solve_method1_1(1e-4).unwrap();
        assert!((fin.theta - lim.theta).abs() < 1e-3);
    }

    #[test]
    fn brackets_carry_a_sign_change() {
        let sol = solve_method1_1(1e-4).unwrap();
        let (lo, hi) = sol.bracket;
        let glo = srf_multinomial_limit(lo) - 1e-4;
        let ghi = srf_multinomial_limit(hi) - 1e-4;
        assert!(glo == 0.0 || ghi == 0.0 || glo.signum() != ghi.signum());
        let sol = solve_method1(&chi7(), -0.3, Side::AboveMean).unwrap();
        let (lo, hi) = sol.bracket;
        let g = |t: f64| chi7().srf(t, None).unwrap() + 0.3;
        assert!(g(lo).signum() != g(hi).signum() || g(lo) == 0.0 || g(hi) == 0.0);
    }

    #[test]
    fn solver_is_deterministic() {
        let a = solve_method1(&chi7(), -0.25, Side::AboveMean).unwrap();
        let b = solve_method1(&chi7(), -0.25, Side::AboveMean).unwrap();
        assert_eq!(a.theta.to_bits(), b.theta.to_bits());
        assert_eq!(a.achieved_delta.to_bits(), b.achieved_delta.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn solutions_respect_the_exclusion_gap() {
        for delta in [1e-4, -1e-4] {
            if let Ok(sol) = solve_method1(&chi7(), delta, Side::AboveMean) {
                assert!((sol.theta - 7.0).abs() >= 1e-6 * 7.0_f64.max(1.0));
            }
        }
    }
}
