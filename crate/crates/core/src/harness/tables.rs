//! The twelve standard coverage studies, regenerable at any replication count.
//!
//! Grid layout (laws x sample sizes x arms):
//!  1. six skewed laws, n in {10, 20, 30}: chi-square(7) weights at 9.3 vs classical t
//!  2. same grid with Bernoulli(1/3) weights at 0.58
//!  3. six laws, n in {10, 20, 100}: symmetric normal weights at their mean vs classical t
//!  4. six laws: triangular weights at 1.32215 paired with bootstrap-t (B = 1000)
//!  5. lognormal, n = 10: triangular weights at the finite-10 window constant
//!  6. lognormal, n = 20: triangular weights at the finite-20 window constant
//!  7. (X, X^2) pairs: chi-square(7) weights at 9.3 vs classical, rectangles
//!  8. (X, X^2) pairs: Bernoulli(1/3) weights at 0.58 vs classical
//!  9. moving-average pairs: chi-square(7) weights at 9.3 vs classical
//! 10. moving-average pairs: Bernoulli(1/3) weights at 0.58 vs classical
//! 11. (X, X^2) pairs: triangular weights at 1.32215 vs classical
//! 12. moving-average pairs: triangular weights at 1.32215 vs classical

use super::output::{result_row, ResultRow};
use super::{
    run_bivariate, run_bootstrap_comparison, run_univariate, ExperimentSpec, Method, ThetaSpec,
};
use crate::datagen::{DataLaw, MaBase, SquareBase};
use crate::error::{Error, Result};
use crate::solver::Side;
use crate::weights::WeightScheme;

pub const TABLE_COUNT: u8 = 12;

/// Spreads consecutive row indices into well-separated per-row seeds
/// (golden-ratio multiplier); both arms of a row share the seed, hence the data.
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// One-line description of a table id, for CLI echo and docs.
pub fn table_description(id: u8) -> Result<&'static str> {
    let text = match id {
        1 => "six skewed laws, chi-square(7) weights at theta 9.3 vs classical t",
        2 => "six skewed laws, Bernoulli(1/3) weights at theta 0.58 vs classical t",
        3 => "six laws, symmetric normal weights at their mean vs classical t",
        4 => "six skewed laws, triangular weights at 1.32215 paired with bootstrap-t",
        5 => "lognormal n=10, triangular weights at the finite-n window constant",
        6 => "lognormal n=20, triangular weights at the finite-n window constant",
        7 => "(X, X^2) pairs, chi-square(7) weights at 9.3 vs classical rectangles",
        8 => "(X, X^2) pairs, Bernoulli(1/3) weights at 0.58 vs classical rectangles",
        9 => "moving-average pairs, chi-square(7) weights at 9.3 vs classical rectangles",
        10 => "moving-average pairs, Bernoulli(1/3) weights at 0.58 vs classical rectangles",
        11 => "(X, X^2) pairs, triangular weights at 1.32215 vs classical rectangles",
        12 => "moving-average pairs, triangular weights at 1.32215 vs classical rectangles",
        _ => return Err(Error::Config(format!("table id must lie in 1..={TABLE_COUNT}, got {id}"))),
    };
    Ok(text)
}

/// The six univariate laws every interval study cycles through.
fn univariate_laws() -> [DataLaw; 6] {
    [
        DataLaw::Binomial { trials: 10, p: 0.1 },
        DataLaw::Poisson { lambda: 1.0 },
        DataLaw::Lognormal { location: 0.0, scale: 1.0 },
        DataLaw::Exponential { rate: 1.0 },
        DataLaw::ChiSquare { df: 1 },
        DataLaw::Beta { a: 5.0, b: 1.0 },
    ]
}

/// The bivariate square-pair grid: light-tailed base at moderate n, heavier
/// exponential base at larger n.
fn square_pair_grid() -> [(DataLaw, [usize; 3]); 2] {
    [
        (DataLaw::SquarePair { base: SquareBase::Normal }, [30, 50, 100]),
        (DataLaw::SquarePair { base: SquareBase::Exponential }, [100, 300, 400]),
    ]
}

/// The bivariate moving-average grid.
fn ma_pair_grid() -> [(DataLaw, [usize; 2]); 2] {
    [
        (DataLaw::Ma1Pair { base: MaBase::Normal }, [10, 20]),
        (DataLaw::Ma1Pair { base: MaBase::CenteredExponential }, [30, 50]),
    ]
}

/// Short id-safe tag for a law (no commas or parentheses).
fn law_slug(law: &DataLaw) -> &'static str {
    match law {
        DataLaw::Binomial { .. } => "binomial",
        DataLaw::Poisson { .. } => "poisson",
        DataLaw::Lognormal { .. } => "lognormal",
        DataLaw::Exponential { .. } => "exponential",
        DataLaw::ChiSquare { .. } => "chisquare",
        DataLaw::Beta { .. } => "beta",
        DataLaw::Normal { .. } => "normal",
        DataLaw::SquarePair { base: SquareBase::Normal } => "xx2-normal",
        DataLaw::SquarePair { base: SquareBase::Exponential } => "xx2-exponential",
        DataLaw::Ma1Pair { base: MaBase::Normal } => "ma1-normal",
        DataLaw::Ma1Pair { base: MaBase::CenteredExponential } => "ma1-exponential",
    }
}

/// The randomized arm of one table: scheme, window constant, and method.
#[derive(Clone, Copy)]
struct RandomizedArm {
    scheme: WeightScheme,
    theta: ThetaSpec,
    method: Method,
}

fn chi_square_arm() -> RandomizedArm {
    RandomizedArm {
        scheme: WeightScheme::chi_square(7).expect("df >= 1"),
        theta: ThetaSpec::Fixed(9.3),
        method: Method::MethodI,
    }
}

fn bernoulli_arm() -> RandomizedArm {
    RandomizedArm {
        scheme: WeightScheme::bernoulli(1.0 / 3.0).expect("p in (0,1)"),
        theta: ThetaSpec::Fixed(0.58),
        method: Method::MethodI,
    }
}

fn symmetric_arm() -> RandomizedArm {
    RandomizedArm {
        scheme: WeightScheme::normal(0.0, 1.0).expect("positive variance"),
        theta: ThetaSpec::AtMean,
        method: Method::MethodII,
    }
}

fn triangular_limit_arm() -> RandomizedArm {
    RandomizedArm {
        scheme: WeightScheme::multinomial_symmetric(),
        theta: ThetaSpec::Fixed(1.32215),
        method: Method::MethodI1,
    }
}

fn triangular_finite_arm() -> RandomizedArm {
    RandomizedArm {
        scheme: WeightScheme::multinomial_symmetric(),
        theta: ThetaSpec::Solve { delta: 1e-4, side: Side::AboveMean },
        method: Method::MethodI2,
    }
}

fn spec_for(
    table: u8,
    law: DataLaw,
    n: usize,
    arm: Option<RandomizedArm>,
    replications: usize,
    seed: u64,
    row_index: u64,
) -> ExperimentSpec {
    let id = format!("t{table}-{}-n{n}", law_slug(&law));
    let method = arm.map_or(Method::ClassicalT, |a| a.method);
    let mut spec = ExperimentSpec::new(id, law, method, n);
    if let Some(a) = arm {
        spec = spec.with_weights(a.scheme, a.theta);
    }
    spec.replications = replications;
    spec.seed = seed.wrapping_add(row_index.wrapping_mul(SEED_STRIDE));
    spec
}

/// Regenerate one study table at the given replication count and base seed.
/// Rows come out in grid order, randomized arm before its comparator.
pub fn run_table(id: u8, replications: usize, seed: u64) -> Result<Vec<ResultRow>> {
    match id {
        1 => interval_table(1, chi_square_arm(), &[10, 20, 30], replications, seed),
        2 => interval_table(2, bernoulli_arm(), &[10, 20, 30], replications, seed),
        3 => interval_table(3, symmetric_arm(), &[10, 20, 100], replications, seed),
        4 => bootstrap_table(replications, seed),
        5 => finite_window_table(5, 10, replications, seed),
        6 => finite_window_table(6, 20, replications, seed),
        7 => rectangle_table(7, chi_square_arm(), replications, seed, false),
        8 => rectangle_table(8, bernoulli_arm(), replications, seed, false),
        9 => rectangle_table(9, chi_square_arm(), replications, seed, true),
        10 => rectangle_table(10, bernoulli_arm(), replications, seed, true),
        11 => rectangle_table(11, triangular_limit_arm(), replications, seed, false),
        12 => rectangle_table(12, triangular_limit_arm(), replications, seed, true),
        _ => Err(Error::Config(format!("table id must lie in 1..={TABLE_COUNT}, got {id}"))),
    }
}

/// Univariate interval study: each (law, n) row runs the randomized arm and
/// the classical comparator on the same data.
fn interval_table(
    table: u8,
    arm: RandomizedArm,
    sizes: &[usize],
    replications: usize,
    seed: u64,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let mut row_index = 0_u64;
    for law in univariate_laws() {
        for &n in sizes {
            let randomized = spec_for(table, law, n, Some(arm), replications, seed, row_index);
            let classical = spec_for(table, law, n, None, replications, seed, row_index);
            rows.push(result_row(&randomized, &run_univariate(&randomized)?));
            rows.push(result_row(&classical, &run_univariate(&classical)?));
            row_index += 1;
        }
    }
    Ok(rows)
}

/// Paired triangular-vs-bootstrap study. The discrete laws skip below n = 13,
/// where near-constant samples make both arms trivial.
fn bootstrap_table(replications: usize, seed: u64) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let mut row_index = 0_u64;
    for law in univariate_laws() {
        let sizes: [usize; 3] = match law {
            DataLaw::Binomial { .. } | DataLaw::Poisson { .. } => [13, 20, 30],
            _ => [10, 20, 30],
        };
        for n in sizes {
            let spec =
                spec_for(4, law, n, Some(triangular_limit_arm()), replications, seed, row_index);
            let paired = run_bootstrap_comparison(&spec)?;
            rows.push(result_row(&spec, &paired.randomized));
            rows.push(result_row(&spec, &paired.bootstrap));
            row_index += 1;
        }
    }
    Ok(rows)
}

/// Single-row lognormal study at the finite-n triangular window constant;
/// no comparator column.
fn finite_window_table(
    table: u8,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<Vec<ResultRow>> {
    let law = DataLaw::Lognormal { location: 0.0, scale: 1.0 };
    let spec = spec_for(table, law, n, Some(triangular_finite_arm()), replications, seed, 0);
    Ok(vec![result_row(&spec, &run_univariate(&spec)?)])
}

/// Bivariate rectangle study over either pair grid.
fn rectangle_table(
    table: u8,
    arm: RandomizedArm,
    replications: usize,
    seed: u64,
    moving_average: bool,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let mut row_index = 0_u64;
    let grid: Vec<(DataLaw, Vec<usize>)> = if moving_average {
        ma_pair_grid().iter().map(|(l, s)| (*l, s.to_vec())).collect()
    } else {
        square_pair_grid().iter().map(|(l, s)| (*l, s.to_vec())).collect()
    };
    for (law, sizes) in grid {
        for n in sizes {
            let randomized = spec_for(table, law, n, Some(arm), replications, seed, row_index);
            let classical = spec_for(table, law, n, None, replications, seed, row_index);
            rows.push(result_row(&randomized, &run_bivariate(&randomized)?));
            rows.push(result_row(&classical, &run_bivariate(&classical)?));
            row_index += 1;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_id_runs_at_small_scale() {
        for id in 1..=TABLE_COUNT {
            let rows = run_table(id, 8, 3).unwrap_or_else(|e| panic!("table {id}: {e}"));
            assert!(!rows.is_empty(), "table {id} empty");
            for row in &rows {
                assert!(row.experiment_id.starts_with(&format!("t{id}-")), "{}", row.experiment_id);
                assert!((0.0..=1.0).contains(&row.coverage));
            }
        }
    }

    #[test]
    fn table_shapes_match_their_grids() {
        assert_eq!(run_table(1, 2, 1).unwrap().len(), 36);
        assert_eq!(run_table(3, 2, 1).unwrap().len(), 36);
        assert_eq!(run_table(4, 2, 1).unwrap().len(), 36);
        assert_eq!(run_table(5, 2, 1).unwrap().len(), 1);
        assert_eq!(run_table(7, 2, 1).unwrap().len(), 12);
        assert_eq!(run_table(9, 2, 1).unwrap().len(), 8);
        assert_eq!(run_table(12, 2, 1).unwrap().len(), 8);
    }

    #[test]
    fn rows_pair_arms_on_shared_seeds() {
        let rows = run_table(1, 2, 42).unwrap();
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].experiment_id, pair[1].experiment_id);
            assert_eq!(pair[0].seed, pair[1].seed);
            assert_ne!(pair[0].method, pair[1].method);
        }
    }

    #[test]
    fn unknown_table_id_is_rejected() {
        assert!(run_table(0, 2, 1).is_err());
        assert!(run_table(13, 2, 1).is_err());
        assert!(table_description(13).is_err());
        assert!(table_description(12).is_ok());
    }

    #[test]
    fn reruns_are_identical() {
        let a = run_table(5, 20, 9).unwrap();
        let b = run_table(5, 20, 9).unwrap();
        assert_eq!(a, b);
    }
}
