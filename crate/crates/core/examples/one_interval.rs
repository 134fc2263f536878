//! Build one randomized confidence interval end to end: solve the window
//! constant, draw weights, and invert the pivot. Mirrors the README example.

use randpivot::intervals::randomized_interval;
use randpivot::pivots::UnivariateSample;
use randpivot::solver::{solve_method1, Side};
use randpivot::weights::WeightScheme;
use randpivot::DenominatorMode;
use rand::SeedableRng;

fn main() -> randpivot::Result<()> {
    let scheme = WeightScheme::chi_square(7)?;
    let theta = solve_method1(&scheme, 1e-4, Side::AboveMean)?.theta;
    let moments = scheme.centered_moments(theta, None)?;

    let data = [0.3, 1.9, 0.4, 2.6, 0.2, 0.8, 4.1, 0.5];
    let sample = UnivariateSample::new(&data, 0.0)?; // hypothesized mean unused here
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let weights = scheme.sample(data.len(), &mut rng)?;

    let ci = randomized_interval(
        &sample, &weights, theta, &moments, DenominatorMode::Expected, 0.05,
    )?;
    println!("95% interval: [{}, {}]", ci.lo, ci.hi);
    Ok(())
}
