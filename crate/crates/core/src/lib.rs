//! Randomized Student-t pivots with a tunable skewness-reducing factor (SRF).
//!
//! The pivot `g_n(theta) = sum (w_i - theta)(X_i - mu) / (S_n sqrt(n E(w - theta)^2))`
//! multiplies each centered observation by an independently drawn weight shifted
//! by a window constant `theta`. The skewness of the products is the data skewness
//! times the SRF of the weight law at `theta`, so choosing `theta` scales the
//! leading Edgeworth error term of the classical t statistic by an arbitrary
//! factor `delta`, including zero.
//!
//! Modules follow the pipeline: [`weights`] (weight laws and exact moments),
//! [`solver`] (window constants for a target SRF), [`pivots`] and [`intervals`]
//! (univariate statistics and confidence intervals, including a bootstrap-t
//! baseline), [`multivariate`] (standardized vector pivots, confidence
//! rectangles, Mardia skewness), [`edgeworth`] (expansion evaluators),
//! [`datagen`] (sampling laws used by the study), and [`harness`] (reproducible
//! Monte Carlo experiments and table/figure regeneration).

pub mod datagen;
pub mod edgeworth;
pub mod error;
pub mod harness;
pub mod intervals;
pub mod multivariate;
pub mod normal;
pub mod pivots;
pub mod solver;
pub mod weights;

pub use datagen::DataLaw;
pub use edgeworth::{ExpansionInputs, ThirdMomentTensor};
pub use error::{Error, Result};
pub use harness::{
    parse_config, parse_config_file, run_bivariate, run_bootstrap_comparison,
    run_figure_diagnostics, run_table, run_univariate, BootstrapComparison, ExperimentResult,
    ExperimentSpec, FigureDiagnostics, FigureKind, Method, ResultRow, ThetaSpec,
};
pub use intervals::ConfidenceInterval;
pub use multivariate::{ConfidenceRectangle, MultivariateSample, RegularizationPolicy};
pub use pivots::DenominatorMode;
pub use solver::{Side, SolveMethod, WindowSolution};
pub use weights::{CenteredMoments, WeightScheme};
